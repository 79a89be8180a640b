#include "vvmf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vvmf/parallel.hpp"
#include "vvmf/special_functions.hpp"

namespace vvmf {
namespace {

constexpr int kDirectTerms = 10;    // |u| <= 10 summed directly in Z(z, s)
constexpr int kBernoulliTerms = 8;  // Euler-Maclaurin corrections per side

Jet reflect(Jet j) {
  for (int p = 1; p <= j.order(); p += 2) j[p] = -j[p];
  return j;
}

// base^{-s} around s0
Jet neg_power(Complex base, Complex s0, int order) {
  const Complex lb = std::log(base);
  return exp_linear(order, std::exp(-s0 * lb), -lb);
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const std::int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

std::int64_t mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

// U(gamma) with a fast path for the trivial action
class ActionCache {
 public:
  explicit ActionCache(const UnitaryAction& a) : action_(a), kappa_(kappa_offsets(a)) {
    trivial_ = a.dimension == 1 && !a.half_integral() && std::abs(a.image_S(0, 0) - 1.0) < 1e-15 &&
               std::abs(a.image_T(0, 0) - 1.0) < 1e-15;
    phase_ = std::exp(Complex(0.0, kPi * a.weight()));
  }
  const std::vector<Rational>& kappa() const { return kappa_; }
  // column i of U(g)^{-1} + e^{i pi k} U(-g)^{-1}
  Vector m_column(const GroupElement& g, int i) const {
    if (trivial_) return Vector::Constant(1, 1.0 + phase_);
    const Matrix u = evaluate_action(action_, kappa_, g);
    const Matrix v = evaluate_action(action_, kappa_, g.negated());
    return u.adjoint().col(i) + phase_ * v.adjoint().col(i);
  }

 private:
  const UnitaryAction& action_;
  std::vector<Rational> kappa_;
  bool trivial_ = false;
  Complex phase_;
};

// Z(z, s) = sum_{u in Z} (z + u)^{-s}, Im z > 0
Jet hurwitz_line(Complex z, Complex s0, int order) {
  z -= std::round(z.real());
  Jet acc(order);
  for (int u = -kDirectTerms; u <= kDirectTerms; ++u) acc += neg_power(z + static_cast<double>(u), s0, order);
  const Jet S = Jet::variable(order, s0);
  const Jet one(order, 1.0);
  const Jet sm1 = S - one;
  const Complex xr = z + static_cast<double>(kDirectTerms + 1), xl = z - static_cast<double>(kDirectTerms + 1);
  const Jet pr = neg_power(xr, s0, order), pl = neg_power(xl, s0, order);
  acc += pow(xr, one - S) / sm1;
  acc -= pow(xl, one - S) / sm1;
  acc += 0.5 * (pr + pl);
  // (s)_m x^{-s-m} for odd m
  Jet poch = S;
  Complex ir = 1.0 / xr, il = 1.0 / xl, xr_m = ir, xl_m = il;
  double fact = 2.0;  // (2p)!
  const auto& bern = BernoulliTable::instance();
  for (int p = 1; p <= kBernoulliTerms; ++p) {
    const double c = static_cast<double>(bern.b2(p)) / fact;
    acc += (c * xr_m) * (poch * pr);
    acc -= (c * xl_m) * (poch * pl);
    // advance m -> m + 2
    const double m = 2.0 * p - 1.0;
    poch = poch * (S + Jet(order, m)) * (S + Jet(order, m + 1.0));
    xr_m *= ir * ir;
    xl_m *= il * il;
    fact *= (2.0 * p + 1.0) * (2.0 * p + 2.0);
  }
  return acc;
}

// H(w) = sum_t e^{-2 pi i kappa t} (w + t)^{-s}, kappa = p/q
Jet twisted_line(Complex w, const Rational& kappa, Complex s0, int order) {
  const std::int64_t shift = static_cast<std::int64_t>(std::llround(w.real()));
  w -= static_cast<double>(shift);
  const std::int64_t p = kappa.num, q = kappa.den;
  if (q == 1) return hurwitz_line(w, s0, order);
  Jet acc(order);
  for (std::int64_t r = 0; r < q; ++r) {
    const double ph = -kTwoPi * static_cast<double>(mod(p * r, q)) / static_cast<double>(q);
    acc += std::polar(1.0, ph) * hurwitz_line((w + static_cast<double>(r)) / static_cast<double>(q), s0, order);
  }
  acc *= neg_power(static_cast<double>(q), s0, order);
  // H(w + m) = e^{2 pi i kappa m} H(w)
  acc *= std::polar(1.0, kTwoPi * static_cast<double>(mod(p * mod(shift, q), q)) / static_cast<double>(q));
  return acc;
}

double values_norm(const std::vector<Jet>& v) {
  double n = 0.0;
  for (const auto& j : v) n = std::max(n, std::abs(j.value()));
  return n;
}

void check_order(int order) {
  if (order < 0 || order > kMaxKernelOrder)
    throw DomainError("kernel derivative order must be in 0.." + std::to_string(kMaxKernelOrder));
}

// lambda = n + kappa_j as an exact fraction num/den
struct Frequency {
  std::int64_t num, den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Frequency frequency(const std::vector<Rational>& kappa, int j, int n) {
  const Rational& k = kappa[j];
  const Frequency f{static_cast<std::int64_t>(n) * k.den + k.num, k.den};
  if (f.num <= 0) throw DomainError("coefficient index outside the cusp-form support (n + kappa_j <= 0)");
  return f;
}

}  // namespace

void KernelParams::validate() const {
  action.validate();
  const double k = weight();
  if (!(s.real() > 1.0 && s.real() < k - 1.0))
    throw DomainError("kernel needs 1 < Re s < k - 1 (got Re s = " + std::to_string(s.real()) + ", k = " + std::to_string(k) + ")");
  if (i < 0 || i >= action.dimension) throw DomainError("kernel component index out of range");
  if (!(tol > 0.0) || hard_cap < 1 || c_max < 0 || u_points < 4)
    throw DomainError("kernel truncation settings must be positive");
}

KernelConstants kernel_constants(double k, Complex s) {
  KernelConstants c;
  c.gamma_k = 0.5 * std::exp(Complex(0.0, kPi / 2.0) * s) * vvmf::gamma(s) * vvmf::gamma(k - s);
  c.c_k = std::exp(Complex(0.0, kPi * k / 2.0)) * kPi * vvmf::gamma(k - 1.0) / std::pow(2.0, k - 2.0);
  return c;
}

Jet gamma_k_jet(double k, Complex s, int order) {
  const Jet lg = log_gamma_jet(s, order) + reflect(log_gamma_jet(k - s, order));
  return 0.5 * exp_linear(order, std::exp(Complex(0.0, kPi / 2.0) * s), Complex(0.0, kPi / 2.0)) * exp(lg);
}

PointwiseValue kernel_pointwise_jets(const KernelParams& p, Complex tau, int order) {
  p.validate();
  if (!(tau.imag() > 0.0)) throw DomainError("tau must lie in the upper half-plane");
  const ActionCache cache(p.action);
  const int m = p.action.dimension;
  const double k = p.weight();
  const Rational kap = cache.kappa()[p.i];
  const Complex s0 = p.s;

  std::vector<Jet> total(m, Jet(order));
  double floor_scale = 0.0;  // size of the bare T-orbit sum; guards kernels that vanish identically
  // c = 0: gamma = +-T^t
  {
    const Jet h = twisted_line(tau, kap, s0, order);
    floor_scale = 1e-6 * std::abs(h.value());
    Vector col;
    if (m == 1 && p.action.image_S(0, 0) == Complex(1.0) && !p.action.half_integral()) {
      col = Vector::Constant(1, 1.0 + std::exp(Complex(0.0, -kPi * k)));
    } else {
      const Matrix minus = evaluate_action(p.action, cache.kappa(), GroupElement{-1, 0, 0, -1});
      col = Vector::Unit(m, p.i) + std::exp(Complex(0.0, -kPi * k)) * minus.adjoint().col(p.i);
    }
    for (int j = 0; j < m; ++j) total[j] += col(j) * h;
  }

  auto pair_term = [&](std::int64_t c, std::int64_t d) {
    std::int64_t x, y;
    ext_gcd(d, c, x, y);  // d x + c y = 1
    const GroupElement g{x, -y, c, d};
    g.validate();
    const Complex jt = static_cast<double>(c) * tau + static_cast<double>(d);
    const Jet h = twisted_line(g.act(tau), kap, s0, order);
    const Vector col = cache.m_column(g, p.i) * std::exp(-k * std::log(jt));
    std::vector<Jet> out(m, Jet(order));
    for (int j = 0; j < m; ++j) out[j] = col(j) * h;
    return out;
  };

  const double sigma = p.s.real();
  const double decay = k - sigma - 2.0;  // shell sums fall like r^{-(k - sigma - 1)}
  const int limit = p.c_max > 0 ? p.c_max : p.hard_cap;
  PointwiseValue out;
  out.converged = false;
  std::vector<double> recent;
  for (int r = 1; r <= limit; ++r) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (std::int64_t d = -r; d <= r; ++d)
      if (std::gcd(static_cast<std::int64_t>(r), std::abs(d)) == 1) pairs.emplace_back(r, d);
    for (std::int64_t c = 1; c < r; ++c) {
      if (std::gcd(c, static_cast<std::int64_t>(r)) != 1) continue;
      pairs.emplace_back(c, -r);
      pairs.emplace_back(c, r);
    }
    const auto terms = parallel_map<std::vector<Jet>>(pairs.size(), [&](std::size_t q) {
      return pair_term(pairs[q].first, pairs[q].second);
    });
    double shell_abs = 0.0;
    for (const auto& t : terms) {
      for (int j = 0; j < m; ++j) total[j] += t[j];
      shell_abs += values_norm(t);
    }
    out.shells = r;
    recent.push_back(shell_abs * r);
    if (recent.size() > 4) recent.erase(recent.begin());
    const double worst = *std::max_element(recent.begin(), recent.end());
    out.truncation_estimate = decay > 0.5 ? worst / decay : std::numeric_limits<double>::infinity();
    if (p.c_max == 0 && r >= 6 && out.truncation_estimate < p.tol * std::max(values_norm(total), floor_scale)) {
      out.converged = true;
      break;
    }
  }
  if (p.c_max > 0) out.converged = out.truncation_estimate < p.tol * std::max(values_norm(total), floor_scale);
  const Jet gk = gamma_k_jet(k, s0, order);
  for (auto& t : total) t = gk * t;
  out.truncation_estimate *= gk.norm();
  out.value = std::move(total);
  return out;
}

Vector kernel_pointwise(const KernelParams& p, Complex tau) {
  const auto v = kernel_pointwise_jets(p, tau, 0);
  Vector out(v.value.size());
  for (std::size_t j = 0; j < v.value.size(); ++j) out(j) = v.value[j].value();
  return out;
}

KernelCoefficient kernel_coeff(const KernelParams& p, int j, int n, int order) {
  p.validate();
  check_order(order);
  if (j < 0 || j >= p.action.dimension) throw DomainError("coefficient component out of range");
  const ActionCache cache(p.action);
  const Frequency freq = frequency(cache.kappa(), j, n);
  const double lam = freq.value();
  const double k = p.weight();
  const Complex s0 = p.s;
  const Jet S = Jet::variable(order, s0);
  const Jet one(order, 1.0);
  const Complex e_k = std::exp(Complex(0.0, kPi * k));
  const Complex e_half_k = std::exp(Complex(0.0, -kPi * k / 2.0));

  KernelCoefficient out;
  out.i = p.i;
  out.j = j;
  out.n = n;
  out.order = order;
  out.method = KernelMethod::Formula;

  // c = 0
  Complex m1 = (j == p.i ? 1.0 : 0.0);
  const Matrix minus_i = evaluate_action(p.action, cache.kappa(), GroupElement{-1, 0, 0, -1});
  m1 += std::conj(e_k) * std::conj(minus_i(p.i, j));
  const Jet gamma_ks = exp(reflect(log_gamma_jet(k - s0, order)));
  const Jet diag = (0.5 * m1) * pow(Complex(kTwoPi), S) * gamma_ks * pow(Complex(lam), S - one);

  // a = 0: gamma = S T^d and its negative
  const Matrix us = evaluate_action(p.action, cache.kappa(), GroupElement::S());
  const Matrix ums = evaluate_action(p.action, cache.kappa(), GroupElement::S().negated());
  const Complex m2 = std::conj(us(p.i, j)) + e_k * std::conj(ums(p.i, j));
  const Jet twisted = (0.5 * e_half_k * m2) * pow(Complex(kTwoPi), Jet(order, k) - S) * exp(log_gamma_jet(s0, order)) *
                      pow(Complex(lam), Jet(order, k - 1.0) - S);

  // a, c > 0
  const double theta = p.literal_phase ? 1.0 : 0.5;
  const KummerQuadrature kq(s0, k, order, kTwoPi * lam, std::min(1e-11, 0.1 * p.tol));
  const Jet plus = exp_linear(order, std::exp(Complex(0.0, kPi * theta) * s0), Complex(0.0, kPi * theta));
  const Jet minus = exp_linear(order, std::exp(Complex(0.0, -kPi * theta) * s0), Complex(0.0, -kPi * theta));
  auto term = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    const GroupElement g{a, b, c, d}, gp{-a, b, c, -d};
    const Complex mg = cache.m_column(g, p.i)(j), mgp = cache.m_column(gp, p.i)(j);
    // e^{2 pi i lambda d / c}, reduced exactly
    const Int128 num = static_cast<Int128>(freq.num) * d;
    const Int128 den = static_cast<Int128>(freq.den) * c;
    Int128 r = num % den;
    if (r < 0) r += den;
    const Complex ph = std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(den));
    const double ratio = static_cast<double>(c) / static_cast<double>(a);
    const Jet pref = exp_linear(order, std::pow(static_cast<double>(c), -k) * std::exp(s0 * std::log(ratio)), std::log(ratio));
    const Complex z(0.0, -kTwoPi * lam / (static_cast<double>(a) * static_cast<double>(c)));
    return pref * ((ph * mg) * plus * kq.evaluate(z) + (std::conj(ph) * mgp) * minus * kq.evaluate(-z));
  };

  const double sigma = s0.real();
  const Jet pref = (0.5 * e_half_k * std::pow(kTwoPi, k) * std::pow(lam, k - 1.0)) * one;
  // tolerances are relative to the whole coefficient, measured in units of the group sum
  // stopping looks at the order-0 part only, so every order enumerates the same terms
  const double floor_scale = (std::abs(diag.value()) + std::abs(twisted.value())) / std::abs(pref.value());
  Jet sum(order);
  double trunc = 0.0;
  int extent = 0;
  double extent_a = 1.0;
  bool converged = true;
  if (p.enumeration == Enumeration::SingleRepresentative) {
    const std::int64_t C = p.c_max > 0 ? p.c_max : 20;
    for (std::int64_t c = 1; c <= C; ++c)
      for (std::int64_t d = -C * c; d <= C * c; ++d) {
        if (std::gcd(c, std::abs(d)) != 1) continue;
        std::int64_t x, y;
        ext_gcd(mod(d, c), c, x, y);
        const std::int64_t a = c == 1 ? 1 : mod(x, c);
        sum += term(a, (a * d - 1) / c, c, d);
      }
    extent = static_cast<int>(C);
    out.warning = "single-representative enumeration has no convergence control";
    converged = false;
  } else {
    const double a_decay = sigma - 1.0, c_decay = k - sigma - 1.0;
    const int c_limit = p.c_max > 0 ? p.c_max : p.hard_cap;
    std::vector<double> recent;
    for (std::int64_t c = 1; c <= c_limit; ++c) {
      Jet slice(order);
      double slice_abs = 0.0, a_tail = std::numeric_limits<double>::infinity();
      const std::int64_t block = std::max<std::int64_t>(c, 16);
      std::int64_t a_end = 0;
      const std::int64_t a_limit = static_cast<std::int64_t>(p.hard_cap) * std::max<std::int64_t>(c, 1);
      while (a_end < a_limit) {
        const std::int64_t a0 = a_end + 1;
        a_end += block;
        std::vector<std::int64_t> as;
        for (std::int64_t a = a0; a <= a_end; ++a)
          if (std::gcd(a, c) == 1) as.push_back(a);
        const auto terms = parallel_map<Jet>(as.size(), [&](std::size_t q) {
          const std::int64_t a = as[q];
          std::int64_t x, y;
          ext_gcd(a, c, x, y);  // a x + c y = 1, d = x
          const std::int64_t d = c == 1 ? 0 : mod(x, c);
          return term(a, (a * d - 1) / c, c, d);
        });
        double block_abs = 0.0;
        for (const auto& t : terms) {
          slice += t;
          block_abs += std::abs(t.value());
        }
        slice_abs += block_abs;
        a_tail = a_decay > 0.05 ? block_abs * static_cast<double>(a_end) / (static_cast<double>(block) * a_decay)
                                : std::numeric_limits<double>::infinity();
        const double scale = std::max(std::abs((sum + slice).value()), floor_scale);
        if (a_tail < 0.5 * p.tol * scale) break;
      }
      if (a_end >= a_limit) converged = false;
      extent_a = std::max(extent_a, static_cast<double>(a_end));
      sum += slice;
      trunc += a_tail;
      extent = static_cast<int>(c);
      // slices can vanish for structural reasons (e.g. induced actions), so
      // the tail is judged on the largest of the last few
      recent.push_back(slice_abs * static_cast<double>(c));
      if (recent.size() > 6) recent.erase(recent.begin());
      const double worst = *std::max_element(recent.begin(), recent.end());
      const double c_tail = c_decay > 0.05 ? worst / c_decay : std::numeric_limits<double>::infinity();
      if (p.c_max > 0) {
        if (c == c_limit) trunc += c_tail;
        continue;
      }
      if (c >= 6 && c_tail < 0.5 * p.tol * std::max(std::abs(sum.value()), floor_scale)) {
        trunc += c_tail;
        break;
      }
      if (c == c_limit) {
        trunc += c_tail;
        converged = false;
      }
    }
    if (!converged) out.warning = "group sum hit the hard cap before reaching the tolerance";
  }
  const Jet group = pref * sum;

  out.diagonal = diag.derivative(order);
  out.twisted = twisted.derivative(order);
  out.group_sum = group.derivative(order);
  out.value = out.diagonal + out.twisted + out.group_sum;
  const Jet whole = diag + twisted + group;
  for (int q = 0; q <= order; ++q) out.derivatives.push_back(whole.derivative(q));
  double fact = 1.0;
  for (int q = 2; q <= order; ++q) fact *= q;
  out.truncation_estimate = std::abs(pref.value()) * trunc * fact * std::pow(1.0 + std::log(1.0 + extent_a), order);
  out.extent = extent;
  out.converged = converged && (p.c_max > 0 ? out.truncation_estimate < p.tol * std::abs(out.value) : true);
  return out;
}

KernelCoefficient kernel_coeff_numeric(const KernelParams& p, int j, int n, int order, double v0) {
  p.validate();
  check_order(order);
  if (j < 0 || j >= p.action.dimension) throw DomainError("coefficient component out of range");
  if (!(v0 >= 0.5 && v0 <= 1.5)) throw DomainError("numerical Fourier integral needs v0 in [0.5, 1.5]");
  const auto kappa = kappa_offsets(p.action);
  const Frequency freq = frequency(kappa, j, n);
  const double lam = freq.value();
  const int N = p.u_points + (p.u_points % 2);
  // the group sum is parallel inside, so points run one after another
  std::vector<PointwiseValue> values;
  values.reserve(N);
  for (int q = 0; q < N; ++q) values.push_back(kernel_pointwise_jets(p, Complex(static_cast<double>(q) / N, v0), order));
  Jet full(order), half(order);
  double trunc = 0.0;
  bool converged = true;
  int shells = 0;
  for (int q = 0; q < N; ++q) {
    const double u = static_cast<double>(q) / N;
    const Complex e = std::exp(Complex(kTwoPi * lam * v0, -kTwoPi * lam * u));
    const Jet t = e * values[q].value[j];
    full += t;
    if (q % 2 == 0) half += t;
    trunc = std::max(trunc, values[q].truncation_estimate * std::abs(e));
    converged = converged && values[q].converged;
    shells = std::max(shells, values[q].shells);
  }
  full *= 1.0 / N;
  half *= 2.0 / N;
  KernelCoefficient out;
  out.i = p.i;
  out.j = j;
  out.n = n;
  out.order = order;
  out.method = KernelMethod::Numeric;
  out.value = full.derivative(order);
  for (int q = 0; q <= order; ++q) out.derivatives.push_back(full.derivative(q));
  out.truncation_estimate = trunc + std::abs(out.value - half.derivative(order));
  out.extent = shells;
  out.converged = converged;
  if (!converged) out.warning = "pointwise group sum did not reach its tolerance";
  return out;
}

}  // namespace vvmf
