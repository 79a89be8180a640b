#include "vvmf/forms.hpp"
#include <limits>

#include <algorithm>
#include <cmath>

namespace vvmf {
namespace {

using Poly = std::vector<Int128>;

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer q-expansion overflow; lower n_max");
  return r;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer q-expansion overflow; lower n_max");
  return r;
}

// product truncated to degree < len
Poly mul(const Poly& a, const Poly& b, std::size_t len) {
  Poly r(len, 0);
  for (std::size_t i = 0; i < std::min(len, a.size()); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < std::min(len - i, b.size()); ++j)
      if (b[j] != 0) r[i + j] = checked_add(r[i + j], checked_mul(a[i], b[j]));
  }
  return r;
}

// 1 + factor * sum sigma_p(n) q^n
Poly eisenstein(int p, Int128 factor, std::size_t len) {
  Poly e(len, 0);
  e[0] = 1;
  for (std::size_t n = 1; n < len; ++n) {
    Int128 sigma = 0;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) {
        Int128 pw = 1;
        for (int q = 0; q < p; ++q) pw = checked_mul(pw, static_cast<Int128>(d));
        sigma = checked_add(sigma, pw);
      }
    e[n] = checked_mul(factor, sigma);
  }
  return e;
}

// prod_{n>=1} (1 - q^n) through Euler's pentagonal numbers
Poly euler_product(std::size_t len) {
  Poly p(len, 0);
  for (std::int64_t k = -static_cast<std::int64_t>(len); k <= static_cast<std::int64_t>(len); ++k) {
    const std::int64_t e = k * (3 * k - 1) / 2;
    if (e >= 0 && static_cast<std::size_t>(e) < len) p[e] += (k % 2 == 0) ? 1 : -1;
  }
  return p;
}

FourierExpansion scalar_from_poly(const Poly& q_shifted, int k, const std::string& label) {
  // q_shifted[i] is the coefficient of q^{i+1}
  std::vector<Coefficient> c(q_shifted.size() + 1);
  c[0] = Coefficient::integer(0);
  for (std::size_t i = 0; i < q_shifted.size(); ++i) c[i + 1] = Coefficient::integer(q_shifted[i]);
  return FourierExpansion(trivial_action(2 * k), {c}, label);
}

Complex principal_power(Complex z, double k) { return std::exp(k * std::log(z)); }

}  // namespace

Coefficient Coefficient::integer(Int128 re, Int128 im) {
  return {Complex(static_cast<double>(re), static_cast<double>(im)), true, re, im};
}

bool operator==(const Coefficient& x, const Coefficient& y) {
  if (x.exact != y.exact) return false;
  if (x.exact) return x.re_int == y.re_int && x.im_int == y.im_int;
  return x.value == y.value;
}

Coefficient operator+(const Coefficient& x, const Coefficient& y) {
  if (x.exact && y.exact) return Coefficient::integer(checked_add(x.re_int, y.re_int), checked_add(x.im_int, y.im_int));
  return Coefficient::real_or_complex(x.value + y.value);
}

FourierExpansion::FourierExpansion(UnitaryAction action, std::vector<std::vector<Coefficient>> coeffs,
                                   std::string label)
    : action_(std::move(action)), coeffs_(std::move(coeffs)), label_(std::move(label)) {
  action_.validate();
  kappa_ = kappa_offsets(action_);
  if (static_cast<int>(coeffs_.size()) != action_.dimension)
    throw DomainError("number of components does not match the action's dimension");
  const double alpha = weight() / 2.0 + 1.0;
  for (int j = 0; j < dimension(); ++j) {
    if (coeffs_[j].empty()) coeffs_[j].push_back(Coefficient::integer(0));
    if (kappa_[j].is_zero() && !coeffs_[j][0].is_zero())
      throw DomainError("not a cusp form: nonzero coefficient at n + kappa = 0 in component " + std::to_string(j + 1));
    std::vector<Complex> v;
    v.reserve(coeffs_[j].size());
    for (std::size_t n = 0; n < coeffs_[j].size(); ++n) {
      const Complex a = coeffs_[j][n].value;
      if (!is_finite(a)) throw DomainError("non-finite coefficient");
      v.push_back(a);
      const double e = static_cast<double>(n) + kappa_[j].value();
      if (e > 0.0) growth_ = std::max(growth_, std::abs(a) / std::pow(e, alpha));
    }
    values_.push_back(std::move(v));
  }
}

int FourierExpansion::n_max() const {
  int m = 0;
  for (int j = 0; j < dimension(); ++j) m = std::max(m, n_max(j));
  return m;
}

bool FourierExpansion::is_zero() const {
  for (const auto& comp : coeffs_)
    for (const auto& c : comp)
      if (!c.is_zero()) return false;
  return true;
}

FourierExpansion FourierExpansion::scaled(Complex alpha) const {
  auto c = coeffs_;
  for (auto& comp : c)
    for (auto& x : comp) x = Coefficient::real_or_complex(alpha * x.value);
  return FourierExpansion(action_, std::move(c), label_);
}

FourierExpansion FourierExpansion::truncated(int n) const {
  auto c = coeffs_;
  for (auto& comp : c)
    if (static_cast<int>(comp.size()) > n + 1) comp.resize(n + 1);
  return FourierExpansion(action_, std::move(c), label_);
}

FourierExpansion linear_combination(Complex alpha, const FourierExpansion& f, Complex beta, const FourierExpansion& g) {
  if (f.two_k() != g.two_k() || f.dimension() != g.dimension() ||
      (f.action().image_S - g.action().image_S).cwiseAbs().maxCoeff() > 1e-12 ||
      (f.action().image_T - g.action().image_T).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("linear combination of forms with different weight or action");
  std::vector<std::vector<Coefficient>> c(f.dimension());
  for (int j = 0; j < f.dimension(); ++j) {
    const int n = std::min(f.n_max(j), g.n_max(j));
    for (int q = 0; q <= n; ++q) c[j].push_back(Coefficient::real_or_complex(alpha * f.a(j, q) + beta * g.a(j, q)));
  }
  return FourierExpansion(f.action(), std::move(c), f.label() + "+" + g.label());
}

FourierExpansion delta_expansion(int n_max) {
  if (n_max < 1) throw DomainError("delta_expansion needs n_max >= 1");
  const std::size_t len = static_cast<std::size_t>(n_max);
  const Poly p = euler_product(len);
  const Poly p2 = mul(p, p, len), p4 = mul(p2, p2, len), p8 = mul(p4, p4, len);
  const Poly p24 = mul(mul(p8, p8, len), p8, len);
  return scalar_from_poly(p24, 12, "delta");
}

FourierExpansion scalar_basis(int k, int n_max) {
  int a = 0, b = 0;
  switch (k) {
    case 12: break;
    case 16: a = 1; break;
    case 18: b = 1; break;
    case 20: a = 2; break;
    case 22: a = 1; b = 1; break;
    case 26: a = 2; b = 1; break;
    default: throw DomainError("scalar_basis: S_k is not one-dimensional for k = " + std::to_string(k));
  }
  if (n_max < 1) throw DomainError("scalar_basis needs n_max >= 1");
  const std::size_t len = static_cast<std::size_t>(n_max);
  const Poly p = euler_product(len);
  const Poly p2 = mul(p, p, len), p4 = mul(p2, p2, len), p8 = mul(p4, p4, len);
  Poly f = mul(mul(p8, p8, len), p8, len);
  const Poly e4 = eisenstein(3, 240, len), e6 = eisenstein(5, -504, len);
  for (int q = 0; q < a; ++q) f = mul(f, e4, len);
  for (int q = 0; q < b; ++q) f = mul(f, e6, len);
  return scalar_from_poly(f, k, k == 12 ? "delta" : "eigenform k=" + std::to_string(k));
}

int default_n_max(int k) { return std::max(40, 2 * k + 10); }

Evaluation evaluate(const FourierExpansion& f, Complex tau, double v_min) {
  if (!(tau.imag() >= v_min)) throw DomainError("evaluate: Im tau below the configured minimum");
  const int m = f.dimension();
  Evaluation out;
  out.value = Vector::Zero(m);
  const Complex q = std::exp(kTwoPi * kI * tau);
  const double v = tau.imag();
  const double alpha = f.weight() / 2.0 + 1.0;
  double tail2 = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto& a = f.values(j);
    Complex acc = 0.0;
    for (int n = static_cast<int>(a.size()) - 1; n >= 0; --n) acc = acc * q + a[n];
    const double kap = f.kappa()[j].value();
    out.value(j) = acc * std::exp(kTwoPi * kI * kap * tau);
    if (f.growth_constant() == 0.0) continue;
    // geometric bound on sum_{n > N} C (n+kappa)^alpha e^{-2 pi (n+kappa) v}
    const double n1 = a.size() + kap;
    const double ratio = std::pow((n1 + 1.0) / n1, alpha) * std::exp(-kTwoPi * v);
    const double first = f.growth_constant() * std::pow(n1, alpha) * std::exp(-kTwoPi * n1 * v);
    const double t = ratio < 1.0 ? first / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    tail2 += t * t;
  }
  out.error_bound = std::sqrt(tail2);
  return out;
}

double slash_residual(const FourierExpansion& f, const GroupElement& g, const std::vector<Complex>& taus, double v_min) {
  g.validate();
  const Matrix u = evaluate_action(f.action(), g);
  double worst = 0.0;
  for (const Complex tau : taus) {
    const Complex gt = g.act(tau);
    if (gt.imag() < v_min || tau.imag() < v_min) throw DomainError("slash_residual: sample too low in the half-plane");
    const Vector lhs = principal_power(g.j(tau), -f.weight()) * (u.adjoint() * evaluate(f, gt, v_min).value);
    const Vector rhs = evaluate(f, tau, v_min).value;
    worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
  }
  return worst;
}

std::vector<int> theta_series_coeffs(int m, int j, int n_max) {
  if (m < 1 || j < 1 || j > 2 * m) throw DomainError("theta_series_coeffs: need 1 <= j <= 2m");
  std::vector<int> c(n_max + 1, 0);
  for (std::int64_t r = -n_max; r <= n_max; ++r) {
    if (((r - j) % (2 * m) + 2 * m) % (2 * m) != 0) continue;
    if (r * r <= n_max) ++c[r * r];
  }
  return c;
}

}  // namespace vvmf
