#include "vvmf/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vvmf {
namespace {

// Godfrey's coefficients for g = 607/128, n = 15.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

const double kHalfLog2Pi = 0.91893853320467274178;
const double kLogPi = 1.14472988584940017414;

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log Gamma(z) for Re z >= 0.5
Complex log_gamma_right(Complex z) {
  const Complex w = z - 1.0;
  Complex a = kLanczos[0];
  for (int k = 1; k < 15; ++k) a += kLanczos[k] / (w + static_cast<double>(k));
  const Complex t = w + kLanczosG + 0.5;
  return kHalfLog2Pi + (w + 0.5) * std::log(t) - t + std::log(a);
}

// sin(pi z) with exact argument reduction of the real part.
Complex sinpi(Complex z) {
  const double n = std::nearbyint(z.real());
  const double r = z.real() - n;
  const double sgn = std::fmod(std::fabs(n), 2.0) == 1.0 ? -1.0 : 1.0;
  const double sr = sgn * std::sin(kPi * r);
  const double cr = sgn * std::cos(kPi * r);
  const double y = kPi * z.imag();
  return {sr * std::cosh(y), cr * std::sinh(y)};
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

BernoulliTable::BernoulliTable() {
  static const long double num[17] = {1.0L,          -1.0L,          1.0L,           -1.0L,
                                      5.0L,          -691.0L,        7.0L,           -3617.0L,
                                      43867.0L,      -174611.0L,     854513.0L,      -236364091.0L,
                                      8553103.0L,    -23749461029.0L, 8615841276005.0L,
                                      -7709321041217.0L, 2577687858367.0L};
  static const long double den[17] = {6, 30, 42, 30, 66, 2730, 6, 510, 798,
                                      330, 138, 2730, 6, 870, 14322, 510, 6};
  for (int i = 0; i < 17; ++i) values_.push_back(num[i] / den[i]);
}

const BernoulliTable& BernoulliTable::instance() {
  static const BernoulliTable table;
  return table;
}

long double BernoulliTable::b2(int nu) const {
  if (nu < 1 || nu > size()) throw DomainError("Bernoulli index out of range");
  return values_[nu - 1];
}

Complex log_gamma(Complex z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (!is_finite(z)) throw DomainError("log_gamma: non-finite argument");
  if (z.real() >= 0.5) return log_gamma_right(z);
  const int n = static_cast<int>(std::ceil(0.5 - z.real()));
  Complex acc = 0.0;
  for (int j = 0; j < n; ++j) acc += std::log(z + static_cast<double>(j));
  return log_gamma_right(z + static_cast<double>(n)) - acc;
}

Complex gamma(Complex z) {
  if (is_nonpositive_integer(z)) throw PoleError("gamma: pole at nonpositive integer");
  if (!is_finite(z)) throw DomainError("gamma: non-finite argument");
  Complex lg;
  if (z.real() >= 0.5) {
    lg = log_gamma_right(z);
  } else {
    const Complex sp = sinpi(z);
    if (std::abs(z) < 100.0) {
      const Complex g1 = std::exp(log_gamma_right(1.0 - z));
      const Complex r = kPi / (sp * g1);
      if (!is_finite(r)) throw OverflowError("gamma: result out of double range");
      return r;
    }
    lg = kLogPi - std::log(sp) - log_gamma_right(1.0 - z);
  }
  if (lg.real() > 709.78) throw OverflowError("gamma: result out of double range");
  return std::exp(lg);
}

Complex polygamma(int order, Complex z) {
  if (order < 0 || order > 8) throw DomainError("polygamma: order must be in [0, 8]");
  if (is_nonpositive_integer(z)) throw PoleError("polygamma: pole at nonpositive integer");
  if (!is_finite(z)) throw DomainError("polygamma: non-finite argument");
  const double nfact = factorial(order);
  const double sgn = order % 2 == 0 ? 1.0 : -1.0;
  Complex shift = 0.0;
  while (z.real() < 0.0 || std::abs(z) < 20.0) {
    shift -= sgn * nfact / std::pow(z, order + 1);
    z += 1.0;
  }
  const auto& bern = BernoulliTable::instance();
  const Complex zi = 1.0 / z;
  const Complex zi2 = zi * zi;
  Complex series = 0.0;
  if (order == 0) {
    Complex p = zi2;
    for (int nu = 1; nu <= 10; ++nu) {
      series += static_cast<double>(bern.b2(nu)) / (2.0 * nu) * p;
      p *= zi2;
    }
    return shift + std::log(z) - 0.5 * zi - series;
  }
  // (-1)^{n-1} [ (n-1)!/z^n + n!/(2 z^{n+1}) + sum B_{2nu} (2nu+n-1)!/(2nu)! z^{-2nu-n} ]
  const Complex zn = std::pow(zi, order);
  Complex p = zn * zi2;
  for (int nu = 1; nu <= 10; ++nu) {
    double ratio = 1.0;  // (2nu+n-1)!/(2nu)!
    for (int q = 2 * nu + 1; q <= 2 * nu + order - 1; ++q) ratio *= q;
    series += static_cast<double>(bern.b2(nu)) * ratio * p;
    p *= zi2;
  }
  const Complex main = factorial(order - 1) * zn + 0.5 * nfact * zn * zi + series;
  return shift + (order % 2 == 1 ? main : -main);
}

Jet log_gamma_jet(Complex s0, int order) {
  Jet j(order, log_gamma(s0));
  for (int p = 1; p <= order; ++p) j[p] = polygamma(p - 1, s0) / factorial(p);
  return j;
}

std::vector<Complex> gamma_derivative_ratios(Complex s, int order) {
  Jet lg = log_gamma_jet(s, order);
  lg[0] = 0.0;
  const Jet e = exp(lg);
  std::vector<Complex> out(order + 1);
  for (int p = 0; p <= order; ++p) out[p] = e.derivative(p);
  return out;
}

Jet tail_integral_jet(Complex s0, double x, int order, double rel_tol) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("tail_integral: x must be positive");
  if (order < 0 || order > 8) throw DomainError("tail_integral: log order must be in [0, 8]");
  if (!is_finite(s0)) throw DomainError("tail_integral: non-finite s");
  // v = e^t: integrand exp(-x e^t + s t) t^p / p!
  const double sigma = s0.real();
  auto phi = [&](double t) {
    double v = -x * std::exp(t) + sigma * t;
    if (order > 0) v += order * std::log(std::max(t, 1e-300));
    return v;
  };
  double tmax = 0.25;
  double best = phi(0.0);
  for (;;) {
    const double v = phi(tmax);
    best = std::max(best, v);
    if (x * std::exp(tmax) > std::max(sigma, 0.0) + order + 1.0 && v < best - 50.0) break;
    tmax += 0.25;
  }
  auto f = [&](double t) {
    const Complex base = std::exp(Complex(-x * std::exp(t), 0.0) + s0 * t);
    return exp_linear(order, base, t);
  };
  AdaptiveOptions opts;
  opts.rel_tol = rel_tol;
  AdaptiveResult r = integrate_adaptive(f, 0.0, tmax, order, opts);
  if (!r.converged) throw ConvergenceError("tail_integral did not converge", r.error.norm());
  return r.value;
}

Complex tail_integral(Complex s, double x, int log_order) {
  return tail_integral_jet(s, x, log_order).derivative(log_order);
}

KummerQuadrature::KummerQuadrature(Complex s, double k, int max_order, double zmax, double tol)
    : max_order_(max_order), zmax_(zmax) {
  if (max_order < 0 || max_order > 5) throw DomainError("kummer_reg: order must be in [0, 5]");
  if (!(s.real() > 0.0 && s.real() < k)) throw DomainError("kummer_reg: need 0 < Re s < k");
  if (!(zmax >= 0.0) || !std::isfinite(zmax)) throw DomainError("kummer_reg: bad |z| bound");
  const Complex z(0.0, zmax);
  const double sigma = s.real();
  const double beta = std::exp((log_gamma(sigma) + log_gamma(k - sigma) - log_gamma(k)).real());
  const double cut = std::log(1e-3 * tol * std::min(1.0, beta));

  // lowest t with exp(a t) |t|^p / a below the cut
  auto lower = [&](double a) {
    double t = -1.0;
    while (a * t + max_order * std::log(-t) - std::log(a) > cut) t *= 1.25;
    return t;
  };
  const double mid = -std::log(2.0);
  AdaptiveOptions opts;
  opts.rel_tol = tol;
  opts.abs_tol = 1e-3 * tol * beta;
  opts.max_panels = 20000;

  // half 0: u = e^t; half 1: 1-u = e^t
  for (int half = 0; half < 2; ++half) {
    const double a = half == 0 ? sigma : k - sigma;
    auto weight = [&, half](double t) {
      const double et = std::exp(t);
      const double l1m = std::log1p(-et);
      Complex base;
      double ell;
      double u;
      if (half == 0) {
        u = et;
        base = std::exp(s * t + (k - s - 1.0) * l1m);
        ell = t - l1m;
      } else {
        u = -std::expm1(t);
        base = std::exp((s - 1.0) * l1m + (k - s) * t);
        ell = l1m - t;
      }
      return std::make_pair(u, exp_linear(max_order, base, ell));
    };
    auto f = [&](double t) {
      auto [u, w] = weight(t);
      return w * std::exp(z * u);
    };
    std::vector<Interval> panels;
    AdaptiveResult r = integrate_adaptive(f, lower(a), mid, max_order, opts, &panels);
    if (!r.converged) throw ConvergenceError("kummer_reg quadrature did not converge", r.error.norm());
    double xs[15], ws[15];
    for (const auto& iv : panels) {
      kronrod_nodes(iv.a, iv.b, xs, ws);
      for (int q = 0; q < 15; ++q) {
        auto [u, w] = weight(xs[q]);
        u_.push_back(u);
        w_.push_back(w * ws[q]);
      }
    }
  }
}

Jet KummerQuadrature::evaluate(Complex z) const {
  if (z.real() != 0.0) throw DomainError("kummer_reg: z must be purely imaginary");
  if (std::abs(z.imag()) > zmax_ * (1.0 + 1e-12) + 1e-300)
    throw DomainError("kummer_reg: |z| exceeds the quadrature's design bound");
  Jet acc(max_order_);
  const double theta = z.imag();
  for (std::size_t q = 0; q < u_.size(); ++q) {
    const double ph = theta * u_[q];
    acc += w_[q] * Complex(std::cos(ph), std::sin(ph));
  }
  return acc;
}

Complex kummer_reg(int order, Complex s, double k, Complex z, double tol) {
  KummerQuadrature q(s, k, order, std::abs(z.imag()), tol);
  return q.evaluate(z).derivative(order);
}

}  // namespace vvmf
