#pragma once

#include <vector>

#include "vvmf/jet.hpp"
#include "vvmf/quadrature.hpp"
#include "vvmf/types.hpp"

namespace vvmf {

// B_{2nu} for nu = 1..17, built from exact rationals.
class BernoulliTable {
 public:
  static const BernoulliTable& instance();
  long double b2(int nu) const;  // B_{2nu}
  int size() const { return static_cast<int>(values_.size()); }

 private:
  BernoulliTable();
  std::vector<long double> values_;
};

// Gamma function.  Throws PoleError at 0, -1, -2, ... and OverflowError when
// the result leaves the double range.
Complex gamma(Complex z);

// Principal branch of log Gamma: analytic off (-inf, 0], and
// log_gamma(z+1) = log_gamma(z) + log(z).
Complex log_gamma(Complex z);

// psi^(order)(z), order <= 8.
Complex polygamma(int order, Complex z);

// Taylor jet of log Gamma(s0 + e) up to the given order.
Jet log_gamma_jet(Complex s0, int order);

// Gamma^(p)(s)/Gamma(s) for p = 0..order (complete Bell polynomials in polygammas).
std::vector<Complex> gamma_derivative_ratios(Complex s, int order);

// int_1^inf e^{-xv} (log v)^n v^{s-1} dv
Complex tail_integral(Complex s, double x, int log_order);

// Jet of tail_integral(s0 + e, x, 0), i.e. coefficients tail_integral(s0, x, p)/p!.
Jet tail_integral_jet(Complex s0, double x, int order, double rel_tol = 1e-14);

// Quadrature for the regularized Kummer function
//   1f1(s,k;z) = int_0^1 e^{zu} u^{s-1} (1-u)^{k-s-1} du = G(s)G(k-s)/G(k) 1F1(s;k;z)
// and its s-derivatives, built once for fixed (s, k) and reused for many
// imaginary z with |z| <= zmax.
class KummerQuadrature {
 public:
  KummerQuadrature(Complex s, double k, int max_order, double zmax, double tol = 1e-11);

  // Jet in s: coefficient p is d^p/ds^p 1f1 / p!.
  Jet evaluate(Complex z) const;
  int max_order() const { return max_order_; }
  int nodes() const { return static_cast<int>(u_.size()); }

 private:
  int max_order_;
  double zmax_;
  std::vector<double> u_;
  std::vector<Jet> w_;
};

// d^order/ds^order 1f1(s, k; z) for purely imaginary (or zero) z.
Complex kummer_reg(int order, Complex s, double k, Complex z, double tol = 1e-11);

}  // namespace vvmf
