#pragma once

// Identity checks and non-vanishing scans built on the L-function, kernel and
// Petersson layers.

#include <iosfwd>
#include <string>
#include <vector>

#include "vvmf/kernel.hpp"
#include "vvmf/lfunction.hpp"
#include "vvmf/petersson.hpp"

namespace vvmf {

// 1 when kappa = 0 (within 1e-12), else 0.  kappa within 1e-12 of 1 returns 0
// and sets *warning.
int n_zero(double kappa, std::string* warning = nullptr);

// An orthogonal basis of one space with its Gram data.
struct BasisData {
  std::vector<FourierExpansion> forms;
  std::vector<double> norms;  // (f_l, f_l)
  Matrix gram;
  double orthogonality_residual = 0.0;  // max |G_lm| / sqrt(G_ll G_mm), l != m
  double norm_error = 0.0;              // largest relative Petersson error estimate

  int size() const { return static_cast<int>(forms.size()); }
  const UnitaryAction& action() const { return forms.front().action(); }
  double weight() const { return forms.front().weight(); }
  // b_{k,l,j}(n)
  Complex b(int l, int j, int n) const { return forms[l].a(j, n); }
};

// Rejects empty input, mixed spaces, and off-diagonal Gram entries above
// max_offdiag relative to the diagonal.
BasisData make_basis(std::vector<FourierExpansion> forms, const QuadratureSpec& quad = {}, double max_offdiag = 1e-6);

// The normalized eigenform of S_k for k in {12,16,18,20,22,26}.
BasisData scalar_basis_data(int k, const QuadratureSpec& quad = {});

// Term l of D_n(s): b_{l,i}(n_{i,0}) / (f_l,f_l) * conj(d^n/ds^n L*(f_l, conj s))_i.
// For real coefficients the conjugations cancel and this is b/(f,f) d^n L*_i.
std::vector<Complex> averaged_derivative_terms(const BasisData& basis, int i, int n, Complex s);
Complex averaged_derivative(const BasisData& basis, int i, int n, Complex s);

// What the kernel actually pairs to: unfolding (f, R_{k,s,i}) leaves
// int_H f_i(tau) conj(tau^{-s}) v^{k-2}, a multiple of L*_i(f, k - conj s).  Term l is
//   b_{l,i}(n0)/(f_l,f_l) e^{-i pi k/2} d^n/ds^n conj(L*(f_l, k - conj s))_i.
// By the functional equation this is D_n(s) with L* replaced by U(S) L*, so the
// two agree whenever U(S) is scalar (every scalar form of even weight).
Complex unfolded_derivative(const BasisData& basis, int i, int n, Complex s);

struct IdentityReport {
  Complex s;
  int i = 0, order = 0, n0 = 0;
  Complex lhs;        // d^order/ds^order r_{k,s,i,i}(n_{i,0})
  Complex rhs;        // c_k unfolded_derivative
  Complex rhs_plain;  // c_k D_order(s), the literal form
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double plain_rel_residual = 0.0;
  double kernel_truncation = 0.0;
  double petersson_error = 0.0;
  std::string warning;
};

// lhs from kernel_coeff with kernel.i = i, kernel.s = s (kernel.action is
// overwritten by the basis action).
IdentityReport verify_identity(const BasisData& basis, int i, Complex s, int order, KernelParams kernel = {});

enum class ScanWindow { Lower, Mirror };

struct ScanReport {
  double k = 0.0;
  int i = 0, n = 0;
  double t0 = 0.0, eps = 0.0;
  ScanWindow window = ScanWindow::Lower;
  double lo = 0.0, hi = 0.0;  // open window, grid strictly inside
  std::vector<double> sigma;
  std::vector<Complex> D;
  std::vector<std::vector<Complex>> terms;  // per point, per basis element
  double min_abs = 0.0;
  double argmin_sigma = 0.0;
  double median_abs = 0.0;
  std::vector<int> flagged;  // grid indices of suspected zeros
  bool prior_work_mode = false;  // n = 0
  double runtime_seconds = 0.0;
};

// Grid sigma_p = lo + p (hi - lo)/(G + 1), p = 1..G, on
//   Lower:  ((k-1)/2, k/2 - eps)      Mirror: (k/2 + eps, (k+1)/2).
// A point is flagged when |D| < 1e-3 median |D| and both Re D and Im D change
// sign between its neighbours.
ScanReport scan_strip(const BasisData& basis, int i, int n, double t0, double eps, int grid_size,
                      ScanWindow window = ScanWindow::Lower);

// The zero-flag rule on its own; returns grid indices.
std::vector<int> flag_zeros(const std::vector<Complex>& D);

// CSV: sigma,t,re_D,im_D,abs_D, then re_term_l,im_term_l for each basis element.
void write_scan_csv(std::ostream& os, const ScanReport& r);
// Plain text; runtime only when asked, so the default output is reproducible.
void write_scan_summary(std::ostream& os, const ScanReport& r, bool with_runtime = false);

struct AsymptoticRow {
  double k = 0.0;
  Complex s;
  Complex N;          // d^n G / G with G = (2 pi)^s Gamma(k-s) (n0+kappa)^{s-1}
  Complex x;          // log(k - s) = log(k/2 + delta - i t0)
  Complex main_term;  // log(2 pi (n0+kappa))^n
  Complex residual;   // N minus the fitted polynomial in x
};

struct AsymptoticTable {
  int n = 0;
  double t0 = 0.0, delta = 0.0, kappa = 0.0;
  int n0 = 0;
  std::vector<AsymptoticRow> rows;
  int fitted_degree = 0;
  Complex leading_coefficient;  // of the degree-n fit on the last window of k
  // (k at the window end, leading coefficient) for every full window
  std::vector<std::pair<double, Complex>> leading_trend;
  double window = 40.0;
};

// N(k,s) from polygammas via complete Bell polynomials.
Complex log_derivative_ratio(int n, double k, Complex s, double kappa, int n0);

// delta must lie in (0, 1/2).  Fitted degree: the least D for which a
// degree D+1 fit in x has top coefficient below 0.1 in modulus.
AsymptoticTable asymptotic_diagnostic(const std::vector<double>& k_list, int n, double t0, double delta, double kappa,
                                      int n0);

}  // namespace vvmf
