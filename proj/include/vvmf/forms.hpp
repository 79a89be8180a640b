#pragma once

// Vector-valued q-expansions f = sum_j e_j sum_n a_j(n) e^{2 pi i (n + kappa_j) tau}.
// Component indices are 0-based here; coefficient files and the CLI use 1-based j.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vvmf/modular_group.hpp"

namespace vvmf {

// A coefficient, kept as an exact Gaussian integer when the data is integral.
struct Coefficient {
  Complex value = 0.0;
  bool exact = false;
  Int128 re_int = 0, im_int = 0;

  static Coefficient integer(Int128 re, Int128 im = 0);
  static Coefficient real_or_complex(Complex v) { return {v, false, 0, 0}; }
  bool is_zero() const { return exact ? (re_int == 0 && im_int == 0) : value == Complex(0.0); }
  friend bool operator==(const Coefficient& x, const Coefficient& y);
};

Coefficient operator+(const Coefficient& x, const Coefficient& y);

class FourierExpansion {
 public:
  FourierExpansion() = default;
  // coeffs[j][n] = a_j(n).  Validates the action and the cusp condition.
  FourierExpansion(UnitaryAction action, std::vector<std::vector<Coefficient>> coeffs, std::string label);

  const UnitaryAction& action() const { return action_; }
  int dimension() const { return action_.dimension; }
  int two_k() const { return action_.two_k; }
  double weight() const { return action_.weight(); }
  const std::vector<Rational>& kappa() const { return kappa_; }
  const std::string& label() const { return label_; }

  int n_max(int j) const { return static_cast<int>(coeffs_[j].size()) - 1; }
  int n_max() const;
  const Coefficient& coeff(int j, int n) const { return coeffs_[j][n]; }
  Complex a(int j, int n) const { return n <= n_max(j) ? values_[j][n] : Complex(0.0); }
  const std::vector<Complex>& values(int j) const { return values_[j]; }
  const std::vector<std::vector<Coefficient>>& coefficients() const { return coeffs_; }

  // C in |a_j(n)| <= C (n + kappa_j)^{k/2+1}, fitted on the stored data.
  double growth_constant() const { return growth_; }
  bool is_zero() const;

  FourierExpansion scaled(Complex alpha) const;
  FourierExpansion truncated(int n_max) const;

 private:
  UnitaryAction action_;
  std::vector<Rational> kappa_;
  std::vector<std::vector<Coefficient>> coeffs_;
  std::vector<std::vector<Complex>> values_;
  std::string label_;
  double growth_ = 0.0;
};

// alpha f + beta g (same action and weight).
FourierExpansion linear_combination(Complex alpha, const FourierExpansion& f, Complex beta, const FourierExpansion& g);

// Delta = q prod (1 - q^n)^24, exact tau(n) for n <= n_max.
FourierExpansion delta_expansion(int n_max);

// Normalized eigenform Delta E4^a E6^b spanning S_k for k in {12,16,18,20,22,26}.
FourierExpansion scalar_basis(int k, int n_max);

// Truncation used when none is given: enough for evaluation down to the
// bottom of the fundamental domain at double precision.
int default_n_max(int k);

struct Evaluation {
  Vector value;
  double error_bound = 0.0;
};

// Partial sum with a tail bound from the fitted growth constant.
Evaluation evaluate(const FourierExpansion& f, Complex tau, double v_min = 0.05);

// max over samples of ||f|gamma (tau) - f(tau)|| / ||f(tau)|| with
// (f|gamma)(tau) = (c tau + d)^{-k} U(gamma)^{-1} f(gamma tau).
double slash_residual(const FourierExpansion& f, const GroupElement& g, const std::vector<Complex>& taus,
                      double v_min = 0.05);

// Coefficients of theta_{m,j}(tau, 0) in q^{1/4m}: entry N counts r = j mod 2m with r^2 = N.
std::vector<int> theta_series_coeffs(int m, int j, int n_max);

// Jacobi cusp form coefficients a(l, r) for 1 <= l <= l_max and r^2 < 4ml.
struct JacobiCoefficients {
  int k = 0;
  int m = 1;
  int l_max = 0;
  std::map<std::pair<std::int64_t, std::int64_t>, Coefficient> table;

  // Completeness (reports the first missing (l, r)) and the invariant that
  // a(l, r) depends only on (4ml - r^2, r mod 2m), both exact.
  void validate() const;
  friend bool operator==(const JacobiCoefficients&, const JacobiCoefficients&) = default;
};

// F_j(tau) = sum_n a((n + j^2)/4m, j) q^{n/4m}, as a 2m-component form of weight
// k - 1/2 for the Weil representation.
FourierExpansion theta_decompose(const JacobiCoefficients& J);

// Inverse of theta_decompose on its image.
JacobiCoefficients jacobi_reconstruct(const FourierExpansion& components, int k);

// Scalar form on Gamma_0(4) in the plus space, c(n) for n = 0..n_max.
struct PlusSpaceForm {
  int two_k = 0;  // weight k - 1/2 as 2k - 1
  std::vector<Coefficient> c;
};

// phi(F) = F_1(4 tau) + F_2(4 tau) for m = 1.
PlusSpaceForm plus_space_map(const FourierExpansion& components);
// c_j(n) = c(n) on n = -j^2 mod 4, as a 2-component form again.
FourierExpansion plus_space_components(const PlusSpaceForm& f);

// Coefficient files.  Throws ParseError with the line number on bad input.
void write_expansion(std::ostream& os, const FourierExpansion& f);
FourierExpansion read_expansion(std::istream& is);
void save_expansion(const FourierExpansion& f, const std::string& path);
FourierExpansion load_expansion(const std::string& path);

void write_jacobi(std::ostream& os, const JacobiCoefficients& J);
JacobiCoefficients read_jacobi(std::istream& is);
void save_jacobi(const JacobiCoefficients& J, const std::string& path);
JacobiCoefficients load_jacobi(const std::string& path);

// Shortest round-trip text for a double; always contains '.', 'e', "inf" or "nan".
std::string format_double(double x);

}  // namespace vvmf
