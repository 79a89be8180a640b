#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vvmf/types.hpp"

namespace vvmf {

struct GroupElement {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  // Throws DomainError unless ad - bc = 1.
  void validate() const;
  std::int64_t det() const { return a * d - b * c; }
  GroupElement inverse() const { return {d, -b, -c, a}; }
  GroupElement negated() const { return {-a, -b, -c, -d}; }
  Complex act(Complex tau) const;
  // c tau + d
  Complex j(Complex tau) const { return static_cast<double>(c) * tau + static_cast<double>(d); }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

  static GroupElement identity() { return {}; }
  static GroupElement S() { return {0, -1, 1, 0}; }
  static GroupElement T(std::int64_t e = 1) { return {1, e, 0, 1}; }
};

GroupElement operator*(const GroupElement& x, const GroupElement& y);

enum class Generator { S, T };

// S tokens carry exponent 1; T tokens carry a nonzero signed exponent.
struct WordToken {
  Generator gen;
  std::int64_t exponent;
};

struct Word {
  bool negate = false;  // gamma is minus the product of the tokens; product() applies the sign
  std::vector<WordToken> tokens;

  GroupElement product() const;
  std::string to_string() const;
};

// Euclidean decomposition into alternating T-powers and S.
Word decompose_word(const GroupElement& g);

// (gamma, phi) with phi(tau)^2 = c tau + d; branch = +1 picks the principal root.
struct MetaElement {
  GroupElement base;
  int branch = 1;

  Complex phi(Complex tau) const;
  static MetaElement principal(const GroupElement& g) { return {g, 1}; }
};

MetaElement operator*(const MetaElement& x, const MetaElement& y);

// Combined multiplier-representation on the generators.  For half-integral
// weight the images are those of the metaplectic lifts T~ = (T, 1) and
// S~ = (S, sqrt(tau)).  The action is recorded in a basis where T is diagonal.
struct UnitaryAction {
  int dimension = 1;
  int two_k = 0;  // weight k = two_k / 2
  Matrix image_T;
  Matrix image_S;
  std::string label;

  double weight() const { return two_k / 2.0; }
  bool half_integral() const { return two_k % 2 != 0; }
  // Unitarity, diagonal T and (for even weight) the SL2 relations, to tol.
  void validate(double tol = 1e-12) const;
};

enum class Lift { Principal, Negated };

// U(gamma) for the chosen lift of gamma (the lift only matters for half-integral weight).
Matrix evaluate_action(const UnitaryAction& action, const GroupElement& g, Lift lift = Lift::Principal);
// Same with precomputed kappa_offsets(action), for hot loops.
Matrix evaluate_action(const UnitaryAction& action, const std::vector<Rational>& kappa, const GroupElement& g,
                       Lift lift = Lift::Principal);

// kappa_j in [0,1) with exp(2 pi i kappa_j) = image_T(j,j), recovered as exact
// rationals (denominator <= 10^6).
std::vector<Rational> kappa_offsets(const UnitaryAction& action);

UnitaryAction trivial_action(int two_k);

// Weight-1/2 multiplier convention attached to the Weil representation.
//  Theta: the combined action is rho~_m itself, which is what the theta
//         decomposition of a Jacobi form transforms with.
//  Eta:   rho~_m with the eta multiplier v(T) = e^{2 pi i/24}, v(S~) = e^{-i pi/4}
//         divided out and reported as the multiplier part.
enum class WeilMultiplier { Theta, Eta };

// rho~_m on e_1..e_{2m}: T e_j = e^{-2 pi i j^2/4m} e_j,
// S e_j = sqrt(i)/sqrt(2m) sum_j' e^{2 pi i j j'/2m} e_j'.  Weight two_k/2 must be half-integral.
UnitaryAction weil_action(int m, int two_k, WeilMultiplier mult = WeilMultiplier::Theta);

// For the Eta convention: the multiplier values chi(T), chi(S~) that were
// split off, so that chi * rho_m equals the combined images.
Complex weil_multiplier_T(WeilMultiplier mult);
Complex weil_multiplier_S(WeilMultiplier mult);

struct InducedAction {
  UnitaryAction action;                     // in the T-diagonal basis
  std::vector<GroupElement> representatives;  // gamma_1 = I, ...
  Matrix basis_change;                      // columns: T-eigenvectors in the coset basis
  std::vector<int> perm_T, perm_S;          // coset images under right multiplication
};

// Permutation representation of SL2(Z) on Gamma_0(N)\SL2(Z), diagonalized on T.
InducedAction induced_action_gamma0(int N, int k);

// Permutation matrix of gamma on the cosets (coset basis, not diagonalized).
Matrix induced_permutation(const InducedAction& ind, const GroupElement& g);

}  // namespace vvmf
