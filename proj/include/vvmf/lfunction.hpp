#pragma once

// Completed L-functions L*(f,s) = Gamma(s) (2 pi)^{-s} sum_n a(n) (n + kappa)^{-s},
// continued to all s by splitting the Mellin integral at v = 1.

#include <vector>

#include "vvmf/forms.hpp"
#include "vvmf/jet.hpp"

namespace vvmf {

constexpr int kMaxLOrder = 5;

struct CompletedLValue {
  Complex s;
  int order = 0;
  Vector value;             // d^order/ds^order L*(f,s), one entry per component
  double tail_bound = 0.0;  // from the coefficients beyond the truncation
};

// Taylor jets in s of every component, orders 0..order.
std::vector<Jet> completed_L_jets(const FourierExpansion& f, Complex s, int order, double* tail_bound = nullptr);

CompletedLValue completed_L(const FourierExpansion& f, Complex s, int order = 0);

// ||L*(f,s) - i^k U(S) L*(f,k-s)|| / ||L*(f,s)||
double functional_equation_residual(const FourierExpansion& f, Complex s);

// Component j (0-based) of sum_n a_j(n) (n + kappa_j)^{-s}, differentiated `order`
// times.  For a theta decomposition n + kappa_j = N/4m, so this is the
// Jacobi partial L-function with its (N/4m)^{-s} normalization.
Complex partial_L(const FourierExpansion& f, int j, Complex s, int order = 0);

// sum_{N = -j^2 mod 4} c(N) N^{-s} for a plus-space form (j = 1, 2), computed
// from its own Mellin integral split at v = split and unfolded with
// v -> 1/(16 v).  Equals 4^{-s} partial_L of the components.
Complex plus_partial_L(const PlusSpaceForm& f, int j, Complex s, int order = 0, double split = 0.25);

}  // namespace vvmf
