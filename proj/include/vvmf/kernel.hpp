#pragma once

// The kernel R_{k,s,i} = gamma_k(s) sum_{gamma in SL2(Z)} (tau^{-s} e_i)|gamma and its
// Fourier coefficients r_{k,s,i,j}(n), by the closed formula and by a numerical
// Fourier integral of the group sum.

#include <string>
#include <vector>

#include "vvmf/jet.hpp"
#include "vvmf/modular_group.hpp"

namespace vvmf {

// How the (a, c) sum of the closed formula is enumerated.
enum class Enumeration {
  FullOrbit,             // every a > 0 coprime to c, d = a^{-1} mod c
  SingleRepresentative,  // a least positive with a d = 1 mod c, d in [-C c, C c]
};

struct KernelParams {
  UnitaryAction action;
  int i = 0;  // 0-based component of p_{s,i}
  Complex s = 0.0;
  int c_max = 0;  // 0: adaptive truncation
  double tol = 1e-9;
  int hard_cap = 2000;
  Enumeration enumeration = Enumeration::FullOrbit;
  bool literal_phase = false;  // e^{+-i pi s} instead of e^{+-i pi s/2} in the group sum
  int u_points = 32;           // trapezoid points for the numerical coefficient

  double weight() const { return action.weight(); }
  // 1 < Re s < k - 1, component in range
  void validate() const;
};

struct KernelConstants {
  Complex gamma_k;  // (1/2) e^{i pi s/2} Gamma(s) Gamma(k-s)
  Complex c_k;      // e^{i pi k/2} pi Gamma(k-1) / 2^{k-2}
};

KernelConstants kernel_constants(double k, Complex s);
Jet gamma_k_jet(double k, Complex s, int order);

struct PointwiseValue {
  std::vector<Jet> value;  // per component, jets in s
  double truncation_estimate = 0.0;
  int shells = 0;
  bool converged = true;
};

PointwiseValue kernel_pointwise_jets(const KernelParams& p, Complex tau, int order);
Vector kernel_pointwise(const KernelParams& p, Complex tau);

enum class KernelMethod { Formula, Numeric };

struct KernelCoefficient {
  int i = 0, j = 0, n = 0, order = 0;
  Complex value;
  std::vector<Complex> derivatives;  // orders 0..order from the same sum
  double truncation_estimate = 0.0;
  KernelMethod method = KernelMethod::Formula;
  // formula pieces, already differentiated: value = diagonal + twisted + group_sum
  Complex diagonal, twisted, group_sum;
  int extent = 0;  // largest c (formula) or shell radius (numeric) used
  bool converged = true;
  std::string warning;
};

constexpr int kMaxKernelOrder = 3;

KernelCoefficient kernel_coeff(const KernelParams& p, int j, int n, int order);
KernelCoefficient kernel_coeff_numeric(const KernelParams& p, int j, int n, int order, double v0 = 1.0);

}  // namespace vvmf
