#pragma once

// Adaptive Gauss-Kronrod (7/15) for jet-valued integrands, and
// Gauss-Legendre rules of arbitrary size.

#include <functional>
#include <vector>

#include "vvmf/jet.hpp"

namespace vvmf {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct AdaptiveOptions {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

struct AdaptiveResult {
  Jet value;
  // componentwise error estimate, same layout as value
  Jet error;
  int panels = 0;
  bool converged = false;
};

using JetIntegrand = std::function<Jet(double)>;

// Every component p must satisfy error_p <= max(abs_tol, rel_tol |I_p|, roundoff floor).
// Accepted panels are appended to *accepted when given.
AdaptiveResult integrate_adaptive(const JetIntegrand& f, double a, double b, int order,
                                  const AdaptiveOptions& opts,
                                  std::vector<Interval>* accepted = nullptr);

// The 15 Kronrod nodes and weights mapped onto [a,b].
void kronrod_nodes(double a, double b, double* x, double* w);

struct GaussRule {
  std::vector<double> x;  // on [-1,1]
  std::vector<double> w;
};

// n-point Gauss-Legendre rule, cached per n.
const GaussRule& gauss_legendre(int n);

}  // namespace vvmf
