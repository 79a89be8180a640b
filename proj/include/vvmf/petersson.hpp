#pragma once

// Petersson products (f,g) = int_F <f,g> v^k du dv / v^2 over the standard
// fundamental domain {|u| <= 1/2, |tau| >= 1}.

#include "vvmf/forms.hpp"

namespace vvmf {

struct QuadratureSpec {
  double v_max = 8.0;  // rectangle v in [1, v_max]; above it the integral is done term by term
  int u_panels = 4;    // even, so u = 0 is a panel edge
  int v_panels = 24;   // on [1, v_max]
  int cap_panels = 2;  // v panels on each slice of the cap {v < 1}
  int points = 12;     // Gauss-Legendre nodes per panel and direction
  double tol = 1e-10;  // target relative error; only reported against

  void validate() const;
  // Every panel count doubled.
  QuadratureSpec refined() const;
};

struct InnerProductValue {
  Complex value;
  // |I(refined) - I(spec)| + coefficient truncation + rounding
  double error_estimate = 0.0;
  Complex tail;                   // analytic contribution of v > v_max
  double truncation_bound = 0.0;  // from coefficients beyond the stored range
  int evaluations = 0;
};

// Evaluated at quad.refined(), compared against quad for the error estimate.
InnerProductValue inner_product(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& quad = {});

// Single-resolution integral, no comparison.
Complex inner_product_at(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& quad,
                         double* truncation_bound = nullptr);

// Same integral with the half u > 0 replaced by its image under S, i.e. the
// integrand h(tau) = <f,g> v^k taken at -1/tau there.  Agrees with
// inner_product_at only because h is Gamma-invariant.
Complex inner_product_s_translated(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& quad);

}  // namespace vvmf
