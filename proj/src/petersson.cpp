#include "vvmf/petersson.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vvmf/parallel.hpp"
#include "vvmf/quadrature.hpp"
#include "vvmf/special_functions.hpp"

namespace vvmf {

void QuadratureSpec::validate() const {
  if (!(v_max >= 2.0)) throw DomainError("petersson: v_max must be at least 2");
  if (u_panels < 2 || u_panels % 2 != 0) throw DomainError("petersson: u_panels must be a positive even number");
  if (v_panels < 1 || cap_panels < 1) throw DomainError("petersson: panel counts must be positive");
  if (points < 2 || points > 64) throw DomainError("petersson: points per panel must lie in [2, 64]");
  if (!(tol > 0.0)) throw DomainError("petersson: tolerance must be positive");
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec q = *this;
  q.u_panels *= 2;
  q.v_panels *= 2;
  q.cap_panels *= 2;
  return q;
}

namespace {

void check_compatible(const FourierExpansion& f, const FourierExpansion& g) {
  if (f.two_k() != g.two_k()) throw DomainError("petersson: forms have different weights");
  if (f.dimension() != g.dimension()) throw DomainError("petersson: forms have different dimensions");
  const auto& a = f.action();
  const auto& b = g.action();
  if ((a.image_T - b.image_T).norm() > 1e-10 || (a.image_S - b.image_S).norm() > 1e-10)
    throw DomainError("petersson: forms transform under different actions");
}

struct PanelSum {
  Complex value = 0.0;
  double trunc = 0.0;
};

struct Integrand {
  const FourierExpansion& f;
  const FourierExpansion& g;
  double k;
  bool s_image_right;  // evaluate at -1/tau when Re tau > 0

  // <f,g> v^{k-2} at tau, with the measure already folded in
  void add(Complex tau, double w, PanelSum& acc) const {
    const Complex t = s_image_right && tau.real() > 0.0 ? -1.0 / tau : tau;
    const Evaluation ef = evaluate(f, t);
    const Evaluation eg = evaluate(g, t);
    const double vk = std::pow(t.imag(), k) / (tau.imag() * tau.imag());
    acc.value += w * vk * eg.value.dot(ef.value);
    acc.trunc += w * vk * (ef.error_bound * eg.value.norm() + eg.error_bound * ef.value.norm() +
                           ef.error_bound * eg.error_bound);
  }
};

Complex analytic_tail(const FourierExpansion& f, const FourierExpansion& g, double v_max) {
  // int_{|u|<=1/2, v>V} sum_n a conj(b) e^{-4 pi lambda v} v^{k-2} = sum a conj(b) V^{k-1} T(k-1, 4 pi lambda V)
  const double k = f.weight();
  Complex out = 0.0;
  for (int j = 0; j < f.dimension(); ++j) {
    const double kap = f.kappa()[j].value();
    const int n_top = std::min(f.n_max(j), g.n_max(j));
    for (int n = 0; n <= n_top; ++n) {
      const double lambda = n + kap;
      if (lambda <= 0.0) continue;
      const Complex ab = f.a(j, n) * std::conj(g.a(j, n));
      if (ab == Complex(0.0)) continue;
      out += ab * std::pow(v_max, k - 1.0) * tail_integral(k - 1.0, 4.0 * kPi * lambda * v_max, 0);
    }
  }
  return out;
}

Complex integrate(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& q, bool s_image,
                  double* truncation_bound) {
  q.validate();
  check_compatible(f, g);
  const GaussRule& rule = gauss_legendre(q.points);
  const Integrand h{f, g, f.weight(), s_image};
  const double du = 1.0 / q.u_panels;
  const double dv = (q.v_max - 1.0) / q.v_panels;
  const std::size_t n_rect = static_cast<std::size_t>(q.u_panels) * q.v_panels;
  const std::size_t n_cap = static_cast<std::size_t>(q.u_panels);

  const auto sums = parallel_map<PanelSum>(n_rect + n_cap, [&](std::size_t idx) {
    PanelSum acc;
    if (idx < n_rect) {
      const double u0 = -0.5 + du * static_cast<double>(idx % q.u_panels);
      const double v0 = 1.0 + dv * static_cast<double>(idx / q.u_panels);
      for (int a = 0; a < q.points; ++a) {
        const double u = u0 + 0.5 * du * (rule.x[a] + 1.0);
        for (int b = 0; b < q.points; ++b) {
          const double v = v0 + 0.5 * dv * (rule.x[b] + 1.0);
          h.add(Complex(u, v), 0.25 * du * dv * rule.w[a] * rule.w[b], acc);
        }
      }
    } else {
      // cap slice: for each u, v from the unit circle up to 1
      const double u0 = -0.5 + du * static_cast<double>(idx - n_rect);
      for (int a = 0; a < q.points; ++a) {
        const double u = u0 + 0.5 * du * (rule.x[a] + 1.0);
        const double lo = std::sqrt(1.0 - u * u);
        const double dc = (1.0 - lo) / q.cap_panels;
        for (int c = 0; c < q.cap_panels; ++c)
          for (int b = 0; b < q.points; ++b) {
            const double v = lo + dc * (c + 0.5 * (rule.x[b] + 1.0));
            h.add(Complex(u, v), 0.25 * du * dc * rule.w[a] * rule.w[b], acc);
          }
      }
    }
    return acc;
  });

  PanelSum total;
  for (const auto& p : sums) {
    total.value += p.value;
    total.trunc += p.trunc;
  }
  if (truncation_bound) *truncation_bound = total.trunc;
  return total.value + analytic_tail(f, g, q.v_max);
}

}  // namespace

Complex inner_product_at(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& quad,
                         double* truncation_bound) {
  return integrate(f, g, quad, false, truncation_bound);
}

Complex inner_product_s_translated(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& quad) {
  return integrate(f, g, quad, true, nullptr);
}

InnerProductValue inner_product(const FourierExpansion& f, const FourierExpansion& g, const QuadratureSpec& quad) {
  InnerProductValue out;
  const Complex coarse = integrate(f, g, quad, false, nullptr);
  const QuadratureSpec fine = quad.refined();
  out.value = integrate(f, g, fine, false, &out.truncation_bound);
  out.tail = analytic_tail(f, g, quad.v_max);
  const auto count = [](const QuadratureSpec& q) {
    return q.points * q.points * (q.u_panels * q.v_panels + q.u_panels * q.cap_panels);
  };
  out.evaluations = count(quad) + count(fine);
  // rounding of a sum of that many terms, random-walk scale
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * std::sqrt(double(count(fine))) *
                          std::abs(out.value);
  out.error_estimate = std::abs(out.value - coarse) + out.truncation_bound + rounding;
  return out;
}

}  // namespace vvmf
