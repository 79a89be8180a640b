#include "vvmf/lfunction.hpp"

#include <cmath>

#include "vvmf/special_functions.hpp"

namespace vvmf {
namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxLOrder) throw DomainError("derivative order must be in 0.." + std::to_string(kMaxLOrder));
}

// jet of g(c - s) from the jet of g at c - s0
Jet reflect(Jet j) {
  for (int p = 1; p <= j.order(); p += 2) j[p] = -j[p];
  return j;
}

// crude bound for int_1^inf e^{-x t} t^{sigma-1} (log t)^p dt, valid for x > sigma
double tail_term_bound(double sigma, double x, int p) {
  const double gap = x - std::max(sigma - 1.0, 0.0) - p;
  if (gap <= 0.5) return std::numeric_limits<double>::infinity();
  double b = std::exp(-x) / gap;
  for (int q = 1; q <= p; ++q) b *= q / gap;
  return b;
}

// sum_n a_j(n) B^s tail(s, 2 pi (n + kappa_j) B), skipping exact zeros
Jet half_integral(const std::vector<Complex>& a, double kappa, Complex s, int order, double B) {
  Jet acc(order);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == Complex(0.0)) continue;
    const double lam = static_cast<double>(n) + kappa;
    acc += a[n] * tail_integral_jet(s, kTwoPi * lam * B, order);
  }
  if (B != 1.0) acc *= pow(Complex(B), Jet::variable(order, s));
  return acc;
}

double truncation_bound(const FourierExpansion& f, double sigma, int order) {
  if (f.growth_constant() == 0.0) return 0.0;
  const double alpha = f.weight() / 2.0 + 1.0;
  double total = 0.0;
  for (int j = 0; j < f.dimension(); ++j) {
    const double kap = f.kappa()[j].value();
    for (int n = f.n_max(j) + 1; n < f.n_max(j) + 200; ++n) {
      const double lam = n + kap;
      double b = 0.0;
      for (int p = 0; p <= order; ++p)
        b = std::max(b, tail_term_bound(sigma, kTwoPi * lam, p) + tail_term_bound(f.weight() - sigma, kTwoPi * lam, p));
      const double t = f.growth_constant() * std::pow(lam, alpha) * b;
      total += t;
      if (t < 1e-30 * total) break;
    }
  }
  return total;
}

Jet dirichlet_factor(Complex s, int order) {
  // (2 pi)^s / Gamma(s)
  return pow(Complex(kTwoPi), Jet::variable(order, s)) * exp(-log_gamma_jet(s, order));
}

}  // namespace

// I(f,s) and the reflected I(f,k-s), per component
void split_pieces(const FourierExpansion& f, Complex s, int order, std::vector<Jet>& direct, std::vector<Jet>& mirror) {
  check_order(order);
  if (!is_finite(s)) throw DomainError("s must be finite");
  const int m = f.dimension();
  direct.assign(m, Jet(order));
  mirror.assign(m, Jet(order));
  for (int j = 0; j < m; ++j) {
    const double kap = f.kappa()[j].value();
    direct[j] = half_integral(f.values(j), kap, s, order, 1.0);
    mirror[j] = reflect(half_integral(f.values(j), kap, f.weight() - s, order, 1.0));
  }
}

std::vector<Jet> completed_L_jets(const FourierExpansion& f, Complex s, int order, double* tail_bound) {
  const int m = f.dimension();
  const double k = f.weight();
  std::vector<Jet> direct, mirror;
  split_pieces(f, s, order, direct, mirror);
  const Complex ik = std::exp(Complex(0.0, kPi * k / 2.0));
  const Matrix& U = f.action().image_S;
  std::vector<Jet> out(m, Jet(order));
  for (int j = 0; j < m; ++j) {
    out[j] = direct[j];
    for (int l = 0; l < m; ++l)
      if (U(j, l) != Complex(0.0)) out[j] += (ik * U(j, l)) * mirror[l];
  }
  if (tail_bound) *tail_bound = truncation_bound(f, s.real(), order);
  return out;
}

CompletedLValue completed_L(const FourierExpansion& f, Complex s, int order) {
  CompletedLValue r;
  r.s = s;
  r.order = order;
  const auto jets = completed_L_jets(f, s, order, &r.tail_bound);
  r.value = Vector(f.dimension());
  for (int j = 0; j < f.dimension(); ++j) r.value(j) = jets[j].derivative(order);
  return r;
}

double functional_equation_residual(const FourierExpansion& f, Complex s) {
  const Vector a = completed_L(f, s).value;
  const Vector b = completed_L(f, f.weight() - s).value;
  const Complex ik = std::exp(Complex(0.0, kPi * f.weight() / 2.0));
  // at a zero of L* (forced when i^k U(S) = -1 at s = k/2) the relative residual
  // is meaningless; fall back to the size of the uncancelled pieces there
  std::vector<Jet> direct, mirror;
  split_pieces(f, s, 0, direct, mirror);
  double pieces = 0.0;
  for (int j = 0; j < f.dimension(); ++j) pieces += std::norm(direct[j].value()) + std::norm(mirror[j].value());
  pieces = std::sqrt(pieces);
  double scale = a.norm();
  if (scale < 1e-6 * pieces) scale = pieces;
  if (scale == 0.0) return 0.0;
  return (a - ik * (f.action().image_S * b)).norm() / scale;
}

Complex partial_L(const FourierExpansion& f, int j, Complex s, int order) {
  if (j < 0 || j >= f.dimension()) throw DomainError("component index out of range");
  const auto jets = completed_L_jets(f, s, order);
  return (dirichlet_factor(s, order) * jets[j]).derivative(order);
}

Complex plus_partial_L(const PlusSpaceForm& f, int j, Complex s, int order, double split) {
  check_order(order);
  if (j != 1 && j != 2) throw DomainError("plus-space residue class must be 1 or 2");
  if (!(split > 0.0)) throw DomainError("split point must be positive");
  const FourierExpansion F = plus_space_components(f);
  const double k = F.weight();
  // f_l(iv) = sum c(N) e^{-2 pi N v} over N = -l^2 mod 4: pass c(N) indexed by N
  auto residue_series = [&](int l) {
    std::vector<Complex> c(f.c.size(), 0.0);
    const int rho = (l == 1) ? 3 : 0;
    for (std::size_t N = rho; N < f.c.size(); N += 4) c[N] = f.c[N].value;
    return c;
  };
  const Jet upper = half_integral(residue_series(j), 0.0, s, order, split);
  // int_0^B f_j(iv) v^{s-1} dv = i^k 4^k 16^{-s} sum_l U_jl int_{1/16B}^inf f_l(iu) u^{k-s-1} du
  const Matrix& U = F.action().image_S;
  Jet lower(order);
  for (int l = 1; l <= 2; ++l) {
    if (U(j - 1, l - 1) == Complex(0.0)) continue;
    lower += U(j - 1, l - 1) * reflect(half_integral(residue_series(l), 0.0, k - s, order, 1.0 / (16.0 * split)));
  }
  const Jet S = Jet::variable(order, s);
  lower *= std::exp(Complex(0.0, kPi * k / 2.0)) * std::pow(4.0, k);
  lower *= pow(Complex(1.0 / 16.0), S);
  return (dirichlet_factor(s, order) * (upper + lower)).derivative(order);
}

}  // namespace vvmf
