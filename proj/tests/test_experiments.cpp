#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "vvmf/experiments.hpp"
#include "vvmf/parallel.hpp"
#include "vvmf/special_functions.hpp"

using namespace vvmf;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

FourierExpansion theta_fixture(const char* name) {
  return theta_decompose(load_jacobi(std::string(VVMF_FIXTURE_DIR) + "/" + name));
}

std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

FourierExpansion from_series(const std::vector<double>& c, const char* label) {
  std::vector<Coefficient> v;
  for (double x : c) v.push_back(Coefficient::real_or_complex(x));
  return FourierExpansion(trivial_action(48), {v}, label);
}

// S_24 is two-dimensional: Delta E4^3 and Delta^2, orthogonalized by hand.
std::vector<FourierExpansion> weight24_pair(bool orthogonalize) {
  const int N = default_n_max(24) + 1;
  std::vector<double> d(N, 0.0), e4(N, 0.0);
  const auto delta = delta_expansion(N - 1);
  for (int n = 0; n < N; ++n) d[n] = delta.a(0, n).real();
  e4[0] = 1.0;
  for (int n = 1; n < N; ++n) {
    double sig = 0.0;
    for (int q = 1; q <= n; ++q)
      if (n % q == 0) sig += std::pow(q, 3);
    e4[n] = 240.0 * sig;
  }
  const auto f1 = from_series(mul(d, mul(e4, mul(e4, e4))), "Delta E4^3");
  auto f2 = from_series(mul(d, d), "Delta^2");
  if (orthogonalize) {
    const Complex t = inner_product(f2, f1).value / inner_product(f1, f1).value;
    f2 = linear_combination(1.0, f2, -t, f1);
  }
  return {f1, f2};
}

}  // namespace

TEST_CASE("n_zero") {
  CHECK(n_zero(0.0) == 1);
  CHECK(n_zero(0.25) == 0);
  std::string w;
  CHECK(n_zero(1.0 - 1e-15, &w) == 0);
  CHECK(!w.empty());
  CHECK_THROWS_AS(n_zero(1.0), DomainError);
  CHECK_THROWS_AS(n_zero(-0.1), DomainError);
}

TEST_CASE("averaged derivative for Delta at the centre") {
  const BasisData B = scalar_basis_data(12);
  const Complex L6 = completed_L(B.forms[0], 6.0).value(0);
  const Complex D0 = averaged_derivative(B, 0, 0, 6.0);
  CHECK(std::abs(D0) > 0.0);
  CHECK(rel(D0, L6 / B.norms[0]) < 1e-14);
  CHECK(std::abs(averaged_derivative(B, 0, 1, 6.0)) < 1e-9 * std::abs(D0));
  CHECK_THROWS_AS(averaged_derivative(BasisData{}, 0, 1, 6.0), DomainError);
}

TEST_CASE("rescaling basis elements leaves D_n unchanged") {
  const BasisData B = scalar_basis_data(12);
  for (Complex alpha : {Complex(2.0), Complex(1.0, 2.0), Complex(0.0, -0.5)}) {
    const BasisData C = make_basis({B.forms[0].scaled(alpha)});
    for (int n = 0; n <= 2; ++n)
      for (Complex s : {Complex(5.7), Complex(5.6, 0.5)}) CHECK(rel(averaged_derivative(C, 0, n, s), averaged_derivative(B, 0, n, s)) < 1e-12);
  }
}

TEST_CASE("pairing identity on scalar spaces") {
  const BasisData B12 = scalar_basis_data(12);
  const IdentityReport a = verify_identity(B12, 0, 4.0, 0);
  CHECK(a.rel_residual < 1e-4);
  CHECK(a.plain_rel_residual < 1e-4);  // U(S) = 1 here
  const IdentityReport b = verify_identity(B12, 0, 5.7, 1);
  CHECK(b.rel_residual < 1e-3);
  const IdentityReport c = verify_identity(scalar_basis_data(16), 0, Complex(7.5, 1.0), 0);
  CHECK(c.rel_residual < 1e-4);
  CHECK(rel(c.rhs, c.rhs_plain) < 1e-10);
}

TEST_CASE("pairing identity improves with resolution") {
  QuadratureSpec coarse;
  coarse.u_panels = 2;
  coarse.v_panels = 1;
  coarse.cap_panels = 1;
  coarse.points = 4;
  KernelParams rough;
  rough.c_max = 2;
  const IdentityReport lo = verify_identity(scalar_basis_data(12, coarse), 0, 5.7, 0, rough);
  const IdentityReport hi = verify_identity(scalar_basis_data(12), 0, 5.7, 0);
  CHECK(hi.rel_residual < lo.rel_residual);
  CHECK(hi.rel_residual < 1e-6);
}

TEST_CASE("two-dimensional space: orthogonal basis required, identity holds") {
  CHECK_THROWS_AS(make_basis(weight24_pair(false)), DomainError);
  const BasisData B = make_basis(weight24_pair(true));
  CHECK(B.size() == 2);
  CHECK(B.orthogonality_residual < 1e-6);
  for (int order : {0, 1}) CHECK(verify_identity(B, 0, 11.7, order).rel_residual < 1e-4);
  // the sum over the basis does not depend on which orthogonal basis is used
  auto pair = weight24_pair(true);
  const BasisData C = make_basis({pair[0].scaled(Complex(0.0, 3.0)), pair[1].scaled(-2.0)});
  CHECK(rel(averaged_derivative(C, 0, 1, Complex(11.6, 0.3)), averaged_derivative(B, 0, 1, Complex(11.6, 0.3))) < 1e-12);
}

TEST_CASE("vector-valued identity pairs to U(S) L*, not L*") {
  for (const char* name : {"phi10_1.jcf", "phi14_1.jcf"}) {
    const BasisData B = make_basis({theta_fixture(name)});
    const double k = B.weight();
    for (int i : {0, 1}) {
      CAPTURE(name);
      CAPTURE(i);
      const IdentityReport r0 = verify_identity(B, i, k / 2.0 - 0.3, 0);
      CHECK(r0.rel_residual < 1e-6);
      CHECK(r0.plain_rel_residual > 1e-2);  // the literal component form does not hold here
      CHECK(verify_identity(B, i, Complex(k / 2.0 - 0.4, 1.0), 1).rel_residual < 1e-5);
    }
  }
}

TEST_CASE("scan on Delta: no zero flags, mirror symmetry, grid phase") {
  const BasisData B = scalar_basis_data(12);
  const ScanReport lo = scan_strip(B, 0, 1, 0.0, 0.05, 200, ScanWindow::Lower);
  CHECK(lo.sigma.size() == 200);
  CHECK(lo.sigma.front() > 5.5);
  CHECK(lo.sigma.back() < 5.95);
  CHECK(lo.min_abs > 0.0);
  CHECK(lo.flagged.empty());
  CHECK(!lo.prior_work_mode);
  const ScanReport mi = scan_strip(B, 0, 1, 0.0, 0.05, 200, ScanWindow::Mirror);
  CHECK(mi.flagged.empty());
  CHECK(std::abs(lo.argmin_sigma + mi.argmin_sigma - 12.0) < 1e-12);
  // D_1(12 - sigma) = -D_1(sigma) for a scalar form with i^k = 1
  for (std::size_t p = 0; p < 200; ++p) CHECK(std::abs(lo.D[p] + mi.D[199 - p]) < 1e-9 * std::abs(lo.D[p]));

  const ScanReport g99 = scan_strip(B, 0, 1, 0.0, 0.05, 99);
  const ScanReport g199 = scan_strip(B, 0, 1, 0.0, 0.05, 199);
  for (int p = 0; p < 99; ++p) {
    CHECK(g99.sigma[p] == g199.sigma[2 * p + 1]);
    CHECK(g99.D[p] == g199.D[2 * p + 1]);
  }
  CHECK(std::abs(g99.min_abs - g199.min_abs) < 0.05 * g199.min_abs);
}

TEST_CASE("scan at other weights and orders") {
  for (int k : {16, 22})
    for (int n : {1, 2}) {
      const ScanReport r = scan_strip(scalar_basis_data(k), 0, n, 1.0, 0.05, 60);
      CHECK(r.flagged.empty());
      CHECK(r.min_abs > 0.0);
    }
  const ScanReport z = scan_strip(scalar_basis_data(12), 0, 0, 0.0, 0.05, 20);
  CHECK(z.prior_work_mode);
  std::ostringstream os;
  write_scan_summary(os, z);
  CHECK(os.str().find("prior-work") != std::string::npos);
}

TEST_CASE("zero flag rule") {
  std::vector<Complex> D;
  for (int p = 0; p <= 20; ++p) D.push_back(double(p - 10) * Complex(1.0, 1.0));
  CHECK(flag_zeros(D) == std::vector<int>{10});
  std::vector<Complex> trough;
  for (int p = 0; p <= 20; ++p) trough.push_back(Complex(double((p - 10) * (p - 10)) + 1e-9, 1.0));
  CHECK(flag_zeros(trough).empty());  // small but no sign change
  std::vector<Complex> half;
  for (int p = 0; p <= 20; ++p) half.push_back(Complex(double(p - 10), 1e-9 + double((p - 10) * (p - 10))));
  CHECK(flag_zeros(half).empty());  // real part crosses, imaginary part does not
}

TEST_CASE("scan CSV is independent of the thread count") {
  const BasisData B = scalar_basis_data(12);
  auto csv = [&](int threads) {
    set_thread_count(threads);
    std::ostringstream os;
    write_scan_csv(os, scan_strip(B, 0, 1, 1.0, 0.05, 200));
    return os.str();
  };
  const std::string one = csv(1), four = csv(4);
  set_thread_count(0);
  CHECK(one == four);
  CHECK(std::count(one.begin(), one.end(), '\n') == 201);
  CHECK(one.rfind("sigma,t,re_D,im_D,abs_D,re_term_1,im_term_1\n", 0) == 0);
}

TEST_CASE("asymptotic diagnostic: closed forms") {
  for (double k : {20.0, 60.0, 200.0}) {
    const Complex s(k / 2 - 0.25, 0.0);
    CHECK(rel(log_derivative_ratio(1, k, s, 0.0, 1), std::log(kTwoPi) - polygamma(0, k - s)) < 1e-10);
    // second derivative of G by Richardson-extrapolated central differences
    const auto G = [&](Complex z) { return std::exp(z * std::log(kTwoPi) + log_gamma(k - z)); };
    const auto d2 = [&](double h) { return (G(s + h) - 2.0 * G(s) + G(s - h)) / (h * h); };
    const Complex fd = (4.0 * d2(1e-3) - d2(2e-3)) / 3.0;
    CHECK(rel(log_derivative_ratio(2, k, s, 0.0, 1), fd / G(s)) < 1e-5);
  }
  // kappa > 0 shifts only the first log
  const Complex s(9.75, 0.5);
  CHECK(rel(log_derivative_ratio(1, 20.0, s, 0.75, 0), std::log(kTwoPi * 0.75) - polygamma(0, 20.0 - s)) < 1e-12);
}

TEST_CASE("asymptotic diagnostic: degree and leading coefficient") {
  std::vector<double> ks;
  for (int k = 20; k <= 200; k += 4) ks.push_back(k);
  for (int n : {1, 2, 3}) {
    const AsymptoticTable t = asymptotic_diagnostic(ks, n, 0.0, 0.25, 0.0, 1);
    CHECK(t.fitted_degree == n);
    const double want = n % 2 ? -1.0 : 1.0;
    CHECK(std::abs(t.leading_coefficient - want) < 0.1);
    CHECK(t.leading_trend.back().first == 200.0);
  }
  CHECK_THROWS_AS(asymptotic_diagnostic(ks, 1, 0.0, 0.6, 0.0, 1), DomainError);
}
