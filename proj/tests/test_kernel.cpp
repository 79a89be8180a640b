#include <cmath>

#include "doctest.h"
#include "vvmf/forms.hpp"
#include "vvmf/kernel.hpp"
#include "vvmf/special_functions.hpp"

using namespace vvmf;

namespace {

KernelParams scalar(double k, Complex s) {
  KernelParams p;
  p.action = trivial_action(static_cast<int>(2 * k));
  p.s = s;
  return p;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("kernel constants") {
  const auto c = kernel_constants(12.0, 6.0);
  CHECK(rel(c.c_k, kPi * 3628800.0 / 1024.0) < 1e-14);
  CHECK(std::abs(std::abs(c.gamma_k) - 7200.0) < 1e-9);
  CHECK(rel(c.gamma_k, 7200.0 * std::exp(Complex(0.0, 3.0 * kPi))) < 1e-13);
  const auto h = kernel_constants(6.5, 2.0);
  CHECK(std::abs(std::abs(h.c_k) - kPi * vvmf::gamma(5.5).real() / std::pow(2.0, 4.5)) < 1e-12);
  CHECK(std::abs(std::arg(h.c_k) - std::arg(std::exp(Complex(0.0, 13.0 * kPi / 4.0)))) < 1e-12);
  // jet against finite differences
  const Complex s(4.3, 0.6);
  const Jet g = gamma_k_jet(12.0, s, 2);
  auto f = [](Complex z) { return kernel_constants(12.0, z).gamma_k; };
  const double h1 = 1e-4;
  CHECK(rel(g.derivative(1), (f(s + h1) - f(s - h1)) / (2.0 * h1)) < 1e-7);
  CHECK(rel(g.value(), f(s)) < 1e-13);
  CHECK_THROWS_AS(kernel_constants(12.0, 12.0), PoleError);
}

TEST_CASE("pointwise kernel is invariant") {
  KernelParams p = scalar(12, 4.0);
  p.c_max = 400;
  const Complex tau(0.2, 1.1);
  const Vector r = kernel_pointwise(p, tau);
  CHECK((kernel_pointwise(p, tau + 1.0) - r).norm() < 1e-6 * r.norm());
  p.c_max = 0;
  for (const Complex t : {Complex(0.0, 1.0), Complex(0.3, 1.2), Complex(-0.41, 0.95)}) {
    const Vector a = kernel_pointwise(p, t);
    const Vector b = kernel_pointwise(p, -1.0 / t);
    CHECK((b - std::pow(t, 12.0) * a).norm() < 1e-5 * b.norm());
  }
}

TEST_CASE("vector-valued pointwise kernel transforms with the action") {
  const auto a = induced_action_gamma0(2, 12).action;
  KernelParams p;
  p.action = a;
  p.s = Complex(5.0, 0.3);
  p.i = 1;
  const Complex tau(0.2, 1.1);
  const Vector r = kernel_pointwise(p, tau);
  CHECK((kernel_pointwise(p, tau + 1.0) - a.image_T * r).norm() < 1e-8 * r.norm());
  const Vector rs = kernel_pointwise(p, -1.0 / tau);
  CHECK((rs - std::pow(tau, 12.0) * (a.image_S * r)).norm() < 1e-8 * rs.norm());
}

TEST_CASE("diagonal piece of the closed formula") {
  const Complex s(4.0, 0.0);
  const auto r = kernel_coeff(scalar(12, s), 0, 1, 0);
  CHECK(rel(r.diagonal, std::pow(kTwoPi, s) * vvmf::gamma(12.0 - s)) < 1e-13);
  const auto r3 = kernel_coeff(scalar(12, s), 0, 3, 0);
  CHECK(rel(r3.diagonal, std::pow(kTwoPi, s) * vvmf::gamma(12.0 - s) * std::pow(3.0, s - 1.0)) < 1e-13);
  CHECK(rel(r.value, r.diagonal + r.twisted + r.group_sum) < 1e-15);
  CHECK(r.converged);
}

TEST_CASE("scalar coefficients are real for real s") {
  for (double s : {3.0, 5.7, 8.2}) {
    const auto r = kernel_coeff(scalar(12, s), 0, 1, 1);
    CHECK(std::abs(r.value.imag()) < 1e-6 * std::abs(r.value.real()));
  }
}

TEST_CASE("order-0 value is the same from every derivative order") {
  KernelParams p = scalar(12, Complex(5.2, 0.4));
  p.c_max = 30;
  const Complex v0 = kernel_coeff(p, 0, 2, 0).value;
  // same truncation at every order; only jet arithmetic rounding may differ
  for (int order = 1; order <= 3; ++order) CHECK(rel(kernel_coeff(p, 0, 2, order).derivatives[0], v0) < 1e-12);
}

TEST_CASE("closed formula against the numerical Fourier integral") {
  for (Complex s : {Complex(4.0), Complex(5.7), Complex(5.5, 1.0)})
    for (int order : {0, 1}) {
      const KernelParams p = scalar(12, s);
      const auto f = kernel_coeff(p, 0, 1, order);
      const auto g = kernel_coeff_numeric(p, 0, 1, order);
      CHECK(f.converged);
      CHECK(g.converged);
      CHECK(rel(f.value, g.value) < 1e-7);
    }
  // higher index and weight
  const auto f = kernel_coeff(scalar(16, 7.1), 0, 2, 2);
  const auto g = kernel_coeff_numeric(scalar(16, 7.1), 0, 2, 2);
  CHECK(rel(f.value, g.value) < 1e-7);
}

TEST_CASE("numerical coefficient does not depend on the height") {
  const KernelParams p = scalar(12, 4.0);
  CHECK(rel(kernel_coeff_numeric(p, 0, 1, 0, 0.8).value, kernel_coeff_numeric(p, 0, 1, 0, 1.2).value) < 1e-6);
  CHECK_THROWS_AS(kernel_coeff_numeric(p, 0, 1, 0, 2.0), DomainError);
}

TEST_CASE("closed formula for vector-valued actions") {
  KernelParams p;
  p.action = induced_action_gamma0(2, 12).action;
  p.s = Complex(5.3, 0.5);
  p.i = 2;
  CHECK(rel(kernel_coeff(p, 0, 1, 0).value, kernel_coeff_numeric(p, 0, 1, 0).value) < 1e-7);
  p.action = weil_action(1, 19);
  p.s = Complex(4.2, 0.7);
  p.i = 1;
  CHECK(rel(kernel_coeff(p, 0, 1, 1).value, kernel_coeff_numeric(p, 0, 1, 1).value) < 1e-6);
}

TEST_CASE("q-expansion from the formula reproduces the kernel") {
  const KernelParams p = scalar(12, Complex(5.0, 0.5));
  const Complex tau(0.1, 0.9), q = std::exp(kTwoPi * kI * tau);
  Complex series = 0.0, qn = 1.0;
  for (int n = 1; n <= 16; ++n) {
    qn *= q;
    series += kernel_coeff(p, 0, n, 0).value * qn;
  }
  const Complex direct = kernel_pointwise(p, tau)(0);
  CHECK(rel(series, direct) < 1e-4);
}

TEST_CASE("the other enumerations disagree with the oracle") {
  KernelParams p = scalar(12, 5.7);
  const Complex truth = kernel_coeff_numeric(p, 0, 1, 0).value;
  p.enumeration = Enumeration::SingleRepresentative;
  p.c_max = 10;
  const Complex c10 = kernel_coeff(p, 0, 1, 0).value;
  p.c_max = 20;
  const Complex c20 = kernel_coeff(p, 0, 1, 0).value;
  CHECK(rel(c10, truth) > 0.5);
  CHECK(rel(c20, c10) > 0.3);  // grows with the box instead of settling
  p.enumeration = Enumeration::FullOrbit;
  p.c_max = 0;
  p.literal_phase = true;
  CHECK(rel(kernel_coeff(p, 0, 1, 0).value, truth) > 0.05);
}

TEST_CASE("kernel argument checks") {
  CHECK_THROWS_AS(kernel_coeff(scalar(12, 0.5), 0, 1, 0), DomainError);
  CHECK_THROWS_AS(kernel_coeff(scalar(12, 11.5), 0, 1, 0), DomainError);
  CHECK_THROWS_AS(kernel_coeff(scalar(12, 5.0), 0, 0, 0), DomainError);
  CHECK_THROWS_AS(kernel_coeff(scalar(12, 5.0), 1, 1, 0), DomainError);
  CHECK_THROWS_AS(kernel_coeff(scalar(12, 5.0), 0, 1, 4), DomainError);
  CHECK_THROWS_AS(kernel_pointwise(scalar(12, 5.0), Complex(0.0, -1.0)), DomainError);
}
