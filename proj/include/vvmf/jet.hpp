#pragma once

// Truncated Taylor series a_0 + a_1 e + ... + a_N e^N in a complex
// perturbation e of the variable s.  Derivatives are recovered as p! a_p.

#include <array>
#include <cmath>

#include "vvmf/types.hpp"

namespace vvmf {

class Jet {
 public:
  static constexpr int kMaxOrder = 8;

  Jet() = default;
  explicit Jet(int order, Complex c0 = 0.0) : order_(order) {
    if (order < 0 || order > kMaxOrder) throw DomainError("jet order out of range");
    c_[0] = c0;
  }
  // s0 + e
  static Jet variable(int order, Complex s0) {
    Jet j(order, s0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return order_; }
  Complex& operator[](int p) { return c_[p]; }
  const Complex& operator[](int p) const { return c_[p]; }
  Complex value() const { return c_[0]; }
  // p-th derivative with respect to s
  Complex derivative(int p) const;

  Jet& operator+=(const Jet& o) {
    for (int p = 0; p <= order_; ++p) c_[p] += o.c_[p];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int p = 0; p <= order_; ++p) c_[p] -= o.c_[p];
    return *this;
  }
  Jet& operator*=(Complex a) {
    for (int p = 0; p <= order_; ++p) c_[p] *= a;
    return *this;
  }
  Jet& operator*=(double a) {
    for (int p = 0; p <= order_; ++p) c_[p] *= a;
    return *this;
  }
  Jet& operator*=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, Complex b) { return a *= b; }
  friend Jet operator*(Complex b, Jet a) { return a *= b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double b, Jet a) { return a *= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(const Jet& a, const Jet& b);
  Jet operator-() const { return *this * -1.0; }

  // Largest coefficient modulus.
  double norm() const;

 private:
  int order_ = 0;
  std::array<Complex, kMaxOrder + 1> c_{};
};

Jet exp(const Jet& x);
Jet log(const Jet& x);
// base^x with the principal logarithm of base.
Jet pow(Complex base, const Jet& x);
// exp(a e) = sum a^p e^p / p!
Jet exp_linear(int order, Complex c0, Complex a);

}  // namespace vvmf
