#include "vvmf/jet.hpp"

namespace vvmf {

Complex Jet::derivative(int p) const {
  double f = 1.0;
  for (int q = 2; q <= p; ++q) f *= q;
  return c_[p] * f;
}

Jet& Jet::operator*=(const Jet& o) {
  std::array<Complex, kMaxOrder + 1> r{};
  for (int p = 0; p <= order_; ++p)
    for (int q = 0; q <= p; ++q) r[p] += c_[q] * o.c_[p - q];
  c_ = r;
  return *this;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet r(a.order());
  const Complex inv = 1.0 / b[0];
  for (int p = 0; p <= a.order(); ++p) {
    Complex acc = a[p];
    for (int q = 1; q <= p; ++q) acc -= b[q] * r[p - q];
    r[p] = acc * inv;
  }
  return r;
}

double Jet::norm() const {
  double m = 0.0;
  for (int p = 0; p <= order_; ++p) m = std::max(m, std::abs(c_[p]));
  return m;
}

// y = exp(x): y' = x' y gives p y_p = sum_{q=1}^p q x_q y_{p-q}.
Jet exp(const Jet& x) {
  Jet y(x.order(), std::exp(x[0]));
  for (int p = 1; p <= x.order(); ++p) {
    Complex acc = 0.0;
    for (int q = 1; q <= p; ++q) acc += static_cast<double>(q) * x[q] * y[p - q];
    y[p] = acc / static_cast<double>(p);
  }
  return y;
}

// y = log(x): x y' = x' gives p x_0 y_p = p x_p - sum_{q=1}^{p-1} q y_q x_{p-q}.
Jet log(const Jet& x) {
  Jet y(x.order(), std::log(x[0]));
  for (int p = 1; p <= x.order(); ++p) {
    Complex acc = static_cast<double>(p) * x[p];
    for (int q = 1; q < p; ++q) acc -= static_cast<double>(q) * y[q] * x[p - q];
    y[p] = acc / (static_cast<double>(p) * x[0]);
  }
  return y;
}

Jet pow(Complex base, const Jet& x) { return exp(x * std::log(base)); }

Jet exp_linear(int order, Complex c0, Complex a) {
  Jet y(order, c0);
  for (int p = 1; p <= order; ++p) y[p] = y[p - 1] * a / static_cast<double>(p);
  return y;
}

}  // namespace vvmf
