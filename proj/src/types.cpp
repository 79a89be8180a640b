#include "vvmf/types.hpp"

#include <cmath>
#include <numeric>

namespace vvmf {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num = n / (g == 0 ? 1 : g);
  den = d / (g == 0 ? 1 : g);
}

Rational Rational::approximate(double x, std::int64_t max_den, double tol) {
  // continued fraction convergents
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    const std::int64_t ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return Rational(h1, k1);
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (k1 > 0 && std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return Rational(h1, k1);
  throw DomainError("value is not a rational with small denominator");
}

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

Int128 parse_int128(const std::string& text, int line) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  if (i >= text.size()) throw ParseError("expected an integer, got '" + text + "'", line);
  unsigned __int128 u = 0;
  const unsigned __int128 limit = static_cast<unsigned __int128>(1) << 126;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') throw ParseError("expected an integer, got '" + text + "'", line);
    u = u * 10 + static_cast<unsigned>(text[i] - '0');
    if (u > limit) throw ParseError("integer out of range: " + text, line);
  }
  const Int128 v = static_cast<Int128>(u);
  return neg ? -v : v;
}

}  // namespace vvmf
