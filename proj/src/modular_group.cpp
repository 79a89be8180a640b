#include "vvmf/modular_group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace vvmf {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

// x, y with a x + b y = gcd(a, b)
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  std::int64_t x1, y1;
  const std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Powers of a diagonal image through the exact offsets.
Matrix t_power(const std::vector<Rational>& kappa, std::int64_t e) {
  const int n = static_cast<int>(kappa.size());
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const std::int64_t r = mod((kappa[j].num % kappa[j].den) * mod(e, kappa[j].den), kappa[j].den);
    m(j, j) = std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(kappa[j].den));
  }
  return m;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

void GroupElement::validate() const {
  if (det() != 1) throw DomainError("matrix does not have determinant 1");
}

Complex GroupElement::act(Complex tau) const {
  return (static_cast<double>(a) * tau + static_cast<double>(b)) / j(tau);
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

GroupElement Word::product() const {
  GroupElement m = GroupElement::identity();
  for (const auto& t : tokens) m = m * (t.gen == Generator::S ? GroupElement::S() : GroupElement::T(t.exponent));
  return negate ? m.negated() : m;
}

std::string Word::to_string() const {
  std::ostringstream os;
  if (negate) os << "-";
  bool first = true;
  for (const auto& t : tokens) {
    if (!first) os << " ";
    first = false;
    if (t.gen == Generator::S)
      os << "S";
    else
      os << "T^" << t.exponent;
  }
  if (first) os << "I";
  return os.str();
}

Word decompose_word(const GroupElement& g) {
  g.validate();
  Word w;
  GroupElement m = g;
  while (m.c != 0) {
    // nearest-integer quotient keeps |remainder| <= |c|/2
    std::int64_t q = floor_div(m.a, m.c);
    if (2 * std::llabs(m.a - q * m.c) > std::llabs(m.c)) ++q;
    if (q != 0) w.tokens.push_back({Generator::T, q});
    m = GroupElement::T(-q) * m;
    // m = S * (S^{-1} m)
    m = GroupElement{m.c, m.d, -m.a, -m.b};
    w.tokens.push_back({Generator::S, 1});
  }
  // m = +-(1 b; 0 1)
  if (m.a == -1) {
    w.negate = true;
    m = m.negated();
  }
  if (m.b != 0) w.tokens.push_back({Generator::T, m.b});
  return w;
}

Complex MetaElement::phi(Complex tau) const {
  return static_cast<double>(branch) * std::sqrt(base.j(tau));
}

MetaElement operator*(const MetaElement& x, const MetaElement& y) {
  MetaElement r{x.base * y.base, 1};
  const Complex tau(0.0, 1.0);
  const Complex prod = x.phi(y.base.act(tau)) * y.phi(tau);
  const Complex principal = std::sqrt(r.base.j(tau));
  r.branch = (prod / principal).real() > 0.0 ? 1 : -1;
  return r;
}

void UnitaryAction::validate(double tol) const {
  const int m = dimension;
  if (m < 1 || image_T.rows() != m || image_T.cols() != m || image_S.rows() != m || image_S.cols() != m)
    throw DomainError("action images have the wrong size");
  const Matrix id = Matrix::Identity(m, m);
  if (max_abs(image_T.adjoint() * image_T - id) > tol || max_abs(image_S.adjoint() * image_S - id) > tol)
    throw DomainError("action images are not unitary");
  Matrix off = image_T;
  off.diagonal().setZero();
  if (max_abs(off) > tol) throw DomainError("image of T is not diagonal");
  const Matrix s2 = image_S * image_S;
  const Matrix st = image_S * image_T;
  if (max_abs(st * st * st - s2) > 10 * tol) throw DomainError("images violate (ST)^3 = S^2");
  const Matrix s4 = s2 * s2;
  const Matrix expect = half_integral() ? Matrix(-id) : id;
  if (max_abs(s4 - expect) > 10 * tol)
    throw DomainError(half_integral() ? "metaplectic images violate S^4 = Z" : "images violate S^4 = I");
}

std::vector<Rational> kappa_offsets(const UnitaryAction& action) {
  Matrix off = action.image_T;
  off.diagonal().setZero();
  if (max_abs(off) > 1e-12) throw DomainError("kappa offsets need a diagonal image of T");
  std::vector<Rational> out;
  for (int j = 0; j < action.dimension; ++j) {
    double x = std::arg(action.image_T(j, j)) / kTwoPi;
    if (x < 0) x += 1.0;
    Rational r = Rational::approximate(x, 1000000, 1e-12);
    if (r.num == r.den) r = Rational(0, 1);
    out.push_back(r);
  }
  return out;
}

Matrix evaluate_action(const UnitaryAction& action, const GroupElement& g, Lift lift) {
  return evaluate_action(action, kappa_offsets(action), g, lift);
}

Matrix evaluate_action(const UnitaryAction& action, const std::vector<Rational>& kappa, const GroupElement& g,
                       Lift lift) {
  const Word w = decompose_word(g);
  const int m = action.dimension;
  Matrix u = Matrix::Identity(m, m);
  if (!action.half_integral()) {
    if (w.negate) u = action.image_S * action.image_S;
    for (const auto& t : w.tokens) u = u * (t.gen == Generator::S ? action.image_S : t_power(kappa, t.exponent));
    return u;
  }
  MetaElement acc{GroupElement::identity(), 1};
  const MetaElement s_lift{GroupElement::S(), 1};
  if (w.negate) {
    acc = s_lift * s_lift;
    u = action.image_S * action.image_S;
  }
  for (const auto& t : w.tokens) {
    if (t.gen == Generator::S) {
      acc = acc * s_lift;
      u = u * action.image_S;
    } else {
      acc = acc * MetaElement{GroupElement::T(t.exponent), 1};
      u = u * t_power(kappa, t.exponent);
    }
  }
  const int want = lift == Lift::Principal ? 1 : -1;
  // acc differs from the wanted lift by the central element Z~ = S~^4, whose image is -I
  if (acc.branch != want) u = -u;
  return u;
}

UnitaryAction trivial_action(int two_k) {
  UnitaryAction a;
  a.dimension = 1;
  a.two_k = two_k;
  a.image_T = Matrix::Identity(1, 1);
  a.image_S = Matrix::Identity(1, 1);
  a.label = "trivial";
  if (two_k % 4 != 0) throw DomainError("trivial action needs weight divisible by 2");
  return a;
}

Complex weil_multiplier_T(WeilMultiplier mult) {
  return mult == WeilMultiplier::Eta ? std::polar(1.0, kTwoPi / 24.0) : Complex(1.0);
}

Complex weil_multiplier_S(WeilMultiplier mult) {
  return mult == WeilMultiplier::Eta ? std::polar(1.0, -kPi / 4.0) : Complex(1.0);
}

UnitaryAction weil_action(int m, int two_k, WeilMultiplier mult) {
  if (m < 1) throw DomainError("Weil representation needs index m >= 1");
  if (two_k % 2 == 0) throw DomainError("Weil representation lives in half-integral weight");
  const int n = 2 * m;
  UnitaryAction a;
  a.dimension = n;
  a.two_k = two_k;
  a.image_T = Matrix::Zero(n, n);
  a.image_S = Matrix(n, n);
  const Complex pref = std::polar(1.0 / std::sqrt(static_cast<double>(n)), kPi / 4.0);
  for (int j = 1; j <= n; ++j) {
    a.image_T(j - 1, j - 1) = std::polar(1.0, -kTwoPi * static_cast<double>(mod(j * j, 4 * m)) / (4.0 * m));
    for (int jp = 1; jp <= n; ++jp)
      a.image_S(jp - 1, j - 1) = pref * std::polar(1.0, kTwoPi * static_cast<double>(mod(j * jp, n)) / n);
  }
  a.label = "weil m=" + std::to_string(m) + (mult == WeilMultiplier::Eta ? " (eta multiplier)" : " (theta)");
  return a;
}

InducedAction induced_action_gamma0(int N, int k) {
  if (N < 1) throw DomainError("level must be positive");
  if (k % 2 != 0) throw DomainError("induced action needs even weight");
  // P^1(Z/N): canonical representative = lexicographically least unit multiple
  std::vector<std::int64_t> units;
  for (std::int64_t u = 1; u <= N; ++u)
    if (std::gcd(u, static_cast<std::int64_t>(N)) == 1) units.push_back(u % N);
  auto canon = [&](std::int64_t c, std::int64_t d) {
    std::pair<std::int64_t, std::int64_t> best{N, N};
    for (auto u : units) best = std::min(best, std::make_pair(mod(u * c, N), mod(u * d, N)));
    return best;
  };
  std::vector<std::pair<std::int64_t, std::int64_t>> classes;
  std::map<std::pair<std::int64_t, std::int64_t>, int> index;
  auto add = [&](std::pair<std::int64_t, std::int64_t> p) {
    if (!index.count(p)) {
      index[p] = static_cast<int>(classes.size());
      classes.push_back(p);
    }
  };
  add(canon(0, 1));
  for (std::int64_t c = 0; c < N; ++c)
    for (std::int64_t d = 0; d < N; ++d)
      if (std::gcd(std::gcd(c, d), static_cast<std::int64_t>(N)) == 1) add(canon(c, d));
  const int m = static_cast<int>(classes.size());

  InducedAction out;
  for (const auto& [c0, d0] : classes) {
    if (c0 == 0 && mod(d0, N) == mod(1, N) && out.representatives.empty()) {
      out.representatives.push_back(GroupElement::identity());
      continue;
    }
    std::int64_t c = c0 == 0 ? N : c0, d = d0;
    while (std::gcd(c, d) != 1) d += N;
    std::int64_t x, y;
    ext_gcd(d, c, x, y);  // d x + c y = 1, so (x, -y; c, d) has det 1
    GroupElement g{x, -y, c, d};
    g.validate();
    out.representatives.push_back(g);
  }
  auto perm_of = [&](const GroupElement& g) {
    std::vector<int> p(m);
    for (int j = 0; j < m; ++j) {
      const auto& r = out.representatives[j];
      p[j] = index.at(canon(r.c * g.a + r.d * g.c, r.c * g.b + r.d * g.d));
    }
    return p;
  };
  out.perm_T = perm_of(GroupElement::T());
  out.perm_S = perm_of(GroupElement::S());

  // (rho(g) x)_j = x_{pi(j)}; on a T-cycle j_0 -> j_1 -> ... the vectors with
  // x_{j_r} = lambda^r / sqrt(w) are eigenvectors with eigenvalue lambda.
  Matrix P = Matrix::Zero(m, m);
  std::vector<Rational> kappas;
  std::vector<bool> seen(m, false);
  int col = 0;
  for (int start = 0; start < m; ++start) {
    if (seen[start]) continue;
    std::vector<int> cyc;
    for (int j = start; !seen[j]; j = out.perm_T[j]) {
      seen[j] = true;
      cyc.push_back(j);
    }
    const int w = static_cast<int>(cyc.size());
    for (int r = 0; r < w; ++r) {
      for (int q = 0; q < w; ++q) P(cyc[q], col) = std::polar(1.0 / std::sqrt(static_cast<double>(w)), kTwoPi * r * q / w);
      kappas.push_back(Rational(r, w));
      ++col;
    }
  }
  auto perm_matrix = [&](const std::vector<int>& p) {
    Matrix R = Matrix::Zero(m, m);
    for (int j = 0; j < m; ++j) R(j, p[j]) = 1.0;
    return R;
  };
  out.basis_change = P;
  UnitaryAction& a = out.action;
  a.dimension = m;
  a.two_k = 2 * k;
  a.image_T = P.adjoint() * perm_matrix(out.perm_T) * P;
  a.image_S = P.adjoint() * perm_matrix(out.perm_S) * P;
  // clean rounding off the diagonal
  for (int j = 0; j < m; ++j) {
    for (int q = 0; q < m; ++q)
      if (j != q) a.image_T(j, q) = 0.0;
    a.image_T(j, j) = std::polar(1.0, kTwoPi * kappas[j].value());
  }
  a.label = "gamma0(" + std::to_string(N) + ") induced";
  return out;
}

Matrix induced_permutation(const InducedAction& ind, const GroupElement& g) {
  return ind.basis_change * evaluate_action(ind.action, g) * ind.basis_change.adjoint();
}

}  // namespace vvmf
