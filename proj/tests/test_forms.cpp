#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "vvmf/forms.hpp"

using namespace vvmf;
using testutil::random_sl2;

namespace {

// tau(n) by multiplying out q * prod (1 - q^n)^24 one factor at a time
std::vector<long long> brute_tau(int n_max) {
  std::vector<long long> p(n_max, 0);
  p[0] = 1;
  for (int rep = 0; rep < 24; ++rep)
    for (int n = 1; n < n_max; ++n)
      for (int i = n_max - 1; i >= n; --i) p[i] -= p[i - n];
  std::vector<long long> tau(n_max + 1, 0);
  for (int i = 0; i < n_max; ++i) tau[i + 1] = p[i];
  return tau;
}

// random tau with Im tau and Im g tau both at least h
std::vector<Complex> samples(std::mt19937_64& rng, const GroupElement& g, double h, int count) {
  std::uniform_real_distribution<double> x(-0.5, 0.5), y(h, 1.6);
  std::vector<Complex> out;
  for (int tries = 0; tries < 20000 && static_cast<int>(out.size()) < count; ++tries) {
    const Complex t(x(rng), y(rng));
    if (g.act(t).imag() >= h) out.push_back(t);
  }
  return out;
}

JacobiCoefficients fixture(const std::string& name) { return load_jacobi(std::string(VVMF_FIXTURE_DIR) + "/" + name); }

}  // namespace

TEST_CASE("Ramanujan tau against brute multiplication") {
  const auto f = delta_expansion(60);
  const auto tau = brute_tau(60);
  CHECK(f.coeff(0, 0).is_zero());
  for (int n = 1; n <= 60; ++n) {
    CHECK(f.coeff(0, n).exact);
    CHECK(static_cast<long long>(f.coeff(0, n).re_int) == tau[n]);
  }
  CHECK(f.a(0, 2) == Complex(-24.0));
  CHECK(f.a(0, 3) == Complex(252.0));
  CHECK(f.a(0, 10) == Complex(-115920.0));
}

TEST_CASE("scalar basis second coefficients") {
  const std::pair<int, long long> want[] = {{12, -24}, {16, 216}, {18, -528}, {20, 456}, {22, -288}, {26, -48}};
  for (auto [k, c2] : want) {
    const auto f = scalar_basis(k, 20);
    CHECK(f.weight() == k);
    CHECK(f.a(0, 1) == Complex(1.0));
    CHECK(f.a(0, 2) == Complex(static_cast<double>(c2)));
  }
  CHECK_THROWS_AS(scalar_basis(14, 20), DomainError);
  CHECK_THROWS_AS(scalar_basis(24, 20), DomainError);
}

TEST_CASE("delta at i equals eta(i)^24") {
  // eta(i) = Gamma(1/4) / (2 pi^{3/4})
  const long double eta = std::tgamma(0.25L) / (2.0L * std::pow(3.14159265358979323846264338327950288L, 0.75L));
  const double want = static_cast<double>(std::pow(eta, 24));
  const auto e = evaluate(delta_expansion(40), Complex(0, 1));
  CHECK(std::abs(e.value(0) - want) / want < 1e-13);
  CHECK(e.error_bound < 1e-20);

  // direct eta product at a generic point
  const Complex tau(0.23, 0.71), q = std::exp(kTwoPi * kI * tau);
  Complex prod = 1.0, qn = 1.0;
  for (int n = 1; n < 400; ++n) {
    qn *= q;
    prod *= 1.0 - qn;
  }
  const Complex brute = q * std::pow(prod, 24);
  CHECK(std::abs(evaluate(delta_expansion(80), tau).value(0) - brute) / std::abs(brute) < 1e-12);
}

TEST_CASE("tail bound covers the truncation") {
  const auto full = delta_expansion(200), cut = delta_expansion(12);
  for (double v : {0.3, 0.6, 1.0}) {
    const Complex tau(0.1, v);
    const auto e = evaluate(cut, tau);
    CHECK(std::abs(e.value(0) - evaluate(full, tau).value(0)) <= e.error_bound);
  }
  CHECK_THROWS_AS(evaluate(full, Complex(0.0, 0.01)), DomainError);
}

TEST_CASE("periodicity and modularity of the scalar basis") {
  std::mt19937_64 rng(31);
  for (int k : {12, 16, 26}) {
    const auto f = scalar_basis(k, 250);
    CHECK(slash_residual(f, GroupElement::T(), samples(rng, GroupElement::T(), 0.3, 5)) < 1e-12);
    for (int i = 0; i < 20; ++i) {
      const GroupElement g = random_sl2(rng, 6);
      const auto t = samples(rng, g, 0.25, 2);
      if (t.empty()) continue;
      CHECK(slash_residual(f, g, t) < 1e-8);
    }
  }
}

TEST_CASE("Delta(2 tau) induced up from Gamma_0(2)") {
  const InducedAction ind = induced_action_gamma0(2, 12);
  REQUIRE(ind.action.dimension == 3);
  const auto d = delta_expansion(200);
  // coset functions: x_1 = Delta(2 tau), x_2 = 2^-12 Delta(tau/2), x_3 = 2^-12 Delta((tau+1)/2)
  auto x = [&](Complex tau) {
    Vector v(3);
    for (int j = 0; j < 3; ++j) {
      const GroupElement& r = ind.representatives[j];
      v(j) = std::pow(r.j(tau), -12) * evaluate(d, 2.0 * r.act(tau)).value(0);
    }
    return v;
  };
  const Complex t0(0.17, 0.8);
  const Vector x0 = x(t0);
  CHECK(std::abs(x0(0) - evaluate(d, 2.0 * t0).value(0)) < 1e-14 * std::abs(x0(0)));
  CHECK(std::abs(x0(1) - std::pow(2.0, -12) * evaluate(d, t0 / 2.0).value(0)) < 1e-12 * std::abs(x0(1)));
  CHECK(std::abs(x0(2) - std::pow(2.0, -12) * evaluate(d, (t0 + 1.0) / 2.0).value(0)) < 1e-12 * std::abs(x0(2)));

  // T-diagonal components y = P^* x, expanded by hand in powers q^{h/2}
  const Matrix& P = ind.basis_change;
  const auto kap = kappa_offsets(ind.action);
  std::vector<std::vector<Coefficient>> comps(3);
  for (int c = 0; c < 3; ++c) {
    const int parity = 2 * kap[c].num / kap[c].den;
    for (int h = 0; h <= 180; ++h) {
      Complex y = 0.0;
      if (h % 4 == 0) y += std::conj(P(0, c)) * d.a(0, h / 4);
      y += std::conj(P(1, c)) * std::pow(2.0, -12) * d.a(0, h);
      y += std::conj(P(2, c)) * std::pow(2.0, -12) * d.a(0, h) * (h % 2 == 0 ? 1.0 : -1.0);
      if (h % 2 != parity) {
        CHECK(std::abs(y) < 1e-12 * (1.0 + std::abs(d.a(0, h))));
        continue;
      }
      comps[c].push_back(Coefficient::real_or_complex(y));
    }
  }
  const FourierExpansion Y(ind.action, comps, "Delta(2tau) induced");
  const Vector y0 = evaluate(Y, t0).value;
  CHECK((y0 - P.adjoint() * x0).norm() < 1e-12 * y0.norm());

  std::mt19937_64 rng(32);
  int tested = 0;
  for (int i = 0; i < 400 && tested < 20; ++i) {
    const GroupElement g = random_sl2(rng, 5);
    const auto t = samples(rng, g, 0.3, 2);
    if (t.empty()) continue;
    ++tested;
    CHECK(slash_residual(Y, g, t) < 1e-8);
  }
  CHECK(tested >= 10);
}

TEST_CASE("theta decomposition of the fixtures") {
  for (const char* name : {"phi10_1.jcf", "phi14_1.jcf"}) {
    const JacobiCoefficients J = fixture(name);
    const FourierExpansion F = theta_decompose(J);
    CHECK(F.dimension() == 2);
    CHECK(F.two_k() == 2 * J.k - 1);
    CHECK(kappa_offsets(F.action())[0] == Rational(3, 4));
    CHECK(kappa_offsets(F.action())[1] == Rational(0, 1));
    CHECK(jacobi_reconstruct(F, J.k) == J);
    // vector-valued modularity for the combined Weil action
    std::mt19937_64 rng(33);
    CHECK(slash_residual(F, GroupElement::S(), samples(rng, GroupElement::S(), 0.8, 6)) < 1e-9);
    CHECK(slash_residual(F, GroupElement::T(), samples(rng, GroupElement::T(), 0.8, 6)) < 1e-12);
    for (int i = 0; i < 10; ++i) {
      const GroupElement g = random_sl2(rng, 3);
      const auto t = samples(rng, g, 0.8, 2);
      if (!t.empty()) CHECK(slash_residual(F, g, t) < 1e-8);
    }
  }
  const auto F = theta_decompose(fixture("phi10_1.jcf"));
  // c(3) = 1, c(4) = -2, c(7) = -16, c(8) = 36
  CHECK(F.a(0, 0) == Complex(1.0));
  CHECK(F.a(1, 1) == Complex(-2.0));
  CHECK(F.a(0, 1) == Complex(-16.0));
  CHECK(F.a(1, 2) == Complex(36.0));
}

TEST_CASE("theta roundtrip on zero and random tables") {
  std::mt19937_64 rng(34);
  for (int m : {1, 2, 3}) {
    for (int trial = 0; trial < 4; ++trial) {
      JacobiCoefficients J;
      J.k = 10 + 2 * trial;
      J.m = m;
      J.l_max = 3 + trial;
      std::map<std::pair<std::int64_t, std::int64_t>, Coefficient> by_class;
      std::uniform_int_distribution<long long> u(-1000000, 1000000);
      for (std::int64_t l = 1; l <= J.l_max; ++l)
        for (std::int64_t r = -2 * m * l; r <= 2 * m * l; ++r) {
          if (r * r >= 4 * m * l) continue;
          const std::pair<std::int64_t, std::int64_t> key{4 * m * l - r * r, ((r % (2 * m)) + 2 * m) % (2 * m)};
          if (!by_class.count(key)) by_class[key] = trial == 0 ? Coefficient::integer(0) : Coefficient::integer(u(rng), u(rng));
          J.table[{l, r}] = by_class[key];
        }
      const auto F = theta_decompose(J);
      CHECK(F.dimension() == 2 * m);
      CHECK(jacobi_reconstruct(F, J.k) == J);
      if (trial == 0) CHECK(F.is_zero());
    }
  }
}

TEST_CASE("Jacobi validation") {
  JacobiCoefficients J = fixture("phi10_1.jcf");
  J.validate();
  auto broken = J;
  broken.table.erase({3, 2});
  CHECK_THROWS_WITH_AS(broken.validate(), doctest::Contains("(3, 2)"), DomainError);
  broken = J;
  broken.table[{2, 1}] = Coefficient::integer(5);
  CHECK_THROWS_AS(broken.validate(), DomainError);
  broken = J;
  broken.table[{1, 2}] = Coefficient::integer(0);
  CHECK_THROWS_AS(broken.validate(), DomainError);
}

TEST_CASE("plus-space map") {
  for (const char* name : {"phi10_1.jcf", "phi14_1.jcf"}) {
    const auto F = theta_decompose(fixture(name));
    const PlusSpaceForm P = plus_space_map(F);
    CHECK(P.two_k == F.two_k());
    for (std::size_t n = 0; n < P.c.size(); ++n) {
      if (n % 4 == 1 || n % 4 == 2) CHECK(P.c[n].is_zero());
      if (n % 4 == 3) CHECK(P.c[n] == F.coeff(0, static_cast<int>(n / 4)));
      if (n % 4 == 0) CHECK(P.c[n] == F.coeff(1, static_cast<int>(n / 4)));
    }
    const auto back = plus_space_components(P);
    CHECK(back.coefficients() == F.coefficients());
  }
  PlusSpaceForm bad = plus_space_map(theta_decompose(fixture("phi10_1.jcf")));
  bad.c[5] = Coefficient::integer(1);
  CHECK_THROWS_AS(plus_space_components(bad), DomainError);
  CHECK_THROWS_AS(plus_space_map(delta_expansion(10)), DomainError);
}

TEST_CASE("coefficient file roundtrip") {
  const std::vector<FourierExpansion> forms = {
      delta_expansion(30), theta_decompose(fixture("phi14_1.jcf")),
      scalar_basis(16, 15).scaled(Complex(1.0 / 3.0, kPi)),
      FourierExpansion(induced_action_gamma0(3, 12).action, std::vector<std::vector<Coefficient>>(4), "zero")};
  for (const auto& f : forms) {
    std::stringstream a;
    write_expansion(a, f);
    const auto g = read_expansion(a);
    CHECK(g.coefficients() == f.coefficients());
    CHECK(g.two_k() == f.two_k());
    CHECK(g.label() == f.label());
    CHECK((g.action().image_S - f.action().image_S).cwiseAbs().maxCoeff() == 0.0);
    std::stringstream b;
    write_expansion(b, g);
    CHECK(a.str() == b.str());
  }
  std::stringstream j;
  write_jacobi(j, fixture("phi10_1.jcf"));
  CHECK(read_jacobi(j) == fixture("phi10_1.jcf"));
}

TEST_CASE("coefficient file rejection") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_expansion(is);
  };
  const std::string head = "# k2 = 24\n# m = 1\n";
  CHECK(parse(head + "1 1 1 0\n1 2 -24 0\n").a(0, 2) == Complex(-24.0));
  CHECK_THROWS_WITH_AS(parse(head + "1 1 1 0\n1 0 5 0\n"), doctest::Contains("line 4"), ParseError);
  CHECK_THROWS_WITH_AS(parse(head + "1 1 1\n"), doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_WITH_AS(parse(head + "1 1 1 0\n2 1 1 0\n"), doctest::Contains("line 4"), ParseError);
  CHECK_THROWS_WITH_AS(parse(head + "1 1 x 0\n"), doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_WITH_AS(parse(head + "1 1 1 0\n1 1 2 0\n"), doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_AS(parse(head + "1 -1 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse("1 1 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse(head + "# kappa 1 1/2\n1 1 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse(head + "1 1 nan 0\n"), ParseError);
  CHECK_THROWS_AS(load_expansion("/nonexistent/file.coef"), IoError);
  std::istringstream jac("# k = 10\n# m = 1\n# lmax = 2\n1 0 -2 0\n1 1 1 0\n1 -1 1 0\n");
  CHECK_THROWS_WITH_AS(read_jacobi(jac), doctest::Contains("missing"), ParseError);
}

TEST_CASE("format_double") {
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-0.5) == "-0.5");
  CHECK(format_double(1e300) == "1e+300");
  CHECK(format_double(0.1) == "0.1");
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::stod(format_double(x)) == x);
  }
}
