#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "vvmf/modular_group.hpp"

using namespace vvmf;
using testutil::random_sl2;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Complex power(Complex z, double k) { return std::exp(k * std::log(z)); }

}  // namespace

TEST_CASE("word decomposition examples") {
  CHECK(decompose_word(GroupElement::identity()).tokens.empty());
  CHECK_FALSE(decompose_word(GroupElement::identity()).negate);
  const Word s = decompose_word(GroupElement::S());
  CHECK(s.to_string() == "S");
  const GroupElement g{1, 0, 1, 1};
  const Word w = decompose_word(g);
  const GroupElement p = w.product();
  CHECK(p == g);
  CHECK(decompose_word(GroupElement::identity().negated()).negate);
  CHECK_THROWS_AS(decompose_word(GroupElement{2, 0, 0, 1}), DomainError);
}

TEST_CASE("word roundtrip on random matrices") {
  std::mt19937_64 rng(21);
  int longest = 0;
  for (int i = 0; i < 1000; ++i) {
    const GroupElement g = random_sl2(rng, 10000);
    const Word w = decompose_word(g);
    REQUIRE(w.product() == g);
    longest = std::max(longest, static_cast<int>(w.tokens.size()));
  }
  // Euclid on entries below 10^4 needs at most ~20 division steps
  CHECK(longest <= 2 * 21 + 1);
}

TEST_CASE("metaplectic products") {
  const MetaElement s{GroupElement::S(), 1};
  const MetaElement s2 = s * s;
  CHECK(s2.base == GroupElement::identity().negated());
  CHECK(s2.branch == 1);
  const MetaElement s4 = s2 * s2;
  CHECK(s4.base == GroupElement::identity());
  CHECK(s4.branch == -1);
  const MetaElement t{GroupElement::T(), 1};
  const MetaElement st = s * t;
  CHECK(((st * st) * st).base == s2.base);
  CHECK(((st * st) * st).branch == s2.branch);
}

TEST_CASE("trivial action") {
  const UnitaryAction a = trivial_action(24);
  a.validate();
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(evaluate_action(a, random_sl2(rng, 50))(0, 0) - 1.0) < 1e-15);
  CHECK(kappa_offsets(a)[0].is_zero());
}

TEST_CASE("Weil representation m = 1") {
  const UnitaryAction a = weil_action(1, 19);
  a.validate();
  CHECK(a.dimension == 2);
  CHECK(std::abs(a.image_T(0, 0) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(a.image_T(1, 1) - 1.0) < 1e-15);
  const Matrix s = evaluate_action(a, GroupElement::S());
  const Complex pref = std::polar(1.0 / std::sqrt(2.0), kPi / 4);
  for (int j = 1; j <= 2; ++j)
    for (int jp = 1; jp <= 2; ++jp) CHECK(std::abs(s(jp - 1, j - 1) - pref * std::pow(-1.0, j * jp)) < 1e-15);
  const Matrix mi = evaluate_action(a, GroupElement::identity().negated());
  CHECK(std::abs(mi(0, 0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(mi(1, 0)) < 1e-15);
  CHECK(std::abs(mi(1, 1) - Complex(0, 1)) < 1e-15);
  const auto kappa = kappa_offsets(a);
  CHECK(kappa[0] == Rational(3, 4));
  CHECK(kappa[1] == Rational(0, 1));
  // the other lift differs by the central element
  CHECK(max_abs(evaluate_action(a, GroupElement::S(), Lift::Negated) + s) < 1e-15);
}

TEST_CASE("Weil representation unitarity and offsets") {
  for (int m = 1; m <= 3; ++m) {
    const UnitaryAction a = weil_action(m, 2 * 10 - 1);
    const Matrix id = Matrix::Identity(2 * m, 2 * m);
    CHECK(max_abs(a.image_S.adjoint() * a.image_S - id) < 1e-12);
    CHECK(max_abs(a.image_T.adjoint() * a.image_T - id) < 1e-12);
    const auto kappa = kappa_offsets(a);
    for (int j = 0; j < 2 * m; ++j) CHECK(std::abs(std::polar(1.0, kTwoPi * kappa[j].value()) - a.image_T(j, j)) < 1e-12);
  }
  CHECK_THROWS_AS(weil_action(1, 20), DomainError);
}

TEST_CASE("automorphy cocycle for integral and half-integral weight") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ur(-2.0, 2.0), ui(0.3, 2.0);
  for (const UnitaryAction& a : {weil_action(1, 19), weil_action(2, 13), induced_action_gamma0(3, 12).action}) {
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const GroupElement g1 = random_sl2(rng, 30), g2 = random_sl2(rng, 30);
      const Complex tau(ur(rng), ui(rng));
      const double k = a.weight();
      const Matrix lhs = evaluate_action(a, g1 * g2) * power((g1 * g2).j(tau), k);
      const Matrix rhs = evaluate_action(a, g1) * evaluate_action(a, g2) * power(g1.j(g2.act(tau)), k) * power(g2.j(tau), k);
      worst = std::max(worst, max_abs(lhs - rhs) / max_abs(lhs));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("induced action of Gamma0(N)") {
  const InducedAction one = induced_action_gamma0(1, 12);
  CHECK(one.action.dimension == 1);
  CHECK(std::abs(one.action.image_S(0, 0) - 1.0) < 1e-15);

  const InducedAction two = induced_action_gamma0(2, 12);
  CHECK(two.action.dimension == 3);
  CHECK(two.representatives.front() == GroupElement::identity());
  two.action.validate();
  const auto kappa = kappa_offsets(two.action);
  int zeros = 0, halves = 0;
  for (const auto& r : kappa) {
    zeros += r == Rational(0, 1);
    halves += r == Rational(1, 2);
  }
  CHECK(zeros == 2);
  CHECK(halves == 1);

  // index N prod (1 + 1/p)
  CHECK(induced_action_gamma0(6, 12).action.dimension == 12);
  CHECK(induced_action_gamma0(4, 12).action.dimension == 6);

  for (int N : {2, 3, 5, 6}) {
    const InducedAction ind = induced_action_gamma0(N, 12);
    const Matrix ps = induced_permutation(ind, GroupElement::S());
    for (int r = 0; r < ps.rows(); ++r) {
      int nz_row = 0, nz_col = 0;
      for (int c = 0; c < ps.cols(); ++c) {
        nz_row += std::abs(ps(r, c)) > 1e-9;
        nz_col += std::abs(ps(c, r)) > 1e-9;
      }
      CHECK(nz_row == 1);
      CHECK(nz_col == 1);
    }
    std::mt19937_64 rng(24 + N);
    int found = 0;
    while (found < 10) {
      const GroupElement g = random_sl2(rng, 40);
      if (g.c % N != 0) continue;
      ++found;
      // Gamma_0(N) fixes the identity coset
      const Matrix p = induced_permutation(ind, g);
      CHECK(std::abs(p(0, 0) - 1.0) < 1e-12);
    }
    found = 0;
    while (found < 10) {
      const GroupElement g = random_sl2(rng, 200);
      if (g.c % N != 0 || g.b % N != 0 || (g.a - 1) % N != 0) continue;
      ++found;
      // the principal congruence subgroup is normal, so it acts trivially
      const Matrix u = evaluate_action(ind.action, g);
      CHECK(max_abs(u - Matrix::Identity(u.rows(), u.cols())) < 1e-12);
    }
  }
  // T lies in Gamma_0(2) but moves the cosets of S and ST
  const Matrix pt = induced_permutation(two, GroupElement::T());
  CHECK(std::abs(pt(0, 0) - 1.0) < 1e-12);
  CHECK(max_abs(pt - Matrix::Identity(3, 3)) > 0.5);
}

TEST_CASE("kappa offsets reject a non-diagonal T") {
  UnitaryAction a = trivial_action(12);
  a.dimension = 2;
  a.image_T = Matrix::Zero(2, 2);
  a.image_T(0, 1) = a.image_T(1, 0) = 1.0;
  a.image_S = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(kappa_offsets(a), DomainError);
  CHECK_THROWS_AS(a.validate(), DomainError);
}
