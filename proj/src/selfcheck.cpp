// Invariant suites run by `vvmf selfcheck`.  They restate properties the unit
// tests cover in depth, at a size that finishes in a few seconds.

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "vvmf/cli.hpp"
#include "vvmf/experiments.hpp"
#include "vvmf/special_functions.hpp"

namespace vvmf::cli {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::string& what) {
    ++r_.assertions;
    if (!ok) {
      ++r_.failures;
      r_.messages.push_back(what);
    }
  }
  // runs body, turning an exception into one failed assertion
  template <class F>
  SuiteResult run(F&& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    return r_;
  }

 private:
  SuiteResult r_;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

std::string at(Complex z) {
  std::ostringstream os;
  os << "at " << format_double(z.real()) << (z.imag() < 0 ? "" : "+") << format_double(z.imag()) << "i";
  return os.str();
}

GroupElement random_element(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> u(-bound, bound);
  for (;;) {
    const std::int64_t c = u(rng), d = u(rng);
    if (std::gcd(c, d) != 1) continue;
    for (std::int64_t a = -bound; a <= bound; ++a)
      for (std::int64_t b = -bound; b <= bound; ++b)
        if (a * d - b * c == 1) return {a, b, c, d};
  }
}

}  // namespace

std::vector<SuiteResult> run_selfcheck(const std::string& fixture_dir, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-6.0, 6.0), im(-4.0, 4.0);
  std::vector<SuiteResult> out;

  out.push_back(Suite("special_functions").run([&](Suite& s) {
    for (int t = 0; t < 20; ++t) {
      const Complex z(re(rng), im(rng));
      if (std::abs(z - std::round(z.real())) < 0.05) continue;
      s.check(rel(vvmf::gamma(z + 1.0), z * vvmf::gamma(z)) < 1e-12, "Gamma recurrence " + at(z));
      s.check(rel(vvmf::gamma(z) * vvmf::gamma(1.0 - z), kPi / std::sin(kPi * z)) < 1e-11, "Gamma reflection " + at(z));
      for (int n = 1; n <= 3; ++n) {
        const double sign = n % 2 ? 1.0 : -1.0;
        const Complex step = sign * std::tgamma(n + 1.0) / std::pow(z, n + 1);
        s.check(rel(polygamma(n, z + 1.0), polygamma(n, z) - step) < 1e-10, "polygamma recurrence " + at(z));
      }
    }
    for (double k : {12.0, 9.5}) {
      const Complex sv(k / 2 - 0.3, 0.7);
      const Complex beta = vvmf::gamma(sv) * vvmf::gamma(k - sv) / vvmf::gamma(k);
      s.check(rel(kummer_reg(0, sv, k, 0.0), beta) < 1e-10, "1f1 at z = 0 is the Beta function");
    }
  }));

  out.push_back(Suite("modular_group").run([&](Suite& s) {
    for (int t = 0; t < 20; ++t) {
      const GroupElement g = random_element(rng, 30);
      const Word w = decompose_word(g);
      s.check(w.product() == g, "word reassembles " + w.to_string());
    }
    const UnitaryAction ind = induced_action_gamma0(3, 12).action;
    for (int t = 0; t < 10; ++t) {
      const GroupElement g = random_element(rng, 12), h = random_element(rng, 12);
      const Matrix lhs = evaluate_action(ind, g * h), rhs = evaluate_action(ind, g) * evaluate_action(ind, h);
      s.check((lhs - rhs).norm() < 1e-9, "induced action is a homomorphism");
    }
    for (const UnitaryAction& a : {weil_action(1, 19), weil_action(2, 13), ind}) {
      bool ok = true;
      try {
        a.validate();
      } catch (const Error&) {
        ok = false;
      }
      s.check(ok, "action relations for " + a.label);
    }
  }));

  const FourierExpansion delta = delta_expansion(60);
  out.push_back(Suite("forms").run([&](Suite& s) {
    std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.3, 1.5);
    for (int t = 0; t < 10; ++t) {
      const GroupElement g = random_element(rng, 4);
      std::vector<Complex> taus;
      for (int p = 0; p < 200 && taus.size() < 4; ++p) {
        const Complex tau(u(rng), v(rng));
        if (g.act(tau).imag() >= 0.3) taus.push_back(tau);
      }
      if (taus.empty()) continue;
      s.check(slash_residual(delta, g, taus) < 1e-9, "Delta is invariant under slash");
    }
  }));

  out.push_back(Suite("lfunction").run([&](Suite& s) {
    for (double sg : {4.0, 6.0, 8.0})
      for (double t : {-2.0, 0.0, 2.0})
        s.check(functional_equation_residual(delta, {sg, t}) < 1e-9, "functional equation " + at({sg, t}));
    const Complex L6 = completed_L(delta, 6.0).value(0), d6 = completed_L(delta, 6.0, 1).value(0);
    s.check(std::abs(d6) < 1e-9 * std::abs(L6), "L*'(Delta, 6) vanishes");
  }));

  out.push_back(Suite("kernel").run([&](Suite& s) {
    KernelParams p;
    p.action = trivial_action(24);
    p.s = 5.7;
    const Complex f = kernel_coeff(p, 0, 1, 0).value, n = kernel_coeff_numeric(p, 0, 1, 0).value;
    s.check(rel(f, n) < 1e-6, "formula against numerical Fourier integral");
  }));

  out.push_back(Suite("petersson").run([&](Suite& s) {
    const FourierExpansion d = delta_expansion(40);
    const InnerProductValue a = inner_product(d, d), b = inner_product(d, d, QuadratureSpec{}.refined());
    s.check(std::abs(a.value - b.value) < 1e-10 * std::abs(a.value), "stable under resolution doubling");
    s.check(rel(a.value, 1.03536205680e-6) < 1e-9, "(Delta, Delta) matches the tabulated value");
    const Complex alpha(2.0, 1.0);
    s.check(rel(inner_product(d.scaled(alpha), d).value, alpha * a.value) < 1e-12, "linear in the first slot");
  }));

  out.push_back(Suite("experiments").run([&](Suite& s) {
    const BasisData B = scalar_basis_data(12);
    s.check(verify_identity(B, 0, 5.7, 0).rel_residual < 1e-4, "pairing identity, k = 12, s = 5.7");
    const BasisData C = make_basis({B.forms[0].scaled(Complex(0.0, 2.0))});
    s.check(rel(averaged_derivative(C, 0, 1, 5.8), averaged_derivative(B, 0, 1, 5.8)) < 1e-12, "D_1 is scale invariant");
    s.check(scan_strip(B, 0, 1, 0.0, 0.05, 40).flagged.empty(), "no zero flags on a short scan");
  }));

  out.push_back(Suite("jacobi").run([&](Suite& s) {
    const JacobiCoefficients J = load_jacobi(fixture_dir + "/phi10_1.jcf");
    const FourierExpansion F = theta_decompose(J);
    s.check(jacobi_reconstruct(F, J.k) == J, "theta decomposition round trip");
    const PlusSpaceForm plus = plus_space_map(F);
    bool support = true;
    for (std::size_t N = 0; N < plus.c.size(); ++N)
      if (N % 4 != 0 && N % 4 != 3 && !plus.c[N].is_zero()) support = false;
    s.check(support, "plus-space support on N = 0, 3 mod 4");
    for (Complex sv : {Complex(10.0, 1.0), Complex(12.5, -3.0)})
      for (int j : {1, 2}) {
        const Complex lhs = std::pow(4.0, sv) * plus_partial_L(plus, j, sv), rhs = partial_L(F, j - 1, sv);
        s.check(rel(lhs, rhs) < 1e-10, "plus-space partial L scaling " + at(sv));
      }
  }));
  return out;
}

}  // namespace vvmf::cli
