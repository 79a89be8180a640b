#include "vvmf/forms.hpp"

#include <algorithm>
#include <cmath>

namespace vvmf {
namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

// representative of j mod 2m in (-m, m]
std::int64_t minimal_rep(std::int64_t j, std::int64_t m) {
  const std::int64_t r = mod(j, 2 * m);
  return r > m ? r - 2 * m : r;
}

std::int64_t rho(std::int64_t j, std::int64_t m) { return mod(-j * j, 4 * m); }

std::int64_t isqrt_below(std::int64_t x) {
  // largest r >= 0 with r^2 < x, x >= 1
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r >= x) --r;
  while ((r + 1) * (r + 1) < x) ++r;
  return r;
}

}  // namespace

void JacobiCoefficients::validate() const {
  if (m < 1 || l_max < 1) throw DomainError("Jacobi table needs m >= 1 and l_max >= 1");
  std::map<std::pair<std::int64_t, std::int64_t>, std::pair<std::pair<std::int64_t, std::int64_t>, Coefficient>> seen;
  for (std::int64_t l = 1; l <= l_max; ++l) {
    const std::int64_t rmax = isqrt_below(4 * m * l);
    for (std::int64_t r = -rmax; r <= rmax; ++r) {
      auto it = table.find({l, r});
      if (it == table.end())
        throw DomainError("Jacobi table incomplete: missing (l, r) = (" + std::to_string(l) + ", " + std::to_string(r) + ")");
      const std::pair<std::int64_t, std::int64_t> key{4 * m * l - r * r, mod(r, 2 * m)};
      auto [pos, fresh] = seen.emplace(key, std::make_pair(std::make_pair(l, r), it->second));
      if (!fresh && !(pos->second.second == it->second))
        throw DomainError("Jacobi coefficients not invariant: a(" + std::to_string(l) + ", " + std::to_string(r) +
                          ") differs from a(" + std::to_string(pos->second.first.first) + ", " +
                          std::to_string(pos->second.first.second) + ")");
    }
  }
  for (const auto& [lr, c] : table) {
    const auto [l, r] = lr;
    if (l < 1 || l > l_max || r * r >= 4 * m * l)
      throw DomainError("Jacobi table has an entry outside its index set: (" + std::to_string(l) + ", " +
                        std::to_string(r) + ")");
  }
}

FourierExpansion theta_decompose(const JacobiCoefficients& J) {
  J.validate();
  const std::int64_t m = J.m;
  std::vector<std::vector<Coefficient>> comps(2 * m);
  for (std::int64_t j = 1; j <= 2 * m; ++j) {
    const std::int64_t r = minimal_rep(j, m), rh = rho(j, m);
    const std::int64_t top = (4 * m * J.l_max - r * r - rh) / (4 * m);
    auto& c = comps[j - 1];
    for (std::int64_t n = 0; n <= top; ++n) {
      const std::int64_t D = 4 * m * n + rh;
      if (D <= 0) {
        c.push_back(Coefficient::integer(0));
        continue;
      }
      c.push_back(J.table.at({(D + r * r) / (4 * m), r}));
    }
  }
  return FourierExpansion(weil_action(static_cast<int>(m), 2 * J.k - 1), std::move(comps),
                          "theta decomposition k=" + std::to_string(J.k) + " m=" + std::to_string(m));
}

JacobiCoefficients jacobi_reconstruct(const FourierExpansion& F, int k) {
  if (F.dimension() % 2 != 0) throw DomainError("theta components come in 2m-tuples");
  if (F.two_k() != 2 * k - 1) throw DomainError("component weight is not k - 1/2");
  const std::int64_t m = F.dimension() / 2;
  std::int64_t l_max = -1;
  for (std::int64_t j = 1; j <= 2 * m; ++j) {
    const std::int64_t r = minimal_rep(j, m);
    const std::int64_t l = (4 * m * F.n_max(static_cast<int>(j - 1)) + rho(j, m) + r * r) / (4 * m);
    l_max = l_max < 0 ? l : std::min(l_max, l);
  }
  if (l_max < 1) throw DomainError("components too short to reconstruct any Jacobi coefficient");
  JacobiCoefficients J;
  J.k = k;
  J.m = static_cast<int>(m);
  J.l_max = static_cast<int>(l_max);
  for (std::int64_t l = 1; l <= l_max; ++l) {
    const std::int64_t rmax = isqrt_below(4 * m * l);
    for (std::int64_t r = -rmax; r <= rmax; ++r) {
      const std::int64_t j = mod(r - 1, 2 * m) + 1;
      const std::int64_t n = (4 * m * l - r * r - rho(j, m)) / (4 * m);
      J.table[{l, r}] = F.coeff(static_cast<int>(j - 1), static_cast<int>(n));
    }
  }
  return J;
}

PlusSpaceForm plus_space_map(const FourierExpansion& F) {
  if (F.dimension() != 2) throw DomainError("plus-space map is defined for m = 1 only");
  std::int64_t cap = -1;
  for (int j = 1; j <= 2; ++j) {
    const std::int64_t c = 4 * F.n_max(j - 1) + rho(j, 1) + 3;
    cap = cap < 0 ? c : std::min(cap, c);
  }
  PlusSpaceForm P;
  P.two_k = F.two_k();
  P.c.assign(cap + 1, Coefficient::integer(0));
  for (int j = 1; j <= 2; ++j)
    for (int n = 0; n <= F.n_max(j - 1); ++n) {
      const std::int64_t N = 4 * n + rho(j, 1);
      if (N <= cap) P.c[N] = P.c[N] + F.coeff(j - 1, n);
    }
  return P;
}

FourierExpansion plus_space_components(const PlusSpaceForm& P) {
  if (P.c.empty()) throw DomainError("empty plus-space form");
  const std::int64_t cap = static_cast<std::int64_t>(P.c.size()) - 1;
  for (std::int64_t N = 0; N <= cap; ++N)
    if (mod(N, 4) == 1 || mod(N, 4) == 2)
      if (!P.c[N].is_zero()) throw DomainError("coefficient outside the plus space at n = " + std::to_string(N));
  std::vector<std::vector<Coefficient>> comps(2);
  for (int j = 1; j <= 2; ++j)
    for (std::int64_t N = rho(j, 1); N <= cap; N += 4) comps[j - 1].push_back(P.c[N]);
  return FourierExpansion(weil_action(1, P.two_k), std::move(comps), "plus-space components");
}

}  // namespace vvmf
