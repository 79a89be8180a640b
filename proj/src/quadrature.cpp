#include "vvmf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace vvmf {
namespace {

// Kronrod abscissae (descending), Kronrod and Gauss weights, from QUADPACK qk15.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  Interval iv;
  Jet kronrod;
  Jet err;   // |K - G| scaled per QUADPACK, moduli stored in the real part
  Jet absint;
  double badness = 0.0;
};

PanelResult gk15(const JetIntegrand& f, Interval iv, int order) {
  const double c = 0.5 * (iv.a + iv.b);
  const double h = 0.5 * (iv.b - iv.a);
  Jet fc = f(c);
  Jet resk = fc * wgk[7];
  Jet resg = fc * wg[3];
  Jet resabs(order);
  for (int p = 0; p <= order; ++p) resabs[p] = std::abs(fc[p]) * wgk[7];
  std::array<Jet, 15> vals;
  vals[7] = fc;
  for (int q = 0; q < 7; ++q) {
    const double dx = h * xgk[q];
    Jet f1 = f(c - dx);
    Jet f2 = f(c + dx);
    vals[q] = f1;
    vals[14 - q] = f2;
    resk += (f1 + f2) * wgk[q];
    if (q % 2 == 1) resg += (f1 + f2) * wg[q / 2];
    for (int p = 0; p <= order; ++p) resabs[p] += (std::abs(f1[p]) + std::abs(f2[p])) * wgk[q];
  }
  PanelResult r;
  r.iv = iv;
  r.kronrod = resk * h;
  r.err = Jet(order);
  r.absint = resabs * std::abs(h);
  for (int p = 0; p <= order; ++p) {
    const Complex mean = resk[p] * 0.5;
    double asc = 0.0;
    for (int q = 0; q < 15; ++q) {
      const double wq = q == 7 ? wgk[7] : wgk[q < 7 ? q : 14 - q];
      asc += wq * std::abs(vals[q][p] - mean);
    }
    asc *= std::abs(h);
    double e = std::abs((resk[p] - resg[p]) * h);
    if (asc != 0.0 && e != 0.0) e = asc * std::min(1.0, std::pow(200.0 * e / asc, 1.5));
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * r.absint[p].real();
    r.err[p] = std::max(e, floor);
  }
  return r;
}

}  // namespace

void kronrod_nodes(double a, double b, double* x, double* w) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int q = 0; q < 7; ++q) {
    x[q] = c - h * xgk[q];
    x[14 - q] = c + h * xgk[q];
    w[q] = w[14 - q] = h * wgk[q];
  }
  x[7] = c;
  w[7] = h * wgk[7];
}

AdaptiveResult integrate_adaptive(const JetIntegrand& f, double a, double b, int order,
                                  const AdaptiveOptions& opts, std::vector<Interval>* accepted) {
  std::vector<PanelResult> panels;
  panels.push_back(gk15(f, {a, b}, order));
  const double eps = std::numeric_limits<double>::epsilon();
  AdaptiveResult out;
  for (;;) {
    Jet total(order), err(order), absint(order);
    for (const auto& pr : panels) {
      total += pr.kronrod;
      err += pr.err;
      absint += pr.absint;
    }
    // target per component; a panel's badness is its worst err/target ratio
    std::array<double, Jet::kMaxOrder + 1> target{};
    bool ok = true;
    for (int p = 0; p <= order; ++p) {
      target[p] = std::max({opts.abs_tol, opts.rel_tol * std::abs(total[p]),
                            100.0 * eps * absint[p].real(), std::numeric_limits<double>::min()});
      if (err[p].real() > target[p]) ok = false;
    }
    out.value = total;
    out.error = err;
    out.panels = static_cast<int>(panels.size());
    out.converged = ok;
    if (ok || static_cast<int>(panels.size()) >= opts.max_panels) break;
    std::size_t worst = 0;
    double worst_bad = -1.0;
    for (std::size_t q = 0; q < panels.size(); ++q) {
      double bad = 0.0;
      for (int p = 0; p <= order; ++p) bad = std::max(bad, panels[q].err[p].real() / target[p]);
      if (bad > worst_bad) {
        worst_bad = bad;
        worst = q;
      }
    }
    const Interval iv = panels[worst].iv;
    const double mid = 0.5 * (iv.a + iv.b);
    if (!(mid > iv.a && mid < iv.b)) break;  // interval exhausted at double resolution
    panels[worst] = gk15(f, {iv.a, mid}, order);
    panels.push_back(gk15(f, {mid, iv.b}, order));
  }
  if (accepted) {
    std::sort(panels.begin(), panels.end(),
              [](const PanelResult& x, const PanelResult& y) { return x.iv.a < y.iv.a; });
    for (const auto& pr : panels) accepted->push_back(pr.iv);
  }
  return out;
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw DomainError("Gauss rule needs at least one node");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton on P_n from the Tricomi initial guess, long double for the recurrence.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(kPi * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      long double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    {
      long double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const long double w = 2 / ((1 - x * x) * dp * dp);
    r.x[i] = -static_cast<double>(x);
    r.x[n - 1 - i] = static_cast<double>(x);
    r.w[i] = r.w[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace vvmf
