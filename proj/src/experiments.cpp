#include "vvmf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "vvmf/parallel.hpp"
#include "vvmf/special_functions.hpp"

namespace vvmf {

int n_zero(double kappa, std::string* warning) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw DomainError("n_zero: kappa must lie in [0, 1)");
  if (kappa <= 1e-12) return 1;
  if (kappa >= 1.0 - 1e-12 && warning) *warning = "kappa within 1e-12 of 1; treated as nonzero";
  return 0;
}

BasisData make_basis(std::vector<FourierExpansion> forms, const QuadratureSpec& quad, double max_offdiag) {
  if (forms.empty()) throw DomainError("basis: no forms given");
  BasisData out;
  const int g = static_cast<int>(forms.size());
  out.gram = Matrix::Zero(g, g);
  for (int l = 0; l < g; ++l)
    for (int m = l; m < g; ++m) {
      const InnerProductValue r = inner_product(forms[l], forms[m], quad);  // rejects mixed spaces
      out.gram(l, m) = r.value;
      out.gram(m, l) = std::conj(r.value);
      if (l == m) {
        if (!(r.value.real() > 0.0)) throw DomainError("basis: form " + std::to_string(l + 1) + " has zero norm");
        out.norm_error = std::max(out.norm_error, r.error_estimate / r.value.real());
      }
    }
  for (int l = 0; l < g; ++l) out.norms.push_back(out.gram(l, l).real());
  for (int l = 0; l < g; ++l)
    for (int m = 0; m < g; ++m)
      if (l != m)
        out.orthogonality_residual =
            std::max(out.orthogonality_residual, std::abs(out.gram(l, m)) / std::sqrt(out.norms[l] * out.norms[m]));
  if (out.orthogonality_residual > max_offdiag)
    throw DomainError("basis: forms are not orthogonal (relative Gram residual " +
                      std::to_string(out.orthogonality_residual) + ")");
  out.forms = std::move(forms);
  return out;
}

BasisData scalar_basis_data(int k, const QuadratureSpec& quad) {
  return make_basis({scalar_basis(k, default_n_max(k))}, quad);
}

std::vector<Complex> averaged_derivative_terms(const BasisData& basis, int i, int n, Complex s) {
  if (basis.forms.empty()) throw DomainError("averaged_derivative: empty basis");
  if (i < 0 || i >= basis.forms.front().dimension()) throw DomainError("averaged_derivative: component out of range");
  if (n < 0 || n > kMaxLOrder) throw DomainError("averaged_derivative: derivative order out of range");
  const int n0 = n_zero(basis.forms.front().kappa()[i].value());
  std::vector<Complex> out;
  for (int l = 0; l < basis.size(); ++l) {
    const Complex b = basis.b(l, i, n0);
    if (b == Complex(0.0)) {
      out.push_back(0.0);
      continue;
    }
    const Complex Ln = completed_L(basis.forms[l], std::conj(s), n).value(i);
    out.push_back(b / basis.norms[l] * std::conj(Ln));
  }
  return out;
}

Complex averaged_derivative(const BasisData& basis, int i, int n, Complex s) {
  Complex sum = 0.0;
  for (const Complex t : averaged_derivative_terms(basis, i, n, s)) sum += t;
  return sum;
}

Complex unfolded_derivative(const BasisData& basis, int i, int n, Complex s) {
  if (basis.forms.empty()) throw DomainError("unfolded_derivative: empty basis");
  if (i < 0 || i >= basis.forms.front().dimension()) throw DomainError("unfolded_derivative: component out of range");
  const double k = basis.weight();
  const int n0 = n_zero(basis.forms.front().kappa()[i].value());
  const Complex phase = std::exp(Complex(0.0, -kPi * k / 2.0)) * (n % 2 ? -1.0 : 1.0);
  Complex sum = 0.0;
  for (int l = 0; l < basis.size(); ++l) {
    const Complex b = basis.b(l, i, n0);
    if (b == Complex(0.0)) continue;
    const Complex Ln = completed_L(basis.forms[l], k - std::conj(s), n).value(i);
    sum += b / basis.norms[l] * phase * std::conj(Ln);
  }
  return sum;
}

IdentityReport verify_identity(const BasisData& basis, int i, Complex s, int order, KernelParams kernel) {
  if (basis.forms.empty()) throw DomainError("verify_identity: empty basis");
  IdentityReport rep;
  rep.s = s;
  rep.i = i;
  rep.order = order;
  rep.n0 = n_zero(basis.forms.front().kappa()[i].value(), &rep.warning);
  kernel.action = basis.action();
  kernel.i = i;
  kernel.s = s;
  const KernelCoefficient r = kernel_coeff(kernel, i, rep.n0, order);
  rep.lhs = r.value;
  rep.kernel_truncation = r.truncation_estimate;
  if (!r.warning.empty()) rep.warning += (rep.warning.empty() ? "" : "; ") + r.warning;
  const Complex ck = kernel_constants(basis.weight(), s).c_k;
  rep.rhs = ck * unfolded_derivative(basis, i, order, s);
  rep.rhs_plain = ck * averaged_derivative(basis, i, order, s);
  rep.petersson_error = basis.norm_error;
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  rep.rel_residual = rep.abs_residual / std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.plain_rel_residual = std::abs(rep.lhs - rep.rhs_plain) / std::max(std::abs(rep.lhs), std::abs(rep.rhs_plain));
  return rep;
}

namespace {

double median_abs(const std::vector<Complex>& D) {
  std::vector<double> m;
  for (const Complex d : D) m.push_back(std::abs(d));
  std::sort(m.begin(), m.end());
  const std::size_t g = m.size();
  if (g == 0) return 0.0;
  return g % 2 ? m[g / 2] : 0.5 * (m[g / 2 - 1] + m[g / 2]);
}

}  // namespace

std::vector<int> flag_zeros(const std::vector<Complex>& D) {
  const double med = median_abs(D);
  std::vector<int> out;
  for (std::size_t p = 1; p + 1 < D.size(); ++p) {
    if (!(std::abs(D[p]) < 1e-3 * med)) continue;
    const Complex a = D[p - 1], b = D[p + 1];
    if (a.real() * b.real() <= 0.0 && a.imag() * b.imag() <= 0.0) out.push_back(static_cast<int>(p));
  }
  return out;
}

ScanReport scan_strip(const BasisData& basis, int i, int n, double t0, double eps, int grid_size, ScanWindow window) {
  if (grid_size < 3) throw DomainError("scan: need at least 3 grid points");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("scan: eps must lie in (0, 1/2)");
  const auto start = std::chrono::steady_clock::now();
  ScanReport r;
  r.k = basis.weight();
  r.i = i;
  r.n = n;
  r.t0 = t0;
  r.eps = eps;
  r.window = window;
  r.prior_work_mode = n == 0;
  if (window == ScanWindow::Lower) {
    r.lo = (r.k - 1.0) / 2.0;
    r.hi = r.k / 2.0 - eps;
  } else {
    r.lo = r.k / 2.0 + eps;
    r.hi = (r.k + 1.0) / 2.0;
  }
  const double h = (r.hi - r.lo) / (grid_size + 1);
  for (int p = 1; p <= grid_size; ++p) r.sigma.push_back(r.lo + p * h);
  r.terms = parallel_map<std::vector<Complex>>(r.sigma.size(), [&](std::size_t p) {
    return averaged_derivative_terms(basis, i, n, Complex(r.sigma[p], t0));
  });
  std::vector<double> mags;
  for (const auto& t : r.terms) {
    Complex d = 0.0;
    for (const Complex x : t) d += x;
    r.D.push_back(d);
    mags.push_back(std::abs(d));
  }
  const auto it = std::min_element(mags.begin(), mags.end());
  r.min_abs = *it;
  r.argmin_sigma = r.sigma[it - mags.begin()];
  r.median_abs = median_abs(r.D);
  r.flagged = flag_zeros(r.D);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_scan_csv(std::ostream& os, const ScanReport& r) {
  os << "sigma,t,re_D,im_D,abs_D";
  const std::size_t g = r.terms.empty() ? 0 : r.terms.front().size();
  for (std::size_t l = 1; l <= g; ++l) os << ",re_term_" << l << ",im_term_" << l;
  os << '\n';
  for (std::size_t p = 0; p < r.sigma.size(); ++p) {
    os << format_double(r.sigma[p]) << ',' << format_double(r.t0) << ',' << format_double(r.D[p].real()) << ','
       << format_double(r.D[p].imag()) << ',' << format_double(std::abs(r.D[p]));
    for (const Complex t : r.terms[p]) os << ',' << format_double(t.real()) << ',' << format_double(t.imag());
    os << '\n';
  }
}

void write_scan_summary(std::ostream& os, const ScanReport& r, bool with_runtime) {
  os << "k = " << format_double(r.k) << ", i = " << r.i + 1 << ", n = " << r.n << ", t0 = " << format_double(r.t0)
     << ", eps = " << format_double(r.eps) << '\n';
  os << "window = " << (r.window == ScanWindow::Lower ? "lower" : "mirror") << " (" << format_double(r.lo) << ", "
     << format_double(r.hi) << "), points = " << r.sigma.size() << '\n';
  if (r.prior_work_mode) os << "mode = prior-work (n = 0); the theorem is not asserted for this case\n";
  os << "min |D| = " << format_double(r.min_abs) << " at sigma = " << format_double(r.argmin_sigma) << '\n';
  os << "median |D| = " << format_double(r.median_abs) << '\n';
  os << "margin min/median = " << format_double(r.median_abs > 0.0 ? r.min_abs / r.median_abs : 0.0) << '\n';
  os << "zero flags = " << r.flagged.size();
  for (const int p : r.flagged) os << ' ' << format_double(r.sigma[p]);
  os << '\n';
  if (with_runtime) os << "runtime_seconds = " << r.runtime_seconds << '\n';
}

Complex log_derivative_ratio(int n, double k, Complex s, double kappa, int n0) {
  if (n < 0 || n > 8) throw DomainError("asymptotic_diagnostic: order out of range");
  // l_1 = log(2 pi (n0+kappa)) - psi(k-s), l_p = (-1)^p psi^{(p-1)}(k-s)
  std::vector<Complex> l(n + 1);
  for (int p = 1; p <= n; ++p) {
    const Complex psi = polygamma(p - 1, k - s);
    l[p] = p == 1 ? std::log(kTwoPi * (n0 + kappa)) - psi : (p % 2 ? -psi : psi);
  }
  // complete Bell polynomials: B_{m+1} = sum_j C(m,j) B_{m-j} l_{j+1}
  std::vector<Complex> B(n + 1);
  B[0] = 1.0;
  for (int m = 0; m < n; ++m) {
    double binom = 1.0;
    Complex acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      acc += binom * B[m - j] * l[j + 1];
      binom = binom * (m - j) / (j + 1);
    }
    B[m + 1] = acc;
  }
  return B[n];
}

namespace {

// least squares polynomial in x, coefficients from the constant term up
std::vector<Complex> polyfit(const std::vector<Complex>& x, const std::vector<Complex>& y, int degree) {
  const int m = static_cast<int>(x.size());
  Matrix A(m, degree + 1);
  Vector b(m);
  for (int r = 0; r < m; ++r) {
    Complex p = 1.0;
    for (int c = 0; c <= degree; ++c, p *= x[r]) A(r, c) = p;
    b(r) = y[r];
  }
  const Vector c = A.colPivHouseholderQr().solve(b);
  return std::vector<Complex>(c.data(), c.data() + c.size());
}

Complex polyval(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

AsymptoticTable asymptotic_diagnostic(const std::vector<double>& k_list, int n, double t0, double delta, double kappa,
                                      int n0) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("asymptotic_diagnostic: delta must lie in (0, 1/2)");
  if (n < 1) throw DomainError("asymptotic_diagnostic: n must be positive");
  if (static_cast<int>(k_list.size()) < n + 3) throw DomainError("asymptotic_diagnostic: too few weights to fit");
  AsymptoticTable t;
  t.n = n;
  t.t0 = t0;
  t.delta = delta;
  t.kappa = kappa;
  t.n0 = n0;
  std::vector<Complex> xs, ys;
  for (const double k : k_list) {
    AsymptoticRow row;
    row.k = k;
    row.s = Complex(k / 2.0 - delta, t0);
    row.N = log_derivative_ratio(n, k, row.s, kappa, n0);
    row.x = std::log(k - row.s);
    row.main_term = std::pow(std::log(kTwoPi * (n0 + kappa)), n);
    xs.push_back(row.x);
    ys.push_back(row.N);
    t.rows.push_back(row);
  }
  t.fitted_degree = n + 2;
  for (int D = 0; D <= n + 1; ++D) {
    if (std::abs(polyfit(xs, ys, D + 1).back()) < 0.1) {
      t.fitted_degree = D;
      break;
    }
  }
  const auto full = polyfit(xs, ys, n);
  for (std::size_t r = 0; r < t.rows.size(); ++r) t.rows[r].residual = ys[r] - polyval(full, xs[r]);
  for (std::size_t end = 0; end < k_list.size(); ++end) {
    std::vector<Complex> wx, wy;
    for (std::size_t r = 0; r <= end; ++r)
      if (k_list[r] >= k_list[end] - t.window) {
        wx.push_back(xs[r]);
        wy.push_back(ys[r]);
      }
    if (k_list[end] - k_list.front() < t.window || static_cast<int>(wx.size()) < n + 2) continue;
    t.leading_trend.emplace_back(k_list[end], polyfit(wx, wy, n).back());
  }
  t.leading_coefficient = t.leading_trend.empty() ? full.back() : t.leading_trend.back().second;
  return t;
}

}  // namespace vvmf
