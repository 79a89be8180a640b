#include "vvmf/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "vvmf/experiments.hpp"
#include "vvmf/parallel.hpp"

#ifndef VVMF_VERSION
#define VVMF_VERSION "0.0.0"
#endif
#ifndef VVMF_FIXTURE_DIR
#define VVMF_FIXTURE_DIR "tests/fixtures"
#endif

namespace vvmf::cli {

const char* version() { return VVMF_VERSION; }

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"k", "12", 'd', "weight; selects the built-in eigenform when no form file is given"},
      {"action", "trivial", 's', "kernel-coeff without a form: trivial, weil:<m> or gamma0:<N>"},
      {"form", "", 's', "coefficient file(s), comma separated; several files form an orthogonal basis"},
      {"jacobi", "", 's', "Jacobi coefficient file, used through its theta decomposition"},
      {"input", "", 's', "input file of the theta subcommands"},
      {"i", "1", 'i', "component of the kernel / L-function (1-based)"},
      {"j", "1", 'i', "kernel-coeff: output component (1-based)"},
      {"fourier_n", "1", 'i', "kernel-coeff: Fourier index n"},
      {"n", "1", 'i', "scan / asymptotic: derivative order"},
      {"order", "0", 'i', "lfun, kernel-coeff, verify-identity: derivative order"},
      {"sigma", "5.7", 'd', "real part of s"},
      {"t", "0.0", 'd', "imaginary part of s"},
      {"t0", "0.0", 'd', "scan: imaginary part of the scanned line"},
      {"eps", "0.05", 'd', "scan: distance kept from the centre"},
      {"points", "200", 'i', "scan: grid size"},
      {"window", "lower", 's', "scan: lower, mirror or both"},
      {"sigma_lo", "4.0", 'd', "lfun grid"},
      {"sigma_hi", "8.0", 'd', "lfun grid"},
      {"sigma_steps", "5", 'i', "lfun grid"},
      {"t_lo", "-2.0", 'd', "lfun grid"},
      {"t_hi", "2.0", 'd', "lfun grid"},
      {"t_steps", "5", 'i', "lfun grid"},
      {"tol", "1e-09", 'd', "kernel truncation tolerance"},
      {"c_max", "0", 'i', "kernel: fixed truncation (0 = adaptive)"},
      {"method", "both", 's', "kernel-coeff: formula, numeric or both"},
      {"check_tol", "0.0", 'd', "tolerance behind exit status 3 (0 = command default)"},
      {"v_max", "8.0", 'd', "Petersson: rectangle height"},
      {"u_panels", "4", 'i', "Petersson: panels in u"},
      {"v_panels", "24", 'i', "Petersson: panels in v on [1, v_max]"},
      {"cap_panels", "2", 'i', "Petersson: panels per cap slice"},
      {"quad_points", "12", 'i', "Petersson: Gauss nodes per panel"},
      {"delta", "0.25", 'd', "asymptotic: s = k/2 - delta + i t0"},
      {"kappa", "0.0", 'd', "asymptotic: offset kappa"},
      {"n0", "1", 'i', "asymptotic: n_{i,0}"},
      {"k_min", "20.0", 'd', "asymptotic: weights k_min, k_min + k_step, ..."},
      {"k_max", "200.0", 'd', "asymptotic"},
      {"k_step", "4.0", 'd', "asymptotic"},
      {"output", "", 's', "output path (stdout when empty)"},
      {"threads", "0", 'i', "worker threads (0: VVMF_THREADS or hardware)"},
      {"seed", "1", 'i', "selfcheck: random seed"},
      {"fixtures", VVMF_FIXTURE_DIR, 's', "selfcheck: directory with phi10_1.jcf"},
  };
  return keys;
}

namespace {

const KeySpec& spec_of(const std::string& key) {
  for (const auto& k : config_keys())
    if (k.name == key) return k;
  throw UsageError("unknown configuration key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end && std::isfinite(out);
}

bool parse_long(const std::string& s, long long& out) {
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end;
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) values[k.name] = k.default_value;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const KeySpec& k = spec_of(key);
  const std::string v = trim(raw);
  switch (k.type) {
    case 'd': {
      double x;
      if (!parse_double(v, x)) throw UsageError(key + ": expected a number, got '" + v + "'");
      values[key] = format_double(x);
      break;
    }
    case 'i': {
      long long x;
      if (!parse_long(v, x) || x < INT32_MIN || x > INT32_MAX) throw UsageError(key + ": expected an integer, got '" + v + "'");
      values[key] = std::to_string(x);
      break;
    }
    case 'b':
      if (v != "true" && v != "false") throw UsageError(key + ": expected true or false");
      values[key] = v;
      break;
    default:
      values[key] = v;
  }
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw UsageError("unknown configuration key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  double x = 0.0;
  parse_double(get(key), x);
  return x;
}

int RunConfig::integer(const std::string& key) const {
  long long x = 0;
  parse_long(get(key), x);
  return static_cast<int>(x);
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
  };
  need(integer("i") >= 1 && integer("j") >= 1, "i and j are 1-based");
  need(integer("fourier_n") >= 0, "fourier_n must be non-negative");
  need(integer("n") >= 0 && integer("n") <= kMaxLOrder, "n must lie in [0, " + std::to_string(kMaxLOrder) + "]");
  need(integer("order") >= 0 && integer("order") <= kMaxLOrder, "order out of range");
  need(integer("points") >= 3, "points must be at least 3");
  need(number("eps") > 0.0 && number("eps") < 0.5, "eps must lie in (0, 1/2)");
  const std::string& w = get("window");
  need(w == "lower" || w == "mirror" || w == "both", "window must be lower, mirror or both");
  const std::string& m = get("method");
  need(m == "formula" || m == "numeric" || m == "both", "method must be formula, numeric or both");
  need(integer("sigma_steps") >= 1 && integer("t_steps") >= 1, "grid step counts must be positive");
  need(number("tol") > 0.0, "tol must be positive");
  need(integer("c_max") >= 0, "c_max must be non-negative");
  need(number("check_tol") >= 0.0, "check_tol must be non-negative");
  need(integer("threads") >= 0, "threads must be non-negative");
  need(number("k_step") > 0.0 && number("k_max") > number("k_min"), "asymptotic weight range is empty");
  need(number("delta") > 0.0 && number("delta") < 0.5, "delta must lie in (0, 1/2)");
  need(number("kappa") >= 0.0 && number("kappa") < 1.0, "kappa must lie in [0, 1)");
  QuadratureSpec q;
  q.v_max = number("v_max");
  q.u_panels = integer("u_panels");
  q.v_panels = integer("v_panels");
  q.cap_panels = integer("cap_panels");
  q.points = integer("quad_points");
  try {
    q.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (command.rfind("theta", 0) == 0) need(!get("input").empty(), command + ": an input file is required");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path);
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(ln) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

std::string header(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# vvmf " << version() << '\n';
  os << "# command = " << cfg.command << '\n';
  for (const auto& k : config_keys()) os << "# " << k.name << " = " << cfg.get(k.name) << '\n';
  return os.str();
}

RunConfig parse_header(std::istream& is) {
  RunConfig cfg;
  std::string line;
  bool saw_version = false;
  while (is.peek() == '#' && std::getline(is, line)) {
    const std::string body = trim(line.substr(1));
    if (body.rfind("vvmf ", 0) == 0 && !saw_version) {
      saw_version = true;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
    if (key == "command") cfg.command = value;
    else cfg.set(key, value);
  }
  if (!saw_version) throw UsageError("no vvmf header found");
  return cfg;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// The forms a command works on: files, a Jacobi file, or the built-in eigenform.
std::vector<FourierExpansion> load_forms(const RunConfig& cfg) {
  std::vector<FourierExpansion> out;
  for (const auto& path : split_list(cfg.get("form"))) out.push_back(load_expansion(path));
  if (out.empty() && !cfg.get("jacobi").empty()) out.push_back(theta_decompose(load_jacobi(cfg.get("jacobi"))));
  if (out.empty()) {
    const double k = cfg.number("k");
    if (k != std::round(k)) throw UsageError("no form file given and k is not an integer");
    out.push_back(scalar_basis(static_cast<int>(k), default_n_max(static_cast<int>(k))));
  }
  return out;
}

QuadratureSpec quad_of(const RunConfig& cfg) {
  QuadratureSpec q;
  q.v_max = cfg.number("v_max");
  q.u_panels = cfg.integer("u_panels");
  q.v_panels = cfg.integer("v_panels");
  q.cap_panels = cfg.integer("cap_panels");
  q.points = cfg.integer("quad_points");
  return q;
}

Complex s_of(const RunConfig& cfg) { return {cfg.number("sigma"), cfg.number("t")}; }

double tolerance(const RunConfig& cfg, double fallback) {
  const double t = cfg.number("check_tol");
  return t > 0.0 ? t : fallback;
}

UnitaryAction action_of(const RunConfig& cfg) {
  if (!cfg.get("form").empty() || !cfg.get("jacobi").empty()) return load_forms(cfg).front().action();
  const double k = cfg.number("k");
  const int two_k = static_cast<int>(std::lround(2.0 * k));
  if (std::abs(two_k - 2.0 * k) > 1e-12) throw UsageError("k must be a multiple of 1/2");
  const std::string& a = cfg.get("action");
  long long arg = 0;
  if (a == "trivial") return trivial_action(two_k);
  if (a.rfind("weil:", 0) == 0 && parse_long(a.substr(5), arg) && arg >= 1)
    return weil_action(static_cast<int>(arg), two_k);
  if (a.rfind("gamma0:", 0) == 0 && parse_long(a.substr(7), arg) && arg >= 1) {
    if (two_k % 2 != 0) throw UsageError("gamma0 actions need integral weight");
    return induced_action_gamma0(static_cast<int>(arg), two_k / 2).action;
  }
  throw UsageError("action must be trivial, weil:<m> or gamma0:<N>");
}

// Opens the configured output, or hands back `fallback`.
class Output {
 public:
  Output(const RunConfig& cfg, std::ostream& fallback) : path_(cfg.get("output")) {
    if (path_.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path_);
    if (!*file_) throw IoError("cannot open output file " + path_);
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return !path_.empty(); }
  void finish() {
    os_->flush();
    if (!*os_) throw IoError("write failed: " + (path_.empty() ? std::string("stdout") : path_));
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::string fmt(double x) { return format_double(x); }

int cmd_lfun(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const FourierExpansion f = load_forms(cfg).front();
  const int order = cfg.integer("order");
  const auto grid = [](double lo, double hi, int steps) {
    std::vector<double> g;
    for (int p = 0; p < steps; ++p) g.push_back(steps == 1 ? lo : lo + (hi - lo) * p / (steps - 1));
    return g;
  };
  std::vector<Complex> pts;
  for (double sg : grid(cfg.number("sigma_lo"), cfg.number("sigma_hi"), cfg.integer("sigma_steps")))
    for (double t : grid(cfg.number("t_lo"), cfg.number("t_hi"), cfg.integer("t_steps"))) pts.emplace_back(sg, t);
  struct Row {
    std::vector<Vector> values;
    double fe = 0.0;
  };
  const auto rows = parallel_map<Row>(pts.size(), [&](std::size_t p) {
    Row r;
    for (int o = 0; o <= order; ++o) r.values.push_back(completed_L(f, pts[p], o).value);
    r.fe = functional_equation_residual(f, pts[p]);
    return r;
  });
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg) << "sigma,t,component,order,re,im,fe_residual\n";
  double worst = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    worst = std::max(worst, rows[p].fe);
    for (int c = 0; c < f.dimension(); ++c)
      for (int d = 0; d <= order; ++d) {
        const Complex v = rows[p].values[d](c);
        os << fmt(pts[p].real()) << ',' << fmt(pts[p].imag()) << ',' << c + 1 << ',' << d << ',' << fmt(v.real())
           << ',' << fmt(v.imag()) << ',' << fmt(rows[p].fe) << '\n';
      }
  }
  o.finish();
  (o.to_file() ? out : err) << "max functional-equation residual = " << fmt(worst) << '\n';
  return worst <= tolerance(cfg, 1e-9) ? kOk : kTolerance;
}

KernelParams kernel_params(const RunConfig& cfg, const UnitaryAction& action) {
  KernelParams p;
  p.action = action;
  p.i = cfg.integer("i") - 1;
  p.s = s_of(cfg);
  p.c_max = cfg.integer("c_max");
  p.tol = cfg.number("tol");
  return p;
}

int cmd_kernel_coeff(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const KernelParams p = kernel_params(cfg, action_of(cfg));
  const int j = cfg.integer("j") - 1, n = cfg.integer("fourier_n"), order = cfg.integer("order");
  if (order > kMaxKernelOrder) throw UsageError("kernel-coeff: order at most " + std::to_string(kMaxKernelOrder));
  const std::string& method = cfg.get("method");
  std::vector<KernelCoefficient> res;
  if (method != "numeric") res.push_back(kernel_coeff(p, j, n, order));
  if (method != "formula") res.push_back(kernel_coeff_numeric(p, j, n, order));
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg) << "method,order,re,im,truncation_estimate,extent,converged\n";
  for (const auto& r : res)
    for (int d = 0; d <= order; ++d)
      os << (r.method == KernelMethod::Formula ? "formula" : "numeric") << ',' << d << ','
         << fmt(r.derivatives[d].real()) << ',' << fmt(r.derivatives[d].imag()) << ',' << fmt(r.truncation_estimate)
         << ',' << r.extent << ',' << (r.converged ? "true" : "false") << '\n';
  o.finish();
  std::ostream& summary = o.to_file() ? out : err;
  for (const auto& r : res)
    if (!r.warning.empty()) summary << "warning: " << r.warning << '\n';
  if (res.size() == 2) {
    const double d = std::abs(res[0].value - res[1].value) / std::abs(res[1].value);
    summary << "relative difference formula vs numeric = " << fmt(d) << '\n';
    return d <= tolerance(cfg, 1e-5) ? kOk : kTolerance;
  }
  return kOk;
}

int cmd_verify_identity(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const BasisData B = make_basis(load_forms(cfg), quad_of(cfg));
  KernelParams p = kernel_params(cfg, B.action());
  const IdentityReport r = verify_identity(B, cfg.integer("i") - 1, s_of(cfg), cfg.integer("order"), p);
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg);
  os << "n0 = " << r.n0 << '\n';
  os << "lhs = " << fmt(r.lhs.real()) << ' ' << fmt(r.lhs.imag()) << '\n';
  os << "rhs = " << fmt(r.rhs.real()) << ' ' << fmt(r.rhs.imag()) << '\n';
  os << "rhs_plain = " << fmt(r.rhs_plain.real()) << ' ' << fmt(r.rhs_plain.imag()) << '\n';
  os << "abs_residual = " << fmt(r.abs_residual) << '\n';
  os << "rel_residual = " << fmt(r.rel_residual) << '\n';
  os << "plain_rel_residual = " << fmt(r.plain_rel_residual) << '\n';
  os << "kernel_truncation = " << fmt(r.kernel_truncation) << '\n';
  os << "petersson_rel_error = " << fmt(r.petersson_error) << '\n';
  os << "orthogonality_residual = " << fmt(B.orthogonality_residual) << '\n';
  if (!r.warning.empty()) os << "warning = " << r.warning << '\n';
  o.finish();
  const double tol = tolerance(cfg, cfg.integer("order") == 0 ? 1e-4 : 1e-3);
  return r.rel_residual <= tol ? kOk : kTolerance;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const BasisData B = make_basis(load_forms(cfg), quad_of(cfg));
  const std::string& w = cfg.get("window");
  std::vector<ScanWindow> windows;
  if (w != "mirror") windows.push_back(ScanWindow::Lower);
  if (w != "lower") windows.push_back(ScanWindow::Mirror);
  std::vector<ScanReport> reps;
  for (const ScanWindow win : windows)
    reps.push_back(scan_strip(B, cfg.integer("i") - 1, cfg.integer("n"), cfg.number("t0"), cfg.number("eps"),
                              cfg.integer("points"), win));
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    std::ostringstream block;
    write_scan_csv(block, reps[r]);
    const std::string text = block.str();
    // one column header for the whole file
    os << (r == 0 ? text : text.substr(text.find('\n') + 1));
  }
  o.finish();
  std::ostream& summary = o.to_file() ? out : err;
  bool flagged = false;
  for (const auto& r : reps) {
    write_scan_summary(summary, r);
    flagged = flagged || !r.flagged.empty();
  }
  return flagged ? kTolerance : kOk;
}

int cmd_petersson(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto forms = load_forms(cfg);
  const FourierExpansion& f = forms.front();
  const FourierExpansion& g = forms.size() > 1 ? forms[1] : forms.front();
  const InnerProductValue r = inner_product(f, g, quad_of(cfg));
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg);
  os << "value = " << fmt(r.value.real()) << ' ' << fmt(r.value.imag()) << '\n';
  os << "error_estimate = " << fmt(r.error_estimate) << '\n';
  os << "tail = " << fmt(r.tail.real()) << ' ' << fmt(r.tail.imag()) << '\n';
  os << "truncation_bound = " << fmt(r.truncation_bound) << '\n';
  os << "evaluations = " << r.evaluations << '\n';
  o.finish();
  return r.error_estimate <= tolerance(cfg, 1e-10) * std::abs(r.value) ? kOk : kTolerance;
}

int cmd_asymptotic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<double> ks;
  for (double k = cfg.number("k_min"); k <= cfg.number("k_max") + 1e-9; k += cfg.number("k_step")) ks.push_back(k);
  const int n = cfg.integer("n");
  if (n < 1) throw UsageError("asymptotic: n must be positive");
  const AsymptoticTable t =
      asymptotic_diagnostic(ks, n, cfg.number("t0"), cfg.number("delta"), cfg.number("kappa"), cfg.integer("n0"));
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg) << "k,re_s,im_s,re_N,im_N,re_x,im_x,re_residual,im_residual\n";
  for (const auto& r : t.rows)
    os << fmt(r.k) << ',' << fmt(r.s.real()) << ',' << fmt(r.s.imag()) << ',' << fmt(r.N.real()) << ','
       << fmt(r.N.imag()) << ',' << fmt(r.x.real()) << ',' << fmt(r.x.imag()) << ',' << fmt(r.residual.real()) << ','
       << fmt(r.residual.imag()) << '\n';
  o.finish();
  const double want = n % 2 ? -1.0 : 1.0;
  std::ostream& summary = o.to_file() ? out : err;
  summary << "fitted degree = " << t.fitted_degree << '\n';
  summary << "leading coefficient = " << fmt(t.leading_coefficient.real()) << ' ' << fmt(t.leading_coefficient.imag())
          << " (expected " << fmt(want) << ")\n";
  const bool ok = t.fitted_degree == n && std::abs(t.leading_coefficient - want) <= tolerance(cfg, 0.1);
  return ok ? kOk : kTolerance;
}

void write_plus(std::ostream& os, const PlusSpaceForm& f) {
  os << "# vvmf plus-space form\n# k2 = " << f.two_k << '\n';
  for (std::size_t N = 0; N < f.c.size(); ++N) {
    const Coefficient& c = f.c[N];
    if (c.exact)
      os << N << ' ' << to_string(c.re_int) << ' ' << to_string(c.im_int) << '\n';
    else
      os << N << ' ' << fmt(c.value.real()) << ' ' << fmt(c.value.imag()) << '\n';
  }
}

int cmd_theta(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& in = cfg.get("input");
  Output o(cfg, out);
  std::ostream& os = o.stream();
  if (cfg.command == "theta decompose") {
    write_expansion(os, theta_decompose(load_jacobi(in)));
  } else if (cfg.command == "theta reconstruct") {
    const FourierExpansion F = load_expansion(in);
    if (F.two_k() % 2 == 0) throw UsageError("theta reconstruct: components must have half-integral weight");
    write_jacobi(os, jacobi_reconstruct(F, (F.two_k() + 1) / 2));
  } else {
    // plus-map accepts either a Jacobi file or its components
    const bool jacobi = in.size() >= 4 && in.compare(in.size() - 4, 4, ".jcf") == 0;
    write_plus(os, plus_space_map(jacobi ? theta_decompose(load_jacobi(in)) : load_expansion(in)));
  }
  o.finish();
  // data files stay in their own format; the run header goes to the side channel
  (o.to_file() ? out : err) << header(cfg);
  return kOk;
}

int cmd_selfcheck(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto suites = run_selfcheck(cfg.get("fixtures"), static_cast<unsigned>(cfg.integer("seed")));
  Output o(cfg, out);
  std::ostream& os = o.stream();
  os << header(cfg);
  int total = 0, failed = 0;
  for (const auto& s : suites) {
    os << s.name << ": " << s.assertions - s.failures << '/' << s.assertions << " passed\n";
    for (const auto& m : s.messages) os << "  FAIL " << m << '\n';
    total += s.assertions;
    failed += s.failures;
  }
  os << "assertions = " << total << ", failures = " << failed << '\n';
  o.finish();
  return failed == 0 && total > 0 ? kOk : kTolerance;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vector-valued modular forms: L-functions, kernel coefficients, Petersson products, scans"};
  app.set_version_flag("--version", std::string("vvmf ") + version());
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Configuration: --config FILE reads key = value lines; flags override it.\n"
      "Every key is also a flag (--sigma-lo for sigma_lo).  Defaults are echoed in each output header.\n"
      "scan CSV columns: sigma,t,re_D,im_D,abs_D,re_term_1,im_term_1,... (one term pair per basis element)\n"
      "lfun CSV columns: sigma,t,component,order,re,im,fe_residual\n"
      "Exit status: 0 ok, 2 usage, 3 tolerance or check failure, 4 input/output.\n"
      "VVMF_THREADS sets the default worker count.");

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flags;
  for (const auto& k : config_keys()) {
    std::string flag = k.name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    flags[k.name] = app.add_option("--" + flag, flag_values[k.name], k.help + " [" + k.default_value + "]");
  }

  struct Sub {
    std::string name;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& full) {
    CLI::App* s = parent->add_subcommand(name, help);
    subs.push_back({full, s});
    return s;
  };
  add(&app, "lfun", "tabulate L*(f,s) and its derivatives on a grid", "lfun");
  add(&app, "kernel-coeff", "kernel Fourier coefficient by formula and by numerical integration", "kernel-coeff");
  add(&app, "verify-identity", "kernel coefficient against c_k times the L-value sum", "verify-identity");
  add(&app, "scan", "averaged derivative D_n on a sigma grid in the strip windows", "scan");
  add(&app, "petersson", "Petersson product of one or two forms", "petersson");
  add(&app, "asymptotic", "log-derivative ratio N(k,s) against log(k - s)", "asymptotic");
  add(&app, "selfcheck", "run the built-in invariant suites", "selfcheck");
  CLI::App* theta = app.add_subcommand("theta", "Jacobi forms: theta decomposition and plus space");
  theta->require_subcommand(1);
  std::string theta_input;
  for (const char* name : {"decompose", "reconstruct", "plus-map"}) {
    CLI::App* s = add(theta, name, "", std::string("theta ") + name);
    s->add_option("input", theta_input, "input file")->required();
  }

  try {
    std::vector<std::string> args;
    for (int a = argc - 1; a >= 1; --a) args.emplace_back(argv[a]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "vvmf " << version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  RunConfig cfg;
  for (const auto& s : subs)
    if (s.app->parsed()) cfg.command = s.name;
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& [key, opt] : flags)
      if (opt->count() > 0) cfg.set(key, flag_values[key]);
    if (!theta_input.empty()) cfg.set("input", theta_input);
    cfg.validate();
    if (cfg.integer("threads") > 0) set_thread_count(cfg.integer("threads"));

    static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&, std::ostream&)>> table = {
        {"lfun", cmd_lfun},
        {"kernel-coeff", cmd_kernel_coeff},
        {"verify-identity", cmd_verify_identity},
        {"scan", cmd_scan},
        {"petersson", cmd_petersson},
        {"asymptotic", cmd_asymptotic},
        {"selfcheck", cmd_selfcheck},
        {"theta decompose", cmd_theta},
        {"theta reconstruct", cmd_theta},
        {"theta plus-map", cmd_theta},
    };
    return table.at(cfg.command)(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kTolerance;
  }
}

}  // namespace vvmf::cli
