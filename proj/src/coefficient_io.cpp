#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "vvmf/forms.hpp"

namespace vvmf {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

bool looks_integral(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

double parse_double(const std::string& s, int line) {
  const char* b = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
  double x = 0.0;
  auto [p, ec] = std::from_chars(b, s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("not a number: '" + s + "'", line);
  if (!std::isfinite(x)) throw ParseError("non-finite value '" + s + "'", line);
  return x;
}

std::int64_t parse_int(const std::string& s, int line) {
  const Int128 v = parse_int128(s, line);
  if (v > INT32_MAX || v < INT32_MIN) throw ParseError("index out of range: " + s, line);
  return static_cast<std::int64_t>(v);
}

Coefficient parse_coefficient(const std::string& re, const std::string& im, int line) {
  if (looks_integral(re) && looks_integral(im)) return Coefficient::integer(parse_int128(re, line), parse_int128(im, line));
  return Coefficient::real_or_complex(Complex(parse_double(re, line), parse_double(im, line)));
}

std::string format_coefficient(const Coefficient& c) {
  if (c.exact) return to_string(c.re_int) + " " + to_string(c.im_int);
  return format_double(c.value.real()) + " " + format_double(c.value.imag());
}

// "# key = value" header; returns false when the line is not of that shape
bool header_value(const std::string& body, const std::string& key, std::string& value) {
  std::istringstream is(body);
  std::string k, eq;
  if (!(is >> k >> eq) || k != key || eq != "=") return false;
  std::getline(is, value);
  const auto b = value.find_first_not_of(' ');
  value = b == std::string::npos ? "" : value.substr(b);
  return true;
}

void write_matrix_rows(std::ostream& os, const char* name, const Matrix& M) {
  for (int r = 0; r < M.rows(); ++r) {
    os << "# action " << name << " row " << r + 1;
    for (int c = 0; c < M.cols(); ++c) os << ' ' << format_double(M(r, c).real()) << ' ' << format_double(M(r, c).imag());
    os << '\n';
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, p);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void write_expansion(std::ostream& os, const FourierExpansion& f) {
  os << "# vvmf coefficient file\n";
  os << "# k2 = " << f.two_k() << '\n';
  os << "# m = " << f.dimension() << '\n';
  os << "# label = " << f.label() << '\n';
  for (int j = 0; j < f.dimension(); ++j)
    os << "# kappa " << j + 1 << ' ' << f.kappa()[j].num << '/' << f.kappa()[j].den << '\n';
  write_matrix_rows(os, "T", f.action().image_T);
  write_matrix_rows(os, "S", f.action().image_S);
  for (int j = 0; j < f.dimension(); ++j)
    for (int n = 0; n <= f.n_max(j); ++n) os << j + 1 << ' ' << n << ' ' << format_coefficient(f.coeff(j, n)) << '\n';
}

FourierExpansion read_expansion(std::istream& is) {
  int two_k = 0, m = 0;
  bool have_k = false, have_m = false;
  std::string label = "unnamed";
  std::map<int, Rational> kappas;
  std::map<char, std::map<int, std::vector<Complex>>> rows;
  std::map<std::pair<int, int>, std::pair<Coefficient, int>> records;
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const std::string body = line.substr(first + 1);
      std::string v;
      if (header_value(body, "k2", v)) {
        two_k = static_cast<int>(parse_int(v, ln));
        have_k = true;
      } else if (header_value(body, "m", v)) {
        m = static_cast<int>(parse_int(v, ln));
        if (m < 1) throw ParseError("m must be positive", ln);
        have_m = true;
      } else if (header_value(body, "label", v)) {
        label = v;
      } else {
        const auto t = split(body);
        if (t.size() == 3 && t[0] == "kappa") {
          const auto slash = t[2].find('/');
          if (slash == std::string::npos) throw ParseError("kappa must be p/q", ln);
          const std::int64_t p = parse_int(t[2].substr(0, slash), ln), q = parse_int(t[2].substr(slash + 1), ln);
          if (q <= 0) throw ParseError("kappa denominator must be positive", ln);
          kappas[static_cast<int>(parse_int(t[1], ln))] = Rational(p, q);
        } else if (t.size() >= 4 && t[0] == "action") {
          if ((t[1] != "T" && t[1] != "S") || t[2] != "row") throw ParseError("malformed action line", ln);
          if ((t.size() - 4) % 2 != 0) throw ParseError("action row needs re/im pairs", ln);
          std::vector<Complex> row;
          for (std::size_t c = 4; c < t.size(); c += 2) row.emplace_back(parse_double(t[c], ln), parse_double(t[c + 1], ln));
          rows[t[1][0]][static_cast<int>(parse_int(t[3], ln))] = row;
        }
      }
      continue;
    }
    const auto t = split(line);
    if (t.size() != 4) throw ParseError("expected 'j n re im'", ln);
    if (!have_k || !have_m) throw ParseError("record before the k2 and m headers", ln);
    const int j = static_cast<int>(parse_int(t[0], ln)), n = static_cast<int>(parse_int(t[1], ln));
    if (j < 1 || j > m) throw ParseError("component index out of range", ln);
    if (n < 0) throw ParseError("negative n", ln);
    if (!records.emplace(std::make_pair(j, n), std::make_pair(parse_coefficient(t[2], t[3], ln), ln)).second)
      throw ParseError("duplicate record", ln);
  }
  if (!have_k || !have_m) throw ParseError("missing k2 or m header", ln);

  UnitaryAction action;
  if (rows.empty()) {
    if (m == 1) action = trivial_action(two_k);
    else if (m == 2 && two_k % 2 != 0) action = weil_action(1, two_k);
    else throw ParseError("action matrices required for m > 1", ln);
  } else {
    action.dimension = m;
    action.two_k = two_k;
    action.label = label;
    for (char name : {'T', 'S'}) {
      Matrix M(m, m);
      for (int r = 1; r <= m; ++r) {
        auto it = rows[name].find(r);
        if (it == rows[name].end() || static_cast<int>(it->second.size()) != m)
          throw ParseError(std::string("action ") + name + " row " + std::to_string(r) + " missing or wrong length", ln);
        for (int c = 0; c < m; ++c) M(r - 1, c) = it->second[c];
      }
      (name == 'T' ? action.image_T : action.image_S) = M;
    }
  }
  try {
    action.validate(1e-9);
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid action: ") + e.what(), ln);
  }
  const auto kap = kappa_offsets(action);
  for (const auto& [j, r] : kappas)
    if (j < 1 || j > m || !(kap[j - 1] == r)) throw ParseError("kappa " + std::to_string(j) + " disagrees with the action", ln);

  std::vector<std::vector<Coefficient>> coeffs(m);
  for (const auto& [jn, cl] : records) {
    const auto [j, n] = jn;
    if (n == 0 && kap[j - 1].is_zero() && !cl.first.is_zero())
      throw ParseError("nonzero coefficient with n + kappa <= 0", cl.second);
    auto& c = coeffs[j - 1];
    if (static_cast<int>(c.size()) <= n) c.resize(n + 1, Coefficient::integer(0));
    c[n] = cl.first;
  }
  try {
    return FourierExpansion(action, std::move(coeffs), label);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), ln);
  }
}

void save_expansion(const FourierExpansion& f, const std::string& path) {
  auto os = open_out(path);
  write_expansion(os, f);
  if (!os) throw IoError("write failed: " + path);
}

FourierExpansion load_expansion(const std::string& path) {
  auto is = open_in(path);
  return read_expansion(is);
}

void write_jacobi(std::ostream& os, const JacobiCoefficients& J) {
  os << "# vvmf Jacobi coefficients\n";
  os << "# k = " << J.k << "\n# m = " << J.m << "\n# lmax = " << J.l_max << '\n';
  for (const auto& [lr, c] : J.table) os << lr.first << ' ' << lr.second << ' ' << format_coefficient(c) << '\n';
}

JacobiCoefficients read_jacobi(std::istream& is) {
  JacobiCoefficients J;
  bool hk = false, hm = false, hl = false;
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const std::string body = line.substr(first + 1);
      std::string v;
      if (header_value(body, "k", v)) J.k = static_cast<int>(parse_int(v, ln)), hk = true;
      else if (header_value(body, "m", v)) J.m = static_cast<int>(parse_int(v, ln)), hm = true;
      else if (header_value(body, "lmax", v)) J.l_max = static_cast<int>(parse_int(v, ln)), hl = true;
      continue;
    }
    const auto t = split(line);
    if (t.size() != 4) throw ParseError("expected 'l r re im'", ln);
    const std::int64_t l = parse_int(t[0], ln), r = parse_int(t[1], ln);
    if (!J.table.emplace(std::make_pair(l, r), parse_coefficient(t[2], t[3], ln)).second)
      throw ParseError("duplicate record", ln);
  }
  if (!hk || !hm || !hl) throw ParseError("missing k, m or lmax header", ln);
  try {
    J.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what(), ln);
  }
  return J;
}

void save_jacobi(const JacobiCoefficients& J, const std::string& path) {
  auto os = open_out(path);
  write_jacobi(os, J);
  if (!os) throw IoError("write failed: " + path);
}

JacobiCoefficients load_jacobi(const std::string& path) {
  auto is = open_in(path);
  return read_jacobi(is);
}

}  // namespace vvmf
