#pragma once

// Command-line front end.  Every option is a key of RunConfig; values come
// from defaults, then a key=value config file, then flags (flags win).

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace vvmf::cli {

enum ExitCode { kOk = 0, kUsage = 2, kTolerance = 3, kIo = 4 };

const char* version();

struct RunConfig {
  std::string command;  // lfun, kernel-coeff, ..., "theta decompose"
  std::map<std::string, std::string> values;

  // All keys start at their defaults.
  RunConfig();
  // Throws UsageError for an unknown key or a value of the wrong type.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  // Ranges and cross-field checks for the current command.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string name;
  std::string default_value;
  char type;  // 'd' double, 'i' integer, 's' string, 'b' bool
  std::string help;
};
const std::vector<KeySpec>& config_keys();

// key = value lines; '#' starts a comment.  Unknown keys are usage errors.
void apply_config_file(RunConfig& cfg, const std::string& path);

// "# vvmf <version>", "# command = ...", then "# key = value" for every key.
std::string header(const RunConfig& cfg);
// Reads the leading '#' block written by header().
RunConfig parse_header(std::istream& is);

// Entry point used by the executable; out/err receive all text output.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SuiteResult {
  std::string name;
  int assertions = 0;
  int failures = 0;
  std::vector<std::string> messages;
};
// Invariant suites behind `selfcheck`.  fixture_dir holds phi10_1.jcf.
std::vector<SuiteResult> run_selfcheck(const std::string& fixture_dir, unsigned seed);

}  // namespace vvmf::cli
