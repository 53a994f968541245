#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/spectrum.hpp"
#include "ptdoublet/verify.hpp"

namespace ptdoublet::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidConfig = 2, kIoFailure = 3 };

enum class OutputFormat { Json, Csv };

/// Bad flag or config-file value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelSelect model = ModelSelect::Natanzon;
  double A = 3.0;
  double beta = 1.0;
  double C = 10.0;
  int nmax = 1;
  std::optional<int> N;  // wavefunction level; restricts verify to one N
  Branch branch = Branch::Plus;
  ProfileKind profile = ProfileKind::Decaying;
  double eps0 = 0.25;
  double T = 12.0;
  std::size_t n = 2001;
  std::vector<std::string> checks;  // empty: every check that applies
  std::filesystem::path out = "ptdoublet-out";
  OutputFormat format = OutputFormat::Json;
  std::optional<double> ed_override;
  double numeric_eps0 = 1.0;
};

/// Keys accepted in config files; flags are the same names with "--".
const std::vector<std::string>& setting_keys();

/// Built-in defaults, with the output directory taken from PTDOUBLET_OUT
/// when that is set.
RunConfig default_config();

/// Flat key=value text; blank lines and lines starting with '#' are
/// skipped. Throws ConfigError on malformed lines or unknown keys, and when
/// the file cannot be read.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Throws ConfigError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

VerifyConfig to_verify_config(const RunConfig& cfg);
GridPtr make_grid(const RunConfig& cfg);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_wavefunction(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_contour_export(const RunConfig& cfg, std::ostream& out);

/// Full command line (argv[0] is skipped). Never throws; maps failures onto
/// the exit codes above and reports them on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptdoublet::cli
