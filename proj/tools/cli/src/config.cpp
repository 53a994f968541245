#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ptdoublet/cli.hpp"

namespace ptdoublet::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid number for " + key + ": '" + value + "'");
  return x;
}

long parse_int(const std::string& key, const std::string& value) {
  long x = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid integer for " + key + ": '" + value + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{"model", "A",      "beta",   "C",           "nmax",
                                             "N",     "branch", "eps0",   "profile",     "T",
                                             "n",     "checks", "out",    "format",      "ed-override",
                                             "numeric-eps0"};
  return keys;
}

RunConfig default_config() {
  RunConfig cfg;
  if (const char* env = std::getenv("PTDOUBLET_OUT"); env && *env) cfg.out = env;
  return cfg;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + " is not key=value: '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(setting_keys().begin(), setting_keys().end(), key) == setting_keys().end()) {
      throw ConfigError("unknown config key '" + key + "' on line " + std::to_string(lineno));
    }
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model") {
    if (value == "natanzon") cfg.model = ModelSelect::Natanzon;
    else if (value == "eckart") cfg.model = ModelSelect::Eckart;
    else throw ConfigError("model must be natanzon or eckart, got '" + value + "'");
  } else if (key == "A") {
    cfg.A = parse_double(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_double(key, value);
  } else if (key == "C") {
    cfg.C = parse_double(key, value);
  } else if (key == "nmax") {
    const long v = parse_int(key, value);
    if (v < 0 || v > 1000) throw ConfigError("nmax must lie in [0, 1000]");
    cfg.nmax = static_cast<int>(v);
  } else if (key == "N") {
    const long v = parse_int(key, value);
    if (v < 0 || v > 1000) throw ConfigError("N must lie in [0, 1000]");
    cfg.N = static_cast<int>(v);
  } else if (key == "branch") {
    if (value == "plus") cfg.branch = Branch::Plus;
    else if (value == "minus") cfg.branch = Branch::Minus;
    else throw ConfigError("branch must be plus or minus, got '" + value + "'");
  } else if (key == "eps0") {
    cfg.eps0 = parse_double(key, value);
  } else if (key == "profile") {
    if (value == "constant") cfg.profile = ProfileKind::Constant;
    else if (value == "decaying") cfg.profile = ProfileKind::Decaying;
    else throw ConfigError("profile must be constant or decaying, got '" + value + "'");
  } else if (key == "T") {
    cfg.T = parse_double(key, value);
  } else if (key == "n") {
    const long v = parse_int(key, value);
    if (v < 3) throw ConfigError("n must be at least 3");
    cfg.n = static_cast<std::size_t>(v);
  } else if (key == "checks") {
    cfg.checks = split_list(value);
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("out must not be empty");
    cfg.out = value;
  } else if (key == "format") {
    if (value == "json") cfg.format = OutputFormat::Json;
    else if (value == "csv") cfg.format = OutputFormat::Csv;
    else throw ConfigError("format must be json or csv, got '" + value + "'");
  } else if (key == "ed-override") {
    cfg.ed_override = parse_double(key, value);
  } else if (key == "numeric-eps0") {
    cfg.numeric_eps0 = parse_double(key, value);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

VerifyConfig to_verify_config(const RunConfig& cfg) {
  VerifyConfig v;
  v.model = cfg.model;
  v.eckart = {cfg.A, cfg.beta};
  v.natanzon = {cfg.beta, cfg.C};
  v.Ns.clear();
  if (cfg.N) {
    v.Ns.push_back(*cfg.N);
  } else {
    for (int N = 0; N <= cfg.nmax; ++N) v.Ns.push_back(N);
  }
  v.profile = cfg.profile;
  v.eps0 = cfg.eps0;
  v.T = cfg.T;
  v.n = cfg.n;
  v.e_d_override = cfg.ed_override;
  v.numeric_eps0 = cfg.numeric_eps0;
  return v;
}

GridPtr make_grid(const RunConfig& cfg) { return config_grid(to_verify_config(cfg)); }

}  // namespace ptdoublet::cli
