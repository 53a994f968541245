#include <ostream>

#include "CLI11.hpp"
#include "ptdoublet/cli.hpp"
#include "ptdoublet/error.hpp"
#include "ptdoublet/io.hpp"

namespace ptdoublet::cli {

namespace {

struct Flag {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& out) {
  if (command == "spectrum") return cmd_spectrum(cfg, out);
  if (command == "wavefunction") return cmd_wavefunction(cfg, out);
  if (command == "verify") return cmd_verify(cfg, out);
  return cmd_contour_export(cfg, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and numeric bound states of a PT-symmetric Natanzon-class model"};
  app.require_subcommand(1, 1);
  std::vector<CLI::App*> commands{
      app.add_subcommand("spectrum", "Doublet or Eckart energy levels"),
      app.add_subcommand("wavefunction", "Closed-form eigenfunction samples on the contour"),
      app.add_subcommand("verify", "Run verification checks and write a report"),
      app.add_subcommand("contour-export", "Contour and potential plot data"),
  };
  for (CLI::App* c : commands) c->fallthrough();

  // Flags are kept as text and applied after the config file so that both
  // go through the same parser and flags win.
  std::vector<Flag> flags;
  flags.reserve(setting_keys().size());
  for (const std::string& key : setting_keys()) flags.push_back({key, {}, nullptr});
  const std::map<std::string, std::string> help{
      {"model", "natanzon | eckart"},
      {"A", "Eckart strength, A > 1"},
      {"beta", "imaginary coupling, >= 0"},
      {"C", "target-model constant"},
      {"nmax", "highest N reported by spectrum and verify"},
      {"N", "level for wavefunction; restricts verify to this N"},
      {"branch", "plus | minus"},
      {"eps0", "contour offset, 0 < eps0 < pi/2"},
      {"profile", "constant | decaying"},
      {"T", "grid half-width in t"},
      {"n", "grid points"},
      {"checks", "comma list: contour, liouville, residual, pt-defect, nodes, numeric-match"},
      {"out", "output directory"},
      {"format", "json | csv"},
      {"ed-override", "energy substituted for E^(D) in the liouville check"},
      {"numeric-eps0", "arch offset used by the finite-difference oracle"},
  };
  for (Flag& f : flags) f.option = app.add_option("--" + f.key, f.value, help.at(f.key));
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidConfig;
  }

  std::string command;
  for (CLI::App* c : commands) {
    if (c->parsed()) command = c->get_name();
  }

  try {
    RunConfig cfg = default_config();
    if (!config_path.empty()) {
      for (const auto& [key, value] : read_config_file(config_path)) apply_setting(cfg, key, value);
    }
    for (const Flag& f : flags) {
      if (f.option->count() > 0) apply_setting(cfg, f.key, f.value);
    }
    return dispatch(command, cfg, out);
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const IoError& e) {
    err << "I/O failure: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O failure: " << e.what() << '\n';
    return kIoFailure;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
}

}  // namespace ptdoublet::cli
