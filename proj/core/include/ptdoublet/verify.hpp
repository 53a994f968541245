#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/numeric.hpp"
#include "ptdoublet/potentials.hpp"
#include "ptdoublet/wavefn.hpp"

namespace ptdoublet {

struct CheckValue {
  std::string key;
  double value = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::vector<CheckValue> values;
  std::string detail;
};

struct VerificationReport {
  std::string model;
  std::vector<CheckResult> checks;
  bool all_passed() const noexcept;
};

enum class ModelSelect { Eckart, Natanzon };

struct VerifyConfig {
  ModelSelect model = ModelSelect::Natanzon;
  EckartParams eckart{3.0, 1.0};
  NatanzonParams natanzon{1.0, 10.0};
  std::vector<int> Ns{0, 1};
  ProfileKind profile = ProfileKind::Decaying;
  double eps0 = 0.25;
  double T = 12.0;
  std::size_t n = 2001;
  // Replaces the energy of the target model in the liouville check.
  std::optional<double> e_d_override;
  // The arch contour used by the finite-difference oracle for the target
  // model; the straight Eckart check uses a constant profile at eps0.
  double numeric_eps0 = 1.0;
  std::size_t numeric_n_fine = 4001;
  StripRect strip;
};

/// Known check names, in report order.
const std::vector<std::string>& check_names();

/// Build the contour named by the config. Throws like build_grid.
GridPtr config_grid(const VerifyConfig& cfg);

CheckResult check_contour(const VerifyConfig& cfg);
CheckResult check_liouville(const VerifyConfig& cfg);
CheckResult check_residual(const VerifyConfig& cfg);
CheckResult check_pt_defect(const VerifyConfig& cfg);
CheckResult check_nodes(const VerifyConfig& cfg);
/// `confirmation`, when given, receives the full numeric run for dumping.
CheckResult check_numeric(const VerifyConfig& cfg, Confirmation* confirmation = nullptr);

/// Runs the named checks (all that apply to the model when empty). Throws BadParameters for an
/// unknown name or a check that does not apply to the model.
VerificationReport run_verification(const VerifyConfig& cfg, const std::vector<std::string>& checks,
                                    Confirmation* confirmation = nullptr);

/// Analytic states of the configured target model for the requested N:
/// both members of every doublet, the single member otherwise.
std::vector<std::pair<int, Branch>> admissible_states(const NatanzonParams& p, const std::vector<int>& Ns);

}  // namespace ptdoublet
