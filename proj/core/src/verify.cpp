#include "ptdoublet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptdoublet/error.hpp"
#include "ptdoublet/spectrum.hpp"

namespace ptdoublet {

namespace {

std::string state_tag(int N, Branch q) {
  return "N" + std::to_string(N) + (q == Branch::Plus ? "_plus" : "_minus");
}

std::string state_tag(int N) { return "N" + std::to_string(N); }

std::vector<int> eckart_Ns(const VerifyConfig& cfg) {
  std::vector<int> out;
  for (const EckartLevel& l : eckart_levels(cfg.eckart)) {
    if (std::find(cfg.Ns.begin(), cfg.Ns.end(), l.N) != cfg.Ns.end()) out.push_back(l.N);
  }
  return out;
}

// Calls f(tag, samples, potential values, energy, variable, N) for every state.
template <class F>
void for_each_state(const VerifyConfig& cfg, const GridPtr& grid, F&& f) {
  if (cfg.model == ModelSelect::Eckart) {
    std::vector<cplx> v(grid->size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = v_eckart((*grid)[k].r, cfg.eckart);
    for (int N : eckart_Ns(cfg)) {
      const EckartState st(cfg.eckart, N, grid);
      f(state_tag(N), sample(st), v, cplx(st.energy()), Variable::R, N);
    }
    return;
  }
  const NatanzonPotential pot(cfg.natanzon, grid);
  const std::vector<cplx> v = pot.values();
  for (const auto& [N, q] : admissible_states(cfg.natanzon, cfg.Ns)) {
    const NatanzonState st(cfg.natanzon, N, q, grid);
    f(state_tag(N, q), sample(st), v, cplx(st.energy()), Variable::Xi, N);
  }
}

}  // namespace

bool VerificationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"contour", "liouville", "residual", "pt-defect", "nodes",
                                              "numeric-match"};
  return names;
}

std::vector<std::pair<int, Branch>> admissible_states(const NatanzonParams& p, const std::vector<int>& Ns) {
  std::vector<std::pair<int, Branch>> out;
  for (int N : Ns) {
    const LevelResult lv = doublet(N, p.beta, p.C);
    if (std::holds_alternative<Doublet>(lv)) {
      out.emplace_back(N, Branch::Plus);
      out.emplace_back(N, Branch::Minus);
    } else if (std::holds_alternative<SingleLevel>(lv)) {
      out.emplace_back(N, Branch::Plus);
    }
  }
  return out;
}

GridPtr config_grid(const VerifyConfig& cfg) {
  const EpsilonProfile prof =
      cfg.profile == ProfileKind::Constant ? EpsilonProfile::constant(cfg.eps0) : EpsilonProfile::decaying(cfg.eps0);
  return build_grid(prof, -cfg.T, cfg.T, cfg.n);
}

CheckResult check_contour(const VerifyConfig& cfg) {
  CheckResult res;
  res.name = "contour";
  const GridPtr grid = config_grid(cfg);
  const ContourReport rep = validate_contour(*grid);
  res.values = {{"max_sin_residual", rep.max_sin_residual},
                {"max_cos_residual", rep.max_cos_residual},
                {"max_composition_residual", rep.max_composition_residual},
                {"max_sin_residual_abs", rep.max_sin_residual_abs},
                {"max_cos_residual_abs", rep.max_cos_residual_abs},
                {"max_composition_residual_abs", rep.max_composition_residual_abs},
                {"min_xi_singular_distance", rep.min_xi_singular_distance},
                {"min_r_singular_distance", rep.min_r_singular_distance}};
  res.passed = rep.max_sin_residual < 1e-12 && rep.max_cos_residual < 1e-12 && rep.max_composition_residual < 1e-12;
  const ContourPoint& top = (*grid)[grid->anchor_index()];
  if (top.t == 0.0) {
    const double dz = std::abs(top.z - std::log(std::sin(cfg.eps0)));
    res.values.push_back({"z0_error", dz});
    res.passed = res.passed && dz < 1e-14;
  }
  res.detail = "residuals relative to |sinh r|; the _abs values are unscaled";
  return res;
}

CheckResult check_liouville(const VerifyConfig& cfg) {
  if (cfg.model != ModelSelect::Natanzon) {
    fail(ErrorCode::BadParameters, "the liouville check compares the target model with its Eckart partner");
  }
  CheckResult res;
  res.name = "liouville";
  const GridPtr grid = config_grid(cfg);
  const NatanzonPotential pot(cfg.natanzon, grid);
  res.passed = true;
  const auto states = admissible_states(cfg.natanzon, cfg.Ns);
  for (const auto& [N, q] : states) {
    const double d = branch_delta(N, q, cfg.natanzon.beta, cfg.natanzon.C);
    const EckartParams pe{d + N + 1.0, cfg.natanzon.beta};
    const double e_e = eckart_energy(d, pe.beta);
    const double e_d = cfg.e_d_override.value_or(natanzon_energy(N, d, cfg.natanzon.C));
    const LiouvilleReport lr = liouville_scan(e_e, e_d, pe, pot);
    res.values.push_back({state_tag(N, q) + "_max_relative", lr.max_relative});
    res.values.push_back({state_tag(N, q) + "_max_absolute", lr.max_absolute});
    res.passed = res.passed && lr.max_relative < 1e-9;
  }
  if (states.empty()) {
    res.passed = false;
    res.detail = "no admissible states for the requested N";
  }
  return res;
}

CheckResult check_residual(const VerifyConfig& cfg) {
  CheckResult res;
  res.name = "residual";
  res.passed = true;
  const GridPtr grid = config_grid(cfg);
  int count = 0;
  for_each_state(cfg, grid, [&](const std::string& tag, const WaveSamples& s, const std::vector<cplx>& v, cplx e,
                                Variable var, int) {
    const double r = schrodinger_residual(s, v, e, var);
    res.values.push_back({tag + "_residual", r});
    res.passed = res.passed && r < 1e-5;
    ++count;
  });
  if (count == 0) {
    res.passed = false;
    res.detail = "no admissible states for the requested N";
  }
  return res;
}

CheckResult check_pt_defect(const VerifyConfig& cfg) {
  CheckResult res;
  res.name = "pt-defect";
  res.passed = true;
  const GridPtr grid = config_grid(cfg);
  int count = 0;
  for_each_state(cfg, grid, [&](const std::string& tag, const WaveSamples& s, const std::vector<cplx>&, cplx,
                                Variable, int) {
    const double d = pt_symmetry_defect(s);
    res.values.push_back({tag + "_defect", d});
    res.passed = res.passed && d < 1e-8;
    ++count;
  });
  if (count == 0) {
    res.passed = false;
    res.detail = "no admissible states for the requested N";
  }
  return res;
}

CheckResult check_nodes(const VerifyConfig& cfg) {
  CheckResult res;
  res.name = "nodes";
  res.passed = true;
  const GridPtr grid = config_grid(cfg);
  std::ostringstream detail;
  int count = 0;
  for_each_state(cfg, grid, [&](const std::string& tag, const WaveSamples& s, const std::vector<cplx>&, cplx,
                                Variable, int N) {
    ++count;
    const double lo = grid->t_min() + cfg.strip.margin;
    const double hi = grid->t_max() - cfg.strip.margin;
    double w = std::nan("");
    try {
      w = winding_number(s.log_derivative, lo, hi, cfg.strip.below, cfg.strip.above, cfg.strip.panel);
    } catch (const Error& e) {
      detail << tag << ": " << e.what() << "; ";
    }
    res.values.push_back({tag + "_winding", w});
    const bool ok = std::isfinite(w) && std::abs(w - std::round(w)) <= 0.1 && std::lround(w) == N;
    if (!ok) {
      res.passed = false;
      // Where the zeros actually are: widen the strip downwards, keeping the
      // upper edge clear of sinh r = 0.
      for (double below : {0.3, 0.5, 0.75, 1.0, 1.25}) {
        try {
          const double wb = winding_number(s.log_derivative, lo, hi, below, cfg.strip.above, cfg.strip.panel);
          std::ostringstream key;
          key << tag << "_winding_below_" << below;
          res.values.push_back({key.str(), wb});
        } catch (const Error&) {
        }
      }
      detail << tag << ": " << (std::isfinite(w) ? std::to_string(std::lround(w)) : std::string("no")) << " zeros in the strip, expected "
             << N << "; ";
    }
  });
  if (count == 0) {
    res.passed = false;
    detail << "no admissible states for the requested N";
  }
  res.detail = detail.str();
  return res;
}

CheckResult check_numeric(const VerifyConfig& cfg, Confirmation* confirmation) {
  CheckResult res;
  res.name = "numeric-match";
  std::vector<cplx> analytic;
  std::vector<std::string> tags;
  std::vector<int> Ns;
  GridPtr grid;
  OperatorFactory make;
  if (cfg.model == ModelSelect::Eckart) {
    grid = build_grid(EpsilonProfile::constant(cfg.eps0), -cfg.T, cfg.T, cfg.n);
    for (int N : eckart_Ns(cfg)) {
      const double d = cfg.eckart.A - N - 1.0;
      analytic.emplace_back(eckart_energy(d, cfg.eckart.beta));
      tags.push_back(state_tag(N));
      Ns.push_back(N);
    }
    const EckartParams p = cfg.eckart;
    make = [p](const GridPtr& g) { return discretize(g, p); };
  } else {
    grid = build_grid(EpsilonProfile::decaying(cfg.numeric_eps0), -cfg.T, cfg.T, cfg.n);
    for (const auto& [N, q] : admissible_states(cfg.natanzon, cfg.Ns)) {
      analytic.emplace_back(natanzon_energy(N, branch_delta(N, q, cfg.natanzon.beta, cfg.natanzon.C), cfg.natanzon.C));
      tags.push_back(state_tag(N, q));
      Ns.push_back(N);
    }
    const NatanzonParams p = cfg.natanzon;
    make = [p](const GridPtr& g) { return discretize(g, p); };
  }
  if (analytic.empty()) {
    res.detail = "no admissible states for the requested N";
    return res;
  }
  ConfirmOptions opt;
  opt.n_fine = cfg.numeric_n_fine;
  opt.strip.below = cfg.strip.below;
  opt.strip.above = cfg.strip.above;
  Confirmation c;
  try {
    c = confirm_spectrum(grid, make, analytic, opt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::ShiftIsEigenvalue) throw;
    res.detail = e.what();
    return res;
  }
  res.passed = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < c.matches.size(); ++i) {
    const EigenMatch& m = c.matches[i];
    res.values.push_back({tags[i] + "_numeric_re", m.numeric_energy.real()});
    res.values.push_back({tags[i] + "_numeric_im", m.numeric_energy.imag()});
    res.values.push_back({tags[i] + "_relative_error", m.relative_error});
    res.values.push_back({tags[i] + "_nodes", m.node_count ? double(*m.node_count) : std::nan("")});
    const bool ok = m.matched && std::abs(m.numeric_energy.imag()) < 1e-6 && m.node_count && *m.node_count == Ns[i];
    if (!ok) detail << tags[i] << " not confirmed; ";
    res.passed = res.passed && ok;
  }
  res.values.push_back({"raw_eigenvalues", double(c.raw.size())});
  res.values.push_back({"filtered_eigenvalues", double(c.filtered.size())});
  res.detail = detail.str();
  if (confirmation) *confirmation = std::move(c);
  return res;
}

VerificationReport run_verification(const VerifyConfig& cfg, const std::vector<std::string>& checks,
                                    Confirmation* confirmation) {
  std::vector<std::string> names = checks;
  if (names.empty()) {
    for (const std::string& c : check_names()) {
      if (c != "liouville" || cfg.model == ModelSelect::Natanzon) names.push_back(c);
    }
  }
  VerificationReport rep;
  rep.model = cfg.model == ModelSelect::Eckart ? "eckart" : "natanzon";
  for (const std::string& raw : names) {
    const std::string name = raw == "contour-implicit" ? "contour" : raw;
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      fail(ErrorCode::BadParameters, "unknown check '" + raw + "'");
    }
    if (name == "liouville" && cfg.model != ModelSelect::Natanzon) {
      fail(ErrorCode::BadParameters, "the liouville check compares the target model with its Eckart partner");
    }
  }
  for (const std::string& raw : names) {
    const std::string name = raw == "contour-implicit" ? "contour" : raw;
    if (name == "contour") rep.checks.push_back(check_contour(cfg));
    else if (name == "liouville") rep.checks.push_back(check_liouville(cfg));
    else if (name == "residual") rep.checks.push_back(check_residual(cfg));
    else if (name == "pt-defect") rep.checks.push_back(check_pt_defect(cfg));
    else if (name == "nodes") rep.checks.push_back(check_nodes(cfg));
    else if (name == "numeric-match") rep.checks.push_back(check_numeric(cfg, confirmation));
    else fail(ErrorCode::BadParameters, "unknown check '" + raw + "'");
  }
  return rep;
}

}  // namespace ptdoublet
