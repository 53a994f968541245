#include <ostream>
#include <variant>

#include "ptdoublet/cli.hpp"
#include "ptdoublet/error.hpp"
#include "ptdoublet/io.hpp"
#include "ptdoublet/potentials.hpp"
#include "ptdoublet/wavefn.hpp"

namespace ptdoublet::cli {

namespace {

std::string ext(const RunConfig& cfg) { return cfg.format == OutputFormat::Json ? ".json" : ".csv"; }

std::string model_name(const RunConfig& cfg) { return cfg.model == ModelSelect::Eckart ? "eckart" : "natanzon"; }

void write(const RunConfig& cfg, const std::string& name, const std::string& content, std::ostream& out) {
  const std::filesystem::path path = cfg.out / name;
  write_atomic(path, content);
  out << "wrote " << path.string() << '\n';
}

std::vector<cplx> potential_on(const RunConfig& cfg, const GridPtr& grid) {
  if (cfg.model == ModelSelect::Natanzon) return NatanzonPotential({cfg.beta, cfg.C}, grid).values();
  const EckartParams p{cfg.A, cfg.beta};
  std::vector<cplx> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = v_eckart((*grid)[k].r, p);
  return v;
}

// Decay and nodes are reported when they can be measured; a failure to
// measure is not a failure of the command.
void try_annotate(WaveSamples& s) {
  try {
    s.decay_fit = decay_rate(s);
  } catch (const Error&) {
  }
  try {
    s.node_count = count_nodes(s);
  } catch (const Error&) {
  }
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  if (cfg.model == ModelSelect::Eckart) {
    const EckartParams p{cfg.A, cfg.beta};
    const std::vector<EckartLevel> levels = eckart_levels(p);
    for (const EckartLevel& l : levels) out << "N=" << l.N << " delta=" << l.delta << " E=" << l.energy << '\n';
    write(cfg, "spectrum" + ext(cfg),
          cfg.format == OutputFormat::Json ? eckart_spectrum_json(p, levels) : eckart_spectrum_csv(levels), out);
    return kOk;
  }
  const NatanzonParams p{cfg.beta, cfg.C};
  validate(p);
  const SpectrumReport rep = spectrum_report(p, cfg.nmax);
  for (const LevelResult& lv : rep.levels) {
    if (const auto* d = std::get_if<Doublet>(&lv)) {
      out << "N=" << d->N << " doublet E+=" << d->e_plus << " E-=" << d->e_minus << '\n';
    } else if (const auto* s = std::get_if<SingleLevel>(&lv)) {
      out << "N=" << s->N << " single E=" << s->energy << '\n';
    } else {
      out << "N=" << std::get<NoDoublet>(lv).N << " none\n";
    }
  }
  write(cfg, "spectrum" + ext(cfg), cfg.format == OutputFormat::Json ? spectrum_json(rep) : spectrum_csv(rep), out);
  return kOk;
}

int cmd_wavefunction(const RunConfig& cfg, std::ostream& out) {
  const int N = cfg.N.value_or(0);
  const GridPtr grid = make_grid(cfg);
  const std::vector<cplx> v = potential_on(cfg, grid);
  WaveSamples s;
  double residual = 0.0;
  std::string stem = "wavefunction_" + model_name(cfg) + "_N" + std::to_string(N);
  if (cfg.model == ModelSelect::Eckart) {
    const EckartState st({cfg.A, cfg.beta}, N, grid);
    s = sample(st);
    residual = schrodinger_residual(s, v, st.energy(), Variable::R);
  } else {
    const NatanzonState st({cfg.beta, cfg.C}, N, cfg.branch, grid);
    s = sample(st);
    residual = schrodinger_residual(s, v, st.energy(), Variable::Xi);
    stem += cfg.branch == Branch::Plus ? "_plus" : "_minus";
  }
  try_annotate(s);
  out << "N=" << N << " delta=" << s.delta << " E=" << s.energy.real() << " residual=" << residual;
  if (s.decay_fit) out << " slopes=" << s.decay_fit->slope_left << ',' << s.decay_fit->slope_right;
  if (s.node_count) out << " nodes=" << *s.node_count;
  out << '\n';
  write(cfg, stem + ".csv", wavefunction_csv(s), out);
  write(cfg, stem + ".json", wavefunction_json(s, model_name(cfg), residual), out);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const VerifyConfig vc = to_verify_config(cfg);
  Confirmation numeric;
  const VerificationReport rep = run_verification(vc, cfg.checks, &numeric);
  for (const CheckResult& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ')';
    out << '\n';
  }
  write(cfg, "verification" + ext(cfg),
        cfg.format == OutputFormat::Json ? verification_json(rep) : verification_csv(rep), out);
  if (numeric.n_coarse > 0) {
    EigenDumpMeta meta;
    meta.model = model_name(cfg);
    meta.profile = cfg.model == ModelSelect::Eckart ? "constant" : "decaying";
    meta.eps0 = cfg.model == ModelSelect::Eckart ? cfg.eps0 : cfg.numeric_eps0;
    meta.T = cfg.T;
    write(cfg, "eigenvalues.json", eigen_dump_json(numeric, meta), out);
  }
  return rep.all_passed() ? kOk : kCheckFailed;
}

int cmd_contour_export(const RunConfig& cfg, std::ostream& out) {
  const GridPtr grid = make_grid(cfg);
  const std::vector<cplx> v = potential_on(cfg, grid);
  if (cfg.format == OutputFormat::Json) {
    write(cfg, "contour.json", contour_json(*grid, v), out);
  } else {
    write(cfg, "contour.csv", contour_csv(*grid), out);
    write(cfg, "potential.csv", potential_csv(*grid, v), out);
  }
  return kOk;
}

}  // namespace ptdoublet::cli
