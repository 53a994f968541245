#include "ptdoublet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "ptdoublet/error.hpp"

namespace ptdoublet {

namespace {

using ojson = nlohmann::ordered_json;

ojson number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ojson complex_pair(cplx z) { return ojson::array({number(z.real()), number(z.imag())}); }

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string_view kind_name(ModelKind k) { return k == ModelKind::Eckart ? "eckart" : "natanzon"; }

}  // namespace

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, end);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string contour_csv(const ContourGrid& grid) {
  std::ostringstream out;
  out << "t,re_r,im_r,omega,z,re_dxi_dr,im_dxi_dr\n";
  for (const ContourPoint& p : grid.points()) {
    out << csv_number(p.t) << ',' << csv_number(p.r.real()) << ',' << csv_number(p.r.imag()) << ','
        << csv_number(p.omega) << ',' << csv_number(p.z) << ',' << csv_number(p.dxi_dr.real()) << ','
        << csv_number(p.dxi_dr.imag()) << '\n';
  }
  return out.str();
}

std::string potential_csv(const ContourGrid& grid, const std::vector<cplx>& values) {
  std::ostringstream out;
  out << "t,re_V,im_V\n";
  for (std::size_t k = 0; k < grid.size() && k < values.size(); ++k) {
    out << csv_number(grid[k].t) << ',' << csv_number(values[k].real()) << ',' << csv_number(values[k].imag())
        << '\n';
  }
  return out.str();
}

std::string contour_json(const ContourGrid& grid, const std::vector<cplx>& potential) {
  if (!potential.empty() && potential.size() != grid.size()) {
    fail(ErrorCode::BadParameters, "potential size differs from grid");
  }
  ojson j;
  j["profile"] = grid.profile().kind() == ProfileKind::Constant ? "constant" : "decaying";
  j["eps0"] = grid.profile().eps0();
  j["t_min"] = grid.t_min();
  j["t_max"] = grid.t_max();
  j["n"] = grid.size();
  ojson pts = ojson::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ContourPoint& p = grid[k];
    ojson e;
    e["t"] = p.t;
    e["r"] = complex_pair(p.r);
    e["omega"] = p.omega;
    e["z"] = p.z;
    e["dxi_dr"] = complex_pair(p.dxi_dr);
    if (!potential.empty()) e["V"] = complex_pair(potential[k]);
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  return dump(j);
}

std::string spectrum_json(const SpectrumReport& rep) {
  ojson j;
  j["model"] = "natanzon";
  j["beta"] = rep.beta;
  j["C"] = rep.C;
  ojson levels = ojson::array();
  for (const LevelResult& lv : rep.levels) {
    ojson e;
    if (const auto* d = std::get_if<Doublet>(&lv)) {
      e["N"] = d->N;
      e["kind"] = "doublet";
      e["delta"] = {d->delta_plus, d->delta_minus};
      e["energy"] = {d->e_plus, d->e_minus};
      e["q"] = {1, -1};
    } else if (const auto* s = std::get_if<SingleLevel>(&lv)) {
      e["N"] = s->N;
      e["kind"] = "single";
      e["delta"] = {s->delta};
      e["energy"] = {s->energy};
      e["q"] = {0};
      e["degenerate"] = s->degenerate_doublet;
    } else {
      e["N"] = std::get<NoDoublet>(lv).N;
      e["kind"] = "none";
      e["delta"] = ojson::array();
      e["energy"] = ojson::array();
      e["q"] = ojson::array();
    }
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  return dump(j);
}

std::string spectrum_csv(const SpectrumReport& rep) {
  std::ostringstream out;
  out << "N,q,kind,delta,energy\n";
  for (const LevelResult& lv : rep.levels) {
    if (const auto* d = std::get_if<Doublet>(&lv)) {
      out << d->N << ",1,doublet," << csv_number(d->delta_plus) << ',' << csv_number(d->e_plus) << '\n';
      out << d->N << ",-1,doublet," << csv_number(d->delta_minus) << ',' << csv_number(d->e_minus) << '\n';
    } else if (const auto* s = std::get_if<SingleLevel>(&lv)) {
      out << s->N << ",0,single," << csv_number(s->delta) << ',' << csv_number(s->energy) << '\n';
    } else {
      out << std::get<NoDoublet>(lv).N << ",0,none,,\n";
    }
  }
  return out.str();
}

std::string eckart_spectrum_json(const EckartParams& p, const std::vector<EckartLevel>& levels) {
  ojson j;
  j["model"] = "eckart";
  j["A"] = p.A;
  j["beta"] = p.beta;
  ojson arr = ojson::array();
  for (const EckartLevel& l : levels) {
    ojson e;
    e["N"] = l.N;
    e["kind"] = "single";
    e["delta"] = {l.delta};
    e["energy"] = {l.energy};
    e["q"] = {0};
    arr.push_back(std::move(e));
  }
  j["levels"] = std::move(arr);
  return dump(j);
}

std::string eckart_spectrum_csv(const std::vector<EckartLevel>& levels) {
  std::ostringstream out;
  out << "N,q,kind,delta,energy\n";
  for (const EckartLevel& l : levels) {
    out << l.N << ",0,single," << csv_number(l.delta) << ',' << csv_number(l.energy) << '\n';
  }
  return out.str();
}

std::string wavefunction_csv(const WaveSamples& s) {
  std::ostringstream out;
  out << "t,omega,z,re_psi,im_psi,abs_psi\n";
  const ContourGrid& g = *s.grid;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const cplx v = s.values[k];
    out << csv_number(g[k].t) << ',' << csv_number(g[k].omega) << ',' << csv_number(g[k].z) << ','
        << csv_number(v.real()) << ',' << csv_number(v.imag()) << ',' << csv_number(std::abs(v)) << '\n';
  }
  return out.str();
}

std::string wavefunction_json(const WaveSamples& s, const std::string& model, std::optional<double> residual) {
  ojson j;
  j["model"] = model;
  j["N"] = s.N;
  j["q"] = s.q;
  j["delta"] = s.delta;
  j["energy"] = complex_pair(s.energy);
  j["normalization"] = s.normalization;
  j["node_count"] = s.node_count ? ojson(*s.node_count) : ojson(nullptr);
  if (s.decay_fit) {
    j["decay_slopes"] = {number(s.decay_fit->slope_left), number(s.decay_fit->slope_right)};
  } else {
    j["decay_slopes"] = nullptr;
  }
  j["residual"] = residual ? number(*residual) : ojson(nullptr);
  const ContourGrid& g = *s.grid;
  j["grid"] = {{"profile", g.profile().kind() == ProfileKind::Constant ? "constant" : "decaying"},
               {"eps0", g.profile().eps0()},
               {"t_min", g.t_min()},
               {"t_max", g.t_max()},
               {"n", g.size()}};
  return dump(j);
}

std::string eigen_dump_json(const Confirmation& c, const EigenDumpMeta& meta) {
  ojson j;
  j["model"] = meta.model.empty() ? std::string(kind_name(c.kind)) : meta.model;
  j["grid"] = {{"profile", meta.profile}, {"eps0", meta.eps0}, {"T", meta.T}, {"n_coarse", c.n_coarse},
               {"n_fine", c.n_fine}};
  ojson raw = ojson::array();
  for (const cplx& z : c.raw) raw.push_back(complex_pair(z));
  j["raw_eigenvalues"] = std::move(raw);
  ojson filt = ojson::array();
  for (const cplx& z : c.filtered) filt.push_back(complex_pair(z));
  j["filtered_eigenvalues"] = std::move(filt);
  ojson levels = ojson::array();
  for (const ConfirmedLevel& l : c.levels) {
    levels.push_back({{"coarse", complex_pair(l.coarse)},
                      {"fine", complex_pair(l.fine)},
                      {"extrapolated", complex_pair(l.extrapolated)},
                      {"tail_ratio", number(l.tail_ratio)},
                      {"winding", number(l.winding)},
                      {"node_count", l.node_count ? ojson(*l.node_count) : ojson(nullptr)}});
  }
  j["refined"] = std::move(levels);
  ojson matches = ojson::array();
  for (const EigenMatch& m : c.matches) {
    matches.push_back({{"analytic", complex_pair(m.analytic_energy)},
                       {"numeric", complex_pair(m.numeric_energy)},
                       {"relative_error", number(m.relative_error)},
                       {"matched", m.matched},
                       {"node_count", m.node_count ? ojson(*m.node_count) : ojson(nullptr)}});
  }
  j["matches"] = std::move(matches);
  return dump(j);
}

std::string verification_json(const VerificationReport& rep) {
  ojson j;
  j["model"] = rep.model;
  j["all_passed"] = rep.all_passed();
  ojson checks = ojson::array();
  for (const CheckResult& c : rep.checks) {
    ojson values = ojson::object();
    for (const CheckValue& v : c.values) values[v.key] = number(v.value);
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"values", std::move(values)}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  return dump(j);
}

std::string verification_csv(const VerificationReport& rep) {
  std::ostringstream out;
  out << "check,passed,key,value\n";
  for (const CheckResult& c : rep.checks) {
    for (const CheckValue& v : c.values) {
      out << c.name << ',' << (c.passed ? 1 : 0) << ',' << v.key << ',' << csv_number(v.value) << '\n';
    }
    if (c.values.empty()) out << c.name << ',' << (c.passed ? 1 : 0) << ",,\n";
  }
  return out.str();
}

}  // namespace ptdoublet
