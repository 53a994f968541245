#include "ptdoublet/wavefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <tuple>

#include "ptdoublet/error.hpp"
#include "singular.hpp"

namespace ptdoublet {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

std::pair<cplx, cplx> jacobi_params_for(const UVParams& uv, JacobiConvention conv) {
  if (conv == JacobiConvention::Standard) return {2.0 * uv.u, 2.0 * uv.v};
  return {0.5 * uv.u, 0.5 * uv.v};
}

// Generalized binomial coefficient with complex top entry.
cplx binom(cplx x, int k) {
  cplx out = 1.0;
  for (int j = 0; j < k; ++j) out *= (x - double(j)) / double(k - j);
  return out;
}

cplx jacobi_explicit(int N, cplx a, cplx b, cplx z) {
  cplx sum = 0.0;
  const cplx zm = 0.5 * (z - 1.0);
  const cplx zp = 0.5 * (z + 1.0);
  for (int s = 0; s <= N; ++s) {
    sum += binom(cplx(N) + a, N - s) * binom(cplx(N) + b, s) * std::pow(zm, s) * std::pow(zp, N - s);
  }
  return sum;
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    constexpr int n = 10;
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.x[i] = x;
      g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

// Integral of f along the segment a -> b.
cplx segment_integral(const std::function<cplx(cplx)>& f, cplx a, cplx b, double panel) {
  const GaussRule& g = gauss_rule();
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / panel)));
  cplx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const cplx pa = a + (b - a) * (double(p) / panels);
    const cplx pb = a + (b - a) * (double(p + 1) / panels);
    const cplx mid = 0.5 * (pa + pb);
    const cplx half = 0.5 * (pb - pa);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const cplx v = f(mid + half * g.x[i]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        fail(ErrorCode::WindingNotInteger, "log-derivative is not finite on the strip boundary");
      }
      total += g.w[i] * v * half;
    }
  }
  return total;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

}  // namespace

UVParams derive_uv(int N, double delta, double beta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    std::ostringstream msg;
    msg << "delta must be positive, got " << delta;
    fail(ErrorCode::InvalidDelta, msg.str());
  }
  if (N < 0) fail(ErrorCode::BadParameters, "N must be non-negative");
  UVParams uv;
  uv.u = 0.5 * cplx(delta, -beta / delta);
  uv.v = 0.5 * cplx(delta, beta / delta);
  const double A = delta + N + 1.0;
  uv.a = 2.0 * A - N - 1.0;
  uv.b = -double(N);
  uv.c = 1.0 + 2.0 * uv.u;

  const double E = eckart_energy(delta, beta);
  const double scale = std::max(1.0, std::abs(E) + 2.0 * beta);
  if (std::abs(4.0 * uv.u * uv.u + 2.0 * kI * beta + E) > 1e-12 * scale ||
      std::abs(4.0 * uv.v * uv.v - 2.0 * kI * beta + E) > 1e-12 * scale) {
    fail(ErrorCode::InvalidDelta, "u, v fail 4u^2 = -2i beta - E");
  }
  return uv;
}

cplx jacobi_poly(int N, cplx a, cplx b, cplx z) {
  if (N < 0) return 0.0;
  if (N == 0) return 1.0;
  cplx p0 = 1.0;
  cplx p1 = (a + 1.0) + (a + b + 2.0) * (z - 1.0) * 0.5;
  for (int n = 2; n <= N; ++n) {
    const cplx s = 2.0 * double(n) + a + b;
    const cplx a1 = 2.0 * double(n) * (double(n) + a + b) * (s - 2.0);
    if (std::abs(a1) == 0.0) return jacobi_explicit(N, a, b, z);
    const cplx a2 = (s - 1.0) * (a * a - b * b);
    const cplx a3 = (s - 2.0) * (s - 1.0) * s;
    const cplx a4 = 2.0 * (double(n) + a - 1.0) * (double(n) + b - 1.0) * s;
    const cplx p2 = ((a2 + a3 * z) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

cplx jacobi_poly_derivative(int N, cplx a, cplx b, cplx z) {
  if (N <= 0) return 0.0;
  return 0.5 * (double(N) + a + b + 1.0) * jacobi_poly(N - 1, a + 1.0, b + 1.0, z);
}

cplx hyp2f1_terminating(cplx a, int N, cplx c, cplx z) {
  if (N < 0) fail(ErrorCode::BadParameters, "terminating 2F1 needs b = -N with N >= 0");
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 0; k < N; ++k) {
    const cplx ck = c + double(k);
    if (std::abs(ck) == 0.0) {
      std::ostringstream msg;
      msg << "(c)_k vanishes at k=" << k + 1 << " for c=(" << c.real() << ", " << c.imag() << ")";
      fail(ErrorCode::BadParameters, msg.str());
    }
    term *= (a + double(k)) * (double(k) - N) / (ck * double(k + 1)) * z;
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------- Eckart

EckartState::EckartState(EckartParams p, int N, GridPtr grid, JacobiConvention conv)
    : p_(p), N_(N), grid_(std::move(grid)) {
  validate(p_);
  if (N < 0) fail(ErrorCode::BadParameters, "N must be non-negative");
  delta_ = p_.A - N - 1.0;
  if (!(delta_ > 0.0)) {
    std::ostringstream msg;
    msg << "N=" << N << " needs A - N - 1 > 0 (A=" << p_.A << ")";
    fail(ErrorCode::InadmissibleN, msg.str());
  }
  std::tie(alpha_, beta_j_) = jacobi_params_for(derive_uv(N, delta_, p_.beta), conv);
  std::vector<cplx> sh(grid_->size());
  for (std::size_t k = 0; k < sh.size(); ++k) sh[k] = std::sinh((*grid_)[k].r);
  log_sinh_ = BranchTrack(sh, grid_->anchor_index());
}

cplx EckartState::eval(cplx r, cplx log_sinh) const {
  const cplx coth = 1.0 / std::tanh(r);
  return std::exp(-delta_ * log_sinh + kI * (p_.beta / delta_) * r) * jacobi_poly(N_, alpha_, beta_j_, coth);
}

cplx EckartState::at(std::size_t k) const { return eval((*grid_)[k].r, log_sinh_.log_at(k)); }

cplx EckartState::operator()(cplx r) const {
  const cplx sh = std::sinh(r);
  if (std::abs(sh) < detail::kSingularTolerance) fail(ErrorCode::SingularPoint, "psi_eckart: sinh r = 0");
  const std::size_t k = grid_->index_near_t(r.real());
  return eval(r, log_sinh_.log(sh, k));
}

cplx EckartState::log_derivative_r(cplx r) const {
  const cplx sh = std::sinh(r);
  if (std::abs(sh) < detail::kSingularTolerance) fail(ErrorCode::SingularPoint, "psi_eckart: sinh r = 0");
  const cplx coth = std::cosh(r) / sh;
  cplx out = -delta_ * coth + kI * (p_.beta / delta_);
  if (N_ > 0) {
    const cplx P = jacobi_poly(N_, alpha_, beta_j_, coth);
    const cplx dP = jacobi_poly_derivative(N_, alpha_, beta_j_, coth);
    out -= dP / P / (sh * sh);
  }
  return out;
}

cplx EckartState::log_derivative_t(cplx t) const {
  const EpsilonProfile& prof = grid_->profile();
  return dr_dt(t, prof) * log_derivative_r(r_of_t(t, prof));
}

// ---------------------------------------------------------------- target model

NatanzonState::NatanzonState(NatanzonParams p, int N, Branch q, GridPtr grid, JacobiConvention conv)
    : p_(p), N_(N), q_(q), grid_(std::move(grid)) {
  validate(p_);
  delta_ = branch_delta(N, q, p_.beta, p_.C);
  init(conv);
}

NatanzonState::NatanzonState(NatanzonParams p, int N, Branch q, double delta, GridPtr grid,
                             JacobiConvention conv)
    : p_(p), N_(N), q_(q), delta_(delta), grid_(std::move(grid)) {
  validate(p_);
  init(conv);
}

void NatanzonState::init(JacobiConvention conv) {
  std::tie(alpha_, beta_j_) = jacobi_params_for(derive_uv(N_, delta_, p_.beta), conv);
  const std::size_t n = grid_->size();
  const std::size_t anchor = grid_->anchor_index();
  std::vector<cplx> w1(n), w2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx xi = (*grid_)[k].xi;
    w1[k] = 1.0 - std::exp(-2.0 * kI * xi);
    w2[k] = 1.0 - std::exp(2.0 * kI * xi);
  }
  quarter_ = BranchTrack(w1, anchor);
  root_ = BranchTrack(w2, anchor);
  std::vector<cplx> bb(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = -kI * root_.sqrt(w2[k], k);
    const cplx b = std::exp(kI * (*grid_)[k].xi);
    // a^2 - b^2 = -1, so a - b = -1/(a + b) avoids the cancellation.
    bb[k] = std::abs(a + b) > std::abs(a - b) ? -1.0 / (a + b) : a - b;
  }
  b_log_ = BranchTrack(bb, anchor);
}

cplx NatanzonState::eval_with_branch(cplx xi, std::size_t k) const {
  const cplx e1 = std::exp(kI * xi);
  const cplx w1 = 1.0 - 1.0 / (e1 * e1);
  const cplx w2 = 1.0 - e1 * e1;
  if (std::abs(w1) < detail::kSingularTolerance || std::abs(w2) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "psi_natanzon: singular point of the map");
  }
  const cplx a = -kI * root_.sqrt(w2, k);
  const cplx B = std::abs(a + e1) > std::abs(a - e1) ? -1.0 / (a + e1) : a - e1;
  const cplx arg = quarter_.sqrt(w1, k);
  const cplx log_val = -kI * delta_ * xi + 0.25 * quarter_.log(w1, k) +
                       kI * (p_.beta / delta_) * b_log_.log(B, k);
  return std::exp(log_val) * jacobi_poly(N_, alpha_, beta_j_, arg);
}

cplx NatanzonState::at(std::size_t k) const { return eval_with_branch((*grid_)[k].xi, k); }

cplx NatanzonState::operator()(cplx xi) const {
  double dist = 0.0;
  const std::size_t k = grid_->nearest_xi_index(xi, &dist);
  const std::size_t lo = k == 0 ? 0 : k - 1;
  const std::size_t hi = std::min(k + 1, grid_->size() - 1);
  const double local = std::max(std::abs((*grid_)[hi].xi - (*grid_)[k].xi),
                                std::abs((*grid_)[k].xi - (*grid_)[lo].xi));
  if (dist > std::max(grid_->safety_margin(), local)) {
    fail(ErrorCode::BranchUndefined, "psi_natanzon: xi too far from the contour");
  }
  return eval_with_branch(xi, k);
}

cplx NatanzonState::log_derivative_t(cplx t) const {
  const EpsilonProfile& prof = grid_->profile();
  const cplx r = r_of_t(t, prof);
  const cplx sh = std::sinh(r);
  const cplx ch = std::cosh(r);
  if (std::abs(sh) < detail::kSingularTolerance || std::abs(ch) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "psi_natanzon: singular point of the map");
  }
  const cplx coth = ch / sh;
  cplx out = -delta_ * coth + kI * (p_.beta / delta_) - 0.5 / (sh * ch);
  if (N_ > 0) {
    const cplx P = jacobi_poly(N_, alpha_, beta_j_, coth);
    const cplx dP = jacobi_poly_derivative(N_, alpha_, beta_j_, coth);
    out -= dP / P / (sh * sh);
  }
  return dr_dt(t, prof) * out;
}

cplx psi_eckart(cplx r, const EckartParams& p, int N, const GridPtr& grid) {
  return EckartState(p, N, grid)(r);
}

cplx psi_natanzon(cplx xi, int N, Branch q, const NatanzonParams& p, const GridPtr& grid) {
  return NatanzonState(p, N, q, grid)(xi);
}

// ---------------------------------------------------------------- samples

WaveSamples sample(const EckartState& s) {
  WaveSamples out;
  out.grid = s.grid();
  out.values.resize(s.grid()->size());
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = s.at(k);
  out.N = s.N();
  out.delta = s.delta();
  out.energy = s.energy();
  auto keep = std::make_shared<EckartState>(s);
  out.log_derivative = [keep](cplx t) { return keep->log_derivative_t(t); };
  return out;
}

WaveSamples sample(const NatanzonState& s) {
  WaveSamples out;
  out.grid = s.grid();
  out.values.resize(s.grid()->size());
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = s.at(k);
  out.q = static_cast<int>(s.branch());
  out.N = s.N();
  out.delta = s.delta();
  out.energy = s.energy();
  auto keep = std::make_shared<NatanzonState>(s);
  out.log_derivative = [keep](cplx t) { return keep->log_derivative_t(t); };
  return out;
}

std::vector<std::vector<double>> central_weights(int half_width) {
  // Fornberg (1988) for nodes -hw..hw about 0, derivative orders 0..2.
  const int m = 2;
  const int n = 2 * half_width + 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - half_width;
  std::vector<std::vector<std::vector<double>>> d(
      m + 1, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      for (int k = std::min(i, m); k >= 0; --k) {
        d[k][i][j] = (x[i] * d[k][i - 1][j] - (k > 0 ? k * d[k - 1][i - 1][j] : 0.0)) / c3;
      }
    }
    for (int k = std::min(i, m); k >= 0; --k) {
      d[k][i][i] = c1 / c2 * ((k > 0 ? k * d[k - 1][i - 1][i - 1] : 0.0) - x[i - 1] * d[k][i - 1][i - 1]);
    }
    c1 = c2;
  }
  std::vector<std::vector<double>> out(m + 1, std::vector<double>(n));
  for (int k = 0; k <= m; ++k) {
    for (int j = 0; j < n; ++j) out[k][j] = d[k][n - 1][j];
  }
  return out;
}

std::vector<double> schrodinger_residual_profile(const WaveSamples& samples,
                                                 const std::vector<cplx>& potential, cplx energy,
                                                 Variable var, int half_width) {
  const ContourGrid& g = *samples.grid;
  const std::size_t n = samples.values.size();
  if (half_width < 1) fail(ErrorCode::BadParameters, "stencil half-width must be positive");
  if (n != g.size() || potential.size() != n) {
    fail(ErrorCode::BadParameters, "samples, grid and potential sizes differ");
  }
  if (n < static_cast<std::size_t>(2 * half_width + 1) || n < 7) {
    std::ostringstream msg;
    msg << n << " points cannot carry a central stencil of half-width " << half_width;
    fail(ErrorCode::GridTooCoarse, msg.str());
  }
  const auto w = central_weights(half_width);
  const double h = g.spacing();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = half_width; k + half_width < n; ++k) {
    cplx d1 = 0.0, d2 = 0.0;
    for (int j = -half_width; j <= half_width; ++j) {
      const cplx v = samples.values[k + j];
      d1 += w[1][j + half_width] * v;
      d2 += w[2][j + half_width] * v;
    }
    d1 /= h;
    d2 /= h * h;
    const ContourPoint& p = g[k];
    const cplx st = var == Variable::R ? p.dr_dt : p.dxi_dt;
    const cplx stt = var == Variable::R ? p.d2r_dt2 : p.d2xi_dt2;
    const cplx pss = (d2 - d1 * stt / st) / (st * st);
    const cplx psi = samples.values[k];
    const cplx vme = potential[k] - energy;
    const double denom = std::abs(psi) * std::max(std::abs(vme), 1.0);
    out[k] = denom > 0.0 ? std::abs(-pss + vme * psi) / denom : std::numeric_limits<double>::infinity();
  }
  return out;
}

double schrodinger_residual(const WaveSamples& samples, const std::vector<cplx>& potential, cplx energy,
                            Variable var, int half_width) {
  const auto prof = schrodinger_residual_profile(samples, potential, energy, var, half_width);
  double worst = 0.0;
  for (double v : prof) {
    if (!std::isnan(v)) worst = std::max(worst, v);
  }
  return worst;
}

double winding_number(const std::function<cplx(cplx)>& f, double t_lo, double t_hi, double below,
                      double above, double panel) {
  const cplx z0(t_lo, -below), z1(t_hi, -below), z2(t_hi, above), z3(t_lo, above);
  const cplx total = segment_integral(f, z0, z1, panel) + segment_integral(f, z1, z2, panel) +
                     segment_integral(f, z2, z3, panel) + segment_integral(f, z3, z0, panel);
  return (total / (2.0 * kPi * kI)).real();
}

int count_nodes(const WaveSamples& samples, const StripRect& rect) {
  if (!samples.log_derivative) fail(ErrorCode::BadParameters, "samples carry no analytic continuation");
  const double lo = samples.grid->t_min() + rect.margin;
  const double hi = samples.grid->t_max() - rect.margin;
  if (!(lo < hi) || !(rect.below >= 0.0) || !(rect.above >= 0.0) || rect.below + rect.above <= 0.0) {
    fail(ErrorCode::BadParameters, "empty counting rectangle");
  }
  const double w = winding_number(samples.log_derivative, lo, hi, rect.below, rect.above, rect.panel);
  const double nearest = std::round(w);
  if (std::abs(w - nearest) > 0.1) {
    std::ostringstream msg;
    msg << "winding " << w << " is not an integer; refine or move the strip";
    fail(ErrorCode::WindingNotInteger, msg.str());
  }
  return static_cast<int>(nearest);
}

DecayFit decay_rate(const WaveSamples& samples, std::optional<double> t_asym) {
  const ContourGrid& g = *samples.grid;
  const double ta = t_asym.value_or(0.5 * std::max(std::abs(g.t_min()), std::abs(g.t_max())));
  std::vector<double> zl, yl, zr, yr;
  for (std::size_t k = 0; k < samples.values.size(); ++k) {
    const double a = std::abs(samples.values[k]);
    if (!(a >= 1e-250) || !std::isfinite(a)) continue;
    if (g[k].t <= -ta) {
      zl.push_back(g[k].z);
      yl.push_back(std::log(a));
    } else if (g[k].t >= ta) {
      zr.push_back(g[k].z);
      yr.push_back(std::log(a));
    }
  }
  if (zl.size() < 20 || zr.size() < 20) {
    std::ostringstream msg;
    msg << "tails hold " << zl.size() << " and " << zr.size() << " usable points, need 20 each";
    fail(ErrorCode::TailTooShort, msg.str());
  }
  return {slope_fit(zl, yl), slope_fit(zr, yr)};
}

double pt_symmetry_defect(const WaveSamples& samples) {
  const ContourGrid& g = *samples.grid;
  if (!g.is_symmetric()) {
    fail(ErrorCode::AsymmetricGrid, "PT defect needs a grid symmetric about t = 0");
  }
  const std::size_t n = samples.values.size();
  double peak = 0.0;
  for (const cplx& v : samples.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(std::abs(samples.values[n - 1 - k]) - std::abs(samples.values[k])));
  }
  return worst / peak;
}

void annotate(WaveSamples& samples, const StripRect& rect) {
  samples.decay_fit = decay_rate(samples);
  samples.node_count = count_nodes(samples, rect);
}

MapSpread liouville_map_spread(const NatanzonState& d, const EckartState& e) {
  const ContourGrid& g = *d.grid();
  if (e.grid()->size() != g.size()) fail(ErrorCode::BadParameters, "states live on different grids");
  std::vector<cplx> xp(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) xp[k] = g[k].dxi_dr;
  const BranchTrack root(xp, g.anchor_index());
  std::vector<cplx> ratio(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) ratio[k] = d.at(k) / (root.sqrt(xp[k], k) * e.at(k));
  MapSpread out;
  out.constant = ratio[g.anchor_index()];
  for (const cplx& q : ratio) out.relative_spread = std::max(out.relative_spread, std::abs(q - out.constant));
  out.relative_spread /= std::abs(out.constant);
  return out;
}

}  // namespace ptdoublet
