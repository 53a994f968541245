#include "ptdoublet/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ptdoublet/error.hpp"
#include "singular.hpp"

namespace ptdoublet {

namespace {

constexpr double kPi = std::numbers::pi;
// Past this |Re t| the sech profile is zero to double precision.
constexpr double kSechCutoff = 300.0;

cplx sech(cplx t) {
  if (std::abs(t.real()) > kSechCutoff) return {0.0, 0.0};
  return 1.0 / std::cosh(t);
}

// Z(t) = 1/2 ln(sinh^2 t + sin^2 eps), arranged to avoid overflow for large |t|.
double z_of(double t, double eps) {
  const double s = std::sin(eps);
  const double a = std::abs(t);
  if (a <= 20.0) {
    const double sh = std::sinh(t);
    return 0.5 * std::log(sh * sh + s * s);
  }
  const double q = std::exp(-2.0 * a);
  return a - std::numbers::ln2 + 0.5 * std::log1p(q * q - 2.0 * q + 4.0 * s * s * q);
}

}  // namespace

EpsilonProfile EpsilonProfile::constant(double eps0) {
  if (!(eps0 > 0.0 && eps0 < kPi / 2)) {
    std::ostringstream msg;
    msg << "eps0 must lie in (0, pi/2), got " << eps0;
    fail(ErrorCode::BadParameters, msg.str());
  }
  return EpsilonProfile(ProfileKind::Constant, eps0);
}

EpsilonProfile EpsilonProfile::decaying(double eps0) {
  if (!(eps0 > 0.0 && eps0 < kPi / 2)) {
    std::ostringstream msg;
    msg << "eps0 must lie in (0, pi/2), got " << eps0;
    fail(ErrorCode::BadParameters, msg.str());
  }
  return EpsilonProfile(ProfileKind::Decaying, eps0);
}

double EpsilonProfile::operator()(double t) const noexcept {
  if (kind_ == ProfileKind::Constant) return eps0_;
  if (std::abs(t) > kSechCutoff) return 0.0;
  return eps0_ / std::cosh(t);
}

cplx EpsilonProfile::operator()(cplx t) const noexcept {
  if (kind_ == ProfileKind::Constant) return eps0_;
  return eps0_ * sech(t);
}

cplx EpsilonProfile::derivative(cplx t) const noexcept {
  if (kind_ == ProfileKind::Constant) return 0.0;
  const cplx s = sech(t);
  if (s == 0.0) return 0.0;
  return -eps0_ * std::tanh(t) * s;
}

cplx EpsilonProfile::second_derivative(cplx t) const noexcept {
  if (kind_ == ProfileKind::Constant) return 0.0;
  const cplx s = sech(t);
  if (s == 0.0) return 0.0;
  const cplx sh = std::sinh(t);
  return eps0_ * (sh * sh - 1.0) * s * s * s;
}

cplx r_of_t(double t, const EpsilonProfile& profile) { return {t, -profile(t)}; }

cplx r_of_t(cplx t, const EpsilonProfile& profile) {
  return t - cplx(0.0, 1.0) * profile(t);
}

cplx dr_dt(cplx t, const EpsilonProfile& profile) {
  return 1.0 - cplx(0.0, 1.0) * profile.derivative(t);
}

cplx d2r_dt2(cplx t, const EpsilonProfile& profile) {
  return -cplx(0.0, 1.0) * profile.second_derivative(t);
}

cplx xi_of_t(double t, const EpsilonProfile& profile) {
  const double eps = profile(t);
  // arctan(tanh t / tan eps) with the quadrant fixed by cosh t sin eps > 0.
  const double omega = std::atan2(std::tanh(t) * std::cos(eps), std::sin(eps));
  return {omega, -z_of(t, eps)};
}

cplx xi_of_r(cplx r) {
  const cplx w = cplx(0.0, 1.0) * std::sinh(r);
  if (std::abs(w) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "xi_of_r: sinh r = 0");
  }
  return {std::arg(w), -std::log(std::abs(w))};
}

cplx xi_of_r(cplx r, cplx reference) {
  const cplx xi = xi_of_r(r);
  const double turns = std::round((reference.real() - xi.real()) / (2.0 * kPi));
  return xi + 2.0 * kPi * turns;
}

cplx dxi_dr(cplx r) {
  const cplx th = std::tanh(r);
  if (std::abs(th) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "dxi_dr: sinh r = 0");
  }
  return cplx(0.0, -1.0) / th;
}

cplx d2xi_dr2(cplx r) {
  const cplx sh = std::sinh(r);
  if (std::abs(sh) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "d2xi_dr2: sinh r = 0");
  }
  return cplx(0.0, 1.0) / (sh * sh);
}

cplx d3xi_dr3(cplx r) {
  const cplx sh = std::sinh(r);
  if (std::abs(sh) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "d3xi_dr3: sinh r = 0");
  }
  return cplx(0.0, -2.0) / (std::tanh(r) * sh * sh);
}

ContourPoint make_point(double t, const EpsilonProfile& profile) {
  ContourPoint p;
  p.t = t;
  p.r = r_of_t(t, profile);
  p.xi = xi_of_t(t, profile);
  p.omega = p.xi.real();
  p.z = -p.xi.imag();
  p.dxi_dr = dxi_dr(p.r);
  p.dr_dt = dr_dt(cplx(t), profile);
  p.d2r_dt2 = d2r_dt2(cplx(t), profile);
  p.dxi_dt = p.dxi_dr * p.dr_dt;
  p.d2xi_dt2 = d2xi_dr2(p.r) * p.dr_dt * p.dr_dt + p.dxi_dr * p.d2r_dt2;
  return p;
}

double xi_singular_distance(cplx xi) noexcept {
  const double k = std::round(xi.real() / kPi);
  return std::abs(xi - cplx(k * kPi, 0.0));
}

double r_singular_distance(cplx r) noexcept {
  const double k = std::round(r.imag() / (kPi / 2));
  return std::abs(r - cplx(0.0, k * kPi / 2));
}

std::size_t ContourGrid::index_near_t(double t) const noexcept {
  const double k = std::round((t - t_min_) / spacing_);
  if (!(k > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(k), points_.size() - 1);
}

std::size_t ContourGrid::nearest_xi_index(cplx xi, double* distance) const noexcept {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const double d = std::abs(points_[k].xi - xi);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (distance != nullptr) *distance = best_d;
  return best;
}

GridPtr build_grid(const EpsilonProfile& profile, double t_min, double t_max, std::size_t n,
                   GridOptions options) {
  if (!(t_min < t_max)) fail(ErrorCode::BadParameters, "build_grid: need t_min < t_max");
  if (n < 3) fail(ErrorCode::BadParameters, "build_grid: need at least 3 points");

  auto grid = std::shared_ptr<ContourGrid>(new ContourGrid(profile));
  grid->t_min_ = t_min;
  grid->t_max_ = t_max;
  grid->spacing_ = (t_max - t_min) / static_cast<double>(n - 1);
  grid->margin_ = options.safety_margin;
  grid->symmetric_ = (t_min == -t_max);

  std::vector<double> ts(n);
  for (std::size_t k = 0; k < n; ++k) {
    ts[k] = t_min + (t_max - t_min) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  if (grid->symmetric_) {
    // Mirror exactly so that Omega is odd and Z even to the last bit.
    for (std::size_t k = 0; k < n / 2; ++k) ts[n - 1 - k] = -ts[k];
    if (n % 2 == 1) ts[n / 2] = 0.0;
  }

  grid->points_.reserve(n);
  for (double t : ts) grid->points_.push_back(make_point(t, profile));

  std::size_t anchor = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(ts[k]) < std::abs(ts[anchor])) anchor = k;
  }
  grid->anchor_ = anchor;

  const ContourReport report = validate_contour(*grid);
  if (report.min_xi_singular_distance <= options.safety_margin ||
      report.min_r_singular_distance <= options.safety_margin) {
    std::ostringstream msg;
    msg << "min distance to singular set is "
        << std::min(report.min_xi_singular_distance, report.min_r_singular_distance)
        << " (xi-plane " << report.min_xi_singular_distance << ", r-plane "
        << report.min_r_singular_distance << "), safety margin " << options.safety_margin;
    fail(ErrorCode::ContourTooCloseToSingularity, msg.str());
  }
  return grid;
}

ContourReport validate_points(std::span<const ContourPoint> points, const EpsilonProfile& profile) {
  ContourReport rep;
  rep.min_xi_singular_distance = std::numeric_limits<double>::infinity();
  rep.min_r_singular_distance = std::numeric_limits<double>::infinity();
  for (const ContourPoint& p : points) {
    const double eps = profile(p.t);
    const double ez = std::exp(p.z);
    const double sin_res = std::abs(std::sinh(p.t) * std::cos(eps) - ez * std::sin(p.omega));
    const double cos_res = std::abs(std::cosh(p.t) * std::sin(eps) - ez * std::cos(p.omega));
    rep.max_sin_residual_abs = std::max(rep.max_sin_residual_abs, sin_res);
    rep.max_cos_residual_abs = std::max(rep.max_cos_residual_abs, cos_res);

    // The scaled residuals compare e^{-Z} sinh t cos eps with sin Omega etc.,
    // which is the same identity with both sides of order one.
    const double scale = std::hypot(std::sinh(p.t), std::sin(eps));
    const double sin_scaled =
        std::abs(std::sinh(p.t) * std::cos(eps) / scale - std::exp(p.z - std::log(scale)) * std::sin(p.omega));
    const double cos_scaled =
        std::abs(std::cosh(p.t) * std::sin(eps) / scale - std::exp(p.z - std::log(scale)) * std::cos(p.omega));
    rep.max_sin_residual = std::max(rep.max_sin_residual, sin_scaled);
    rep.max_cos_residual = std::max(rep.max_cos_residual, cos_scaled);

    const cplx sh = std::sinh(p.r);
    const cplx comp = sh + cplx(0.0, 1.0) * std::exp(cplx(0.0, 1.0) * p.xi);
    rep.max_composition_residual_abs = std::max(rep.max_composition_residual_abs, std::abs(comp));
    rep.max_composition_residual =
        std::max(rep.max_composition_residual, std::abs(comp) / std::abs(sh));

    rep.min_xi_singular_distance = std::min(rep.min_xi_singular_distance, xi_singular_distance(p.xi));
    rep.min_r_singular_distance = std::min(rep.min_r_singular_distance, r_singular_distance(p.r));
  }
  return rep;
}

ContourReport validate_contour(const ContourGrid& grid) {
  return validate_points(grid.points(), grid.profile());
}

BranchTrack::BranchTrack(std::span<const cplx> values, std::size_t anchor) : logs_(values.size()) {
  if (values.empty()) return;
  for (cplx w : values) {
    if (std::abs(w) == 0.0) fail(ErrorCode::SingularPoint, "BranchTrack: zero on the grid");
  }
  logs_[anchor] = std::log(values[anchor]);
  auto step = [&](std::size_t from, std::size_t to) {
    const double turn = std::arg(values[to] / values[from]);
    if (std::abs(turn) > kPi / 2) {
      fail(ErrorCode::BranchUndefined, "BranchTrack: argument jumps by more than pi/2 between grid points");
    }
    logs_[to] = cplx(std::log(std::abs(values[to])), logs_[from].imag() + turn);
  };
  for (std::size_t k = anchor + 1; k < values.size(); ++k) step(k - 1, k);
  for (std::size_t k = anchor; k-- > 0;) step(k + 1, k);
}

cplx BranchTrack::log(cplx w, std::size_t k) const {
  const cplx principal = std::log(w);
  const double turns = std::round((logs_[k].imag() - principal.imag()) / (2.0 * kPi));
  return principal + cplx(0.0, 2.0 * kPi * turns);
}

cplx BranchTrack::pow(cplx w, cplx exponent, std::size_t k) const {
  return std::exp(exponent * log(w, k));
}

cplx BranchTrack::sqrt(cplx w, std::size_t k) const { return pow(w, 0.5, k); }

}  // namespace ptdoublet
