#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ptdoublet {

using cplx = std::complex<double>;

enum class ProfileKind { Constant, Decaying };

/// Downward shift eps(t) of the integration path r(t) = t - i eps(t).
///
/// The decaying kind is eps0 / cosh(t): smooth, even, and it returns the path
/// to the real axis at both ends. Both kinds continue analytically into the
/// strip |Im t| < pi/2, which node counting relies on.
class EpsilonProfile {
 public:
  static EpsilonProfile constant(double eps0);
  static EpsilonProfile decaying(double eps0);

  ProfileKind kind() const noexcept { return kind_; }
  double eps0() const noexcept { return eps0_; }

  double operator()(double t) const noexcept;
  cplx operator()(cplx t) const noexcept;
  cplx derivative(cplx t) const noexcept;
  cplx second_derivative(cplx t) const noexcept;

 private:
  EpsilonProfile(ProfileKind kind, double eps0) : kind_(kind), eps0_(eps0) {}

  ProfileKind kind_;
  double eps0_;
};

cplx r_of_t(double t, const EpsilonProfile& profile);
cplx r_of_t(cplx t, const EpsilonProfile& profile);
cplx dr_dt(cplx t, const EpsilonProfile& profile);
cplx d2r_dt2(cplx t, const EpsilonProfile& profile);

/// Image of r(t) under sinh r = -i exp(i xi), written as Omega(t) - i Z(t).
cplx xi_of_t(double t, const EpsilonProfile& profile);

/// Principal solution of exp(i xi) = i sinh r. It coincides with xi_of_t on
/// every shifted path because i sinh r stays in the right half-plane there.
cplx xi_of_r(cplx r);
/// Same, shifted by a multiple of 2 pi onto the sheet nearest `reference`.
cplx xi_of_r(cplx r, cplx reference);

// Closed-form derivatives of xi(r): -i coth r, i / sinh^2 r, -2i cosh r / sinh^3 r.
cplx dxi_dr(cplx r);
cplx d2xi_dr2(cplx r);
cplx d3xi_dr3(cplx r);

struct ContourPoint {
  double t = 0.0;
  cplx r;
  cplx xi;
  double omega = 0.0;  // Re xi
  double z = 0.0;      // -Im xi
  cplx dxi_dr;
  cplx dr_dt;
  cplx d2r_dt2;
  cplx dxi_dt;
  cplx d2xi_dt2;
};

ContourPoint make_point(double t, const EpsilonProfile& profile);

struct GridOptions {
  double safety_margin = 0.05;
};

class ContourGrid;
using GridPtr = std::shared_ptr<const ContourGrid>;

/// Uniform-in-t sampling of the path. Immutable once built.
class ContourGrid {
 public:
  const EpsilonProfile& profile() const noexcept { return profile_; }
  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }
  double spacing() const noexcept { return spacing_; }
  double safety_margin() const noexcept { return margin_; }
  std::size_t size() const noexcept { return points_.size(); }

  std::span<const ContourPoint> points() const noexcept { return points_; }
  const ContourPoint& operator[](std::size_t k) const { return points_[k]; }

  /// Grid point closest to t = 0; branch choices are anchored there.
  std::size_t anchor_index() const noexcept { return anchor_; }
  bool is_symmetric() const noexcept { return symmetric_; }

  /// Index of the grid abscissa nearest Re t (clamped to the grid).
  std::size_t index_near_t(double t) const noexcept;
  /// Index of the grid point nearest `xi` in the xi-plane, with its distance.
  std::size_t nearest_xi_index(cplx xi, double* distance = nullptr) const noexcept;

 private:
  friend GridPtr build_grid(const EpsilonProfile&, double, double, std::size_t, GridOptions);
  ContourGrid(EpsilonProfile profile) : profile_(profile) {}

  EpsilonProfile profile_;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
  double spacing_ = 0.0;
  double margin_ = 0.0;
  std::size_t anchor_ = 0;
  bool symmetric_ = false;
  std::vector<ContourPoint> points_;
};

/// Throws BadParameters for t_min >= t_max or n < 3, and
/// ContourTooCloseToSingularity when a point comes within the safety margin of
/// the singular sets (xi in pi Z, where exp(2 i xi) = 1, or r in i pi/2 Z,
/// where sinh r or cosh r vanishes).
GridPtr build_grid(const EpsilonProfile& profile, double t_min, double t_max, std::size_t n,
                   GridOptions options = {});

struct ContourReport {
  // |sinh t cos eps - e^Z sin Omega| and |cosh t sin eps - e^Z cos Omega|,
  // both divided by e^Z = |sinh r| (scaled) and raw (abs).
  double max_sin_residual = 0.0;
  double max_cos_residual = 0.0;
  double max_sin_residual_abs = 0.0;
  double max_cos_residual_abs = 0.0;
  // |sinh r + i exp(i xi)| / |sinh r| and raw.
  double max_composition_residual = 0.0;
  double max_composition_residual_abs = 0.0;
  double min_xi_singular_distance = 0.0;
  double min_r_singular_distance = 0.0;
};

ContourReport validate_contour(const ContourGrid& grid);
ContourReport validate_points(std::span<const ContourPoint> points, const EpsilonProfile& profile);

double xi_singular_distance(cplx xi) noexcept;
double r_singular_distance(cplx r) noexcept;

/// Continuous logarithm of a family of values sampled along a grid, anchored
/// at the principal value at `anchor`. Used for every multivalued factor
/// (square roots, complex powers) so that branch choices never jump between
/// neighbouring grid points.
class BranchTrack {
 public:
  BranchTrack() = default;
  BranchTrack(std::span<const cplx> values, std::size_t anchor);

  std::size_t size() const noexcept { return logs_.size(); }
  cplx log_at(std::size_t k) const { return logs_[k]; }

  /// log w on the sheet whose imaginary part is nearest the track at k.
  cplx log(cplx w, std::size_t k) const;
  cplx pow(cplx w, cplx exponent, std::size_t k) const;
  cplx sqrt(cplx w, std::size_t k) const;

 private:
  std::vector<cplx> logs_;
};

}  // namespace ptdoublet
