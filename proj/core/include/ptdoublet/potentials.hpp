#pragma once

#include <vector>

#include "ptdoublet/contour.hpp"

namespace ptdoublet {

struct EckartParams {
  double A = 3.0;
  double beta = 1.0;
};

struct NatanzonParams {
  double beta = 1.0;
  double C = 10.0;
};

// Both throw BadParameters. beta = 0 is accepted as the Hermitian limit.
void validate(const EckartParams& p);
void validate(const NatanzonParams& p);

/// A(A-1)/sinh^2 r - 2 i beta coth r. Throws SingularPoint at sinh r = 0.
cplx v_eckart(cplx r, const EckartParams& p);

/// Target potential written in r: 3/(4 cosh^4 r) - C/cosh^2 r + 2 i beta tanh r.
/// Throws SingularPoint at cosh r = 0.
cplx v_natanzon_in_r(cplx r, const NatanzonParams& p);

/// V - E of the target model in r for a state (N, delta).
cplx v_d_in_r(cplx r, int N, double delta, double beta);

/// Target potential in xi:
///   (3/4)/(1 - e^{2i xi})^2 - C/(1 - e^{2i xi}) + 2 beta e^{i xi} / sqrt(1 - e^{2i xi}).
/// The square root equals cosh r on the contour and is tracked along the grid
/// from its principal value at the anchor.
class NatanzonPotential {
 public:
  NatanzonPotential(NatanzonParams p, GridPtr grid);

  const NatanzonParams& params() const noexcept { return p_; }
  const GridPtr& grid() const noexcept { return grid_; }

  /// Value at grid point k.
  cplx at(std::size_t k) const;
  /// Value at an arbitrary xi near the grid. Throws BranchUndefined when xi is
  /// farther from every grid point than max(safety margin, local spacing).
  cplx operator()(cplx xi) const;
  /// Same with the branch taken from grid point k (no proximity check).
  cplx eval_with_branch(cplx xi, std::size_t k) const;

  std::vector<cplx> values() const;

 private:
  NatanzonParams p_;
  GridPtr grid_;
  BranchTrack root_;  // sqrt(1 - e^{2i xi}) along the grid
};

cplx v_natanzon(cplx xi, const NatanzonParams& p, const GridPtr& grid);

/// [V^E(r) - E^E] - { xi'^2 [V^D(xi(r)) - E^D] + (3/4)(xi''/xi')^2 - (1/2) xi'''/xi' }
/// at grid point k, with closed-form derivatives of xi(r).
cplx liouville_residual(std::size_t k, cplx e_e, cplx e_d, const EckartParams& p_e,
                        const NatanzonPotential& v_d);
/// Same at an arbitrary r whose image lies near the grid.
cplx liouville_residual(cplx r, cplx e_e, cplx e_d, const EckartParams& p_e,
                        const NatanzonPotential& v_d);

/// |residual| / max(|V^E(r) - E^E|, 1).
double liouville_relative(cplx r, cplx residual, cplx e_e, const EckartParams& p_e);

struct LiouvilleReport {
  double max_relative = 0.0;
  double max_absolute = 0.0;
  std::size_t worst_index = 0;
};

LiouvilleReport liouville_scan(cplx e_e, cplx e_d, const EckartParams& p_e,
                               const NatanzonPotential& v_d);

}  // namespace ptdoublet
