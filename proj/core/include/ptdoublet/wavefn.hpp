#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/potentials.hpp"
#include "ptdoublet/spectrum.hpp"

namespace ptdoublet {

struct UVParams {
  cplx u, v;
  cplx a, b, c;  // 2F1(a, b; c; .) with b = -N
};

/// u = (delta - i beta/delta)/2, v = (delta + i beta/delta)/2, a = 2A - N - 1
/// with A = delta + N + 1, b = -N, c = 1 + 2u. Throws InvalidDelta for
/// delta <= 0.
UVParams derive_uv(int N, double delta, double beta);

/// Jacobi parameters of the polynomial factor. Standard uses (2u, 2v), which
/// is what makes the closed forms solve their equations; Halved uses (u/2, v/2)
/// and is kept to demonstrate that it does not.
enum class JacobiConvention { Standard, Halved };

/// P_N^{(alpha, beta)}(z) by the three-term recurrence, complex everything.
cplx jacobi_poly(int N, cplx alpha, cplx beta_j, cplx z);
/// d/dz P_N^{(alpha, beta)}(z) = (N + alpha + beta + 1)/2 P_{N-1}^{(alpha+1, beta+1)}(z).
cplx jacobi_poly_derivative(int N, cplx alpha, cplx beta_j, cplx z);

/// Finite sum of 2F1(a, -N; c; z). Throws BadParameters for N < 0 or when
/// (c)_k vanishes for some k <= N.
cplx hyp2f1_terminating(cplx a, int N, cplx c, cplx z);

/// Eckart bound state (1/sinh r)^delta e^{(i beta/delta) r} P_N(coth r),
/// unnormalized, with delta = A - N - 1.
class EckartState {
 public:
  /// Throws InadmissibleN when A - N - 1 <= 0 and BadParameters for N < 0.
  EckartState(EckartParams p, int N, GridPtr grid,
              JacobiConvention conv = JacobiConvention::Standard);

  const EckartParams& params() const noexcept { return p_; }
  int N() const noexcept { return N_; }
  double delta() const noexcept { return delta_; }
  double energy() const noexcept { return eckart_energy(delta_, p_.beta); }
  const GridPtr& grid() const noexcept { return grid_; }
  std::pair<cplx, cplx> jacobi_params() const noexcept { return {alpha_, beta_j_}; }

  cplx at(std::size_t k) const;
  /// Off-grid value, branch taken from the grid point nearest Re r.
  cplx operator()(cplx r) const;
  /// d/dr ln psi; single-valued, so it needs no branch bookkeeping.
  cplx log_derivative_r(cplx r) const;
  /// d/dt ln psi at complex t along the analytically continued path r(t).
  cplx log_derivative_t(cplx t) const;

 private:
  cplx eval(cplx r, cplx log_sinh) const;

  EckartParams p_;
  int N_;
  double delta_;
  cplx alpha_, beta_j_;
  GridPtr grid_;
  BranchTrack log_sinh_;
};

/// Target-model bound state
///   e^{-i delta xi} [1 - e^{-2i xi}]^{1/4} [B]^{i beta/delta} P_N(sqrt(1 - e^{-2i xi}))
/// with B = -i sqrt(1 - e^{2i xi}) - e^{i xi}. All roots and powers are
/// continued along the grid from principal values at the anchor.
class NatanzonState {
 public:
  /// Throws InadmissibleN when branch q does not exist for (beta, C).
  NatanzonState(NatanzonParams p, int N, Branch q, GridPtr grid,
                JacobiConvention conv = JacobiConvention::Standard);
  /// Explicit delta, for states built from an externally supplied root.
  NatanzonState(NatanzonParams p, int N, Branch q, double delta, GridPtr grid,
                JacobiConvention conv = JacobiConvention::Standard);

  const NatanzonParams& params() const noexcept { return p_; }
  int N() const noexcept { return N_; }
  Branch branch() const noexcept { return q_; }
  double delta() const noexcept { return delta_; }
  double energy() const noexcept { return natanzon_energy(N_, delta_, p_.C); }
  const GridPtr& grid() const noexcept { return grid_; }
  /// Eckart partner under the Liouville map: A = delta + N + 1, same beta.
  EckartParams eckart_partner() const noexcept { return {delta_ + N_ + 1.0, p_.beta}; }

  cplx at(std::size_t k) const;
  /// Off-grid value near the grid; throws BranchUndefined when too far.
  cplx operator()(cplx xi) const;
  cplx eval_with_branch(cplx xi, std::size_t k) const;
  /// d/dt ln psi at complex t, written through r(t).
  cplx log_derivative_t(cplx t) const;

 private:
  void init(JacobiConvention conv);

  NatanzonParams p_;
  int N_;
  Branch q_;
  double delta_;
  cplx alpha_, beta_j_;
  GridPtr grid_;
  BranchTrack quarter_;  // 1 - e^{-2i xi}
  BranchTrack root_;     // 1 - e^{2i xi}
  BranchTrack b_log_;    // B
};

cplx psi_eckart(cplx r, const EckartParams& p, int N, const GridPtr& grid);
cplx psi_natanzon(cplx xi, int N, Branch q, const NatanzonParams& p, const GridPtr& grid);

struct DecayFit {
  double slope_left = 0.0;
  double slope_right = 0.0;
};

struct WaveSamples {
  GridPtr grid;
  std::vector<cplx> values;
  int q = 0;  // +1 / -1 for doublet members, 0 otherwise
  int N = 0;
  double delta = 0.0;
  cplx energy;
  std::string normalization = "unnormalized";
  std::optional<DecayFit> decay_fit;
  std::optional<int> node_count;
  // psi_t / psi at complex t, used by the argument principle.
  std::function<cplx(cplx)> log_derivative;
};

WaveSamples sample(const EckartState& s);
WaveSamples sample(const NatanzonState& s);

enum class Variable { R, Xi };

/// max over interior points of |-psi'' + (V - E) psi| / (|psi| max(|V - E|, 1)),
/// psi'' taken in r or xi from central t-differences of half-width
/// `half_width` and the chain rule. Throws GridTooCoarse with fewer than
/// 2 half_width + 1 points, BadParameters on size mismatch.
double schrodinger_residual(const WaveSamples& samples, const std::vector<cplx>& potential, cplx energy,
                            Variable var, int half_width = 5);

/// Pointwise residuals behind schrodinger_residual (NaN at the stencil edges).
std::vector<double> schrodinger_residual_profile(const WaveSamples& samples,
                                                 const std::vector<cplx>& potential, cplx energy,
                                                 Variable var, int half_width = 5);

/// Central finite-difference weights on offsets -hw..hw (unit spacing) for
/// derivative orders 0..2, from Fornberg's recursion.
std::vector<std::vector<double>> central_weights(int half_width);

struct StripRect {
  double below = 0.2;  // extent under the real t-axis
  double above = 0.2;
  double margin = 1.0;  // trimmed from each end of the grid
  double panel = 0.05;  // Gauss-Legendre panel length
};

/// Zeros of psi in [t_min + margin, t_max - margin] x [-below, above] in the
/// complex t-plane, by the argument principle. Throws WindingNotInteger when
/// the winding is further than 0.1 from an integer.
int count_nodes(const WaveSamples& samples, const StripRect& rect = {});
/// The raw winding number before rounding.
double winding_number(const std::function<cplx(cplx)>& log_derivative, double t_lo, double t_hi,
                      double below, double above, double panel = 0.05);

/// Least-squares slope of ln|psi| against Z over |t| >= t_asym on each side
/// (default half the grid extent). Points with |psi| < 1e-250 are dropped.
/// Throws TailTooShort with fewer than 20 usable points on a side.
DecayFit decay_rate(const WaveSamples& samples, std::optional<double> t_asym = std::nullopt);

/// max_t | |psi(-t)| - |psi(t)| | / max |psi|. Throws AsymmetricGrid.
double pt_symmetry_defect(const WaveSamples& samples);

/// Fill decay_fit and node_count.
void annotate(WaveSamples& samples, const StripRect& rect = {});

struct MapSpread {
  cplx constant;
  double relative_spread = 0.0;
};

/// psi_D / (sqrt(xi') psi_E o r) over the grid: its value at the anchor and
/// max relative deviation from it.
MapSpread liouville_map_spread(const NatanzonState& d, const EckartState& e);

}  // namespace ptdoublet
