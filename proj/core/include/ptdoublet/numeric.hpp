#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/potentials.hpp"
#include "ptdoublet/wavefn.hpp"

namespace ptdoublet {

/// Complex tridiagonal matrix; sub[i] = A(i+1, i), super[i] = A(i, i+1).
struct Tridiagonal {
  std::vector<cplx> sub, diag, super;
  std::size_t size() const noexcept { return diag.size(); }
  std::vector<cplx> apply(const std::vector<cplx>& x) const;
};

enum class ModelKind { Eckart, Natanzon };

/// What the operator was built from, evaluable at complex t. s is the
/// Schrodinger variable (r for Eckart, xi for the target model).
struct ModelFunctions {
  std::function<cplx(cplx)> potential;
  std::function<cplx(cplx)> ds_dt;
  std::function<cplx(cplx)> d2s_dt2;
};

ModelFunctions eckart_model(const EckartParams& p, const EpsilonProfile& profile);
ModelFunctions natanzon_model(const NatanzonParams& p, const EpsilonProfile& profile);

/// -(1/s_t) d/dt [(1/s_t) d psi/dt] + V psi on the grid interior, Dirichlet at
/// both ends. Metric factors sit at the midpoints (flux form). Only the n - 2
/// interior unknowns are stored; weights[i] = s_t at interior point i makes
/// diag(weights) * matrix complex symmetric.
struct DiscreteOperator {
  GridPtr grid;
  ModelKind kind = ModelKind::Eckart;
  std::string boundary = "dirichlet";
  Tridiagonal matrix;
  std::vector<cplx> weights;
  ModelFunctions model;

  std::size_t size() const noexcept { return matrix.size(); }
};

/// Throws BadParameters below 64 grid points and SingularPoint when the
/// potential or metric blows up on the grid.
DiscreteOperator discretize(const GridPtr& grid, const EckartParams& p);
/// The target potential is sampled through its branch-tracked xi form.
DiscreteOperator discretize(const GridPtr& grid, const NatanzonParams& p);
/// Generic form used by both overloads and by tests.
DiscreteOperator discretize(const GridPtr& grid, ModelKind kind, const ModelFunctions& model,
                            const std::vector<cplx>& potential_on_grid);

struct DenseOptions {
  std::size_t cap = 2000;
};

/// All eigenvalues, via LAPACK Hessenberg QR (a tridiagonal matrix is already
/// Hessenberg). Sorted by real part, then imaginary part. Throws
/// DenseCapExceeded above the cap and NoConvergence if QR fails.
std::vector<cplx> eigen_all(const Tridiagonal& m, const DenseOptions& opt = {});
std::vector<cplx> eigen_all(const DiscreteOperator& op, const DenseOptions& opt = {});

struct NearOptions {
  double tol = 1e-12;
  int max_iter = 500;
  // Switch from a fixed shift to Rayleigh-quotient shifts once successive
  // estimates agree to this relative level.
  double polish_after = 1e-7;
};

struct NearResult {
  cplx value;
  std::vector<cplx> vector;  // interior values, normalized to max |x| = 1
  int iterations = 0;
  double condition = 1.0;  // eigenvalue condition estimate ||x|| ||y|| / |y^T x|
  double distance_from_guess = 0.0;
  bool converged = false;
};

/// Inverse iteration with shift `guess` and tridiagonal LU solves; the
/// eigenvalue estimate is the Rayleigh quotient x^H A x / x^H x.
/// Converged when successive estimates differ by less than tol (relative) or
/// by less than the rounding floor 100 eps ||A||_inf times the eigenvalue
/// condition estimate, whichever is larger.
/// Throws NoConvergence, or ShiftIsEigenvalue if the shift stays exactly
/// singular after one perturbed retry.
NearResult eigen_near(const DiscreteOperator& op, cplx guess, const NearOptions& opt = {});
NearResult eigen_near(const Tridiagonal& m, cplx guess, const NearOptions& opt = {});

/// A few inverse-iteration sweeps at a shift next to `lambda`.
std::vector<cplx> eigenvector(const Tridiagonal& m, cplx lambda, int sweeps = 2);

struct FilterOptions {
  double tail_fraction = 0.9;  // tail is |t| >= tail_fraction * T
  double tail_ratio = 0.05;    // max tail |psi| / peak must stay below
  double roughness = 0.5;      // max |second difference| / peak must stay below
};

struct ScannedLevel {
  cplx energy;
  double tail_ratio = 0.0;
  double roughness = 0.0;
  bool kept = false;
};

struct SpectrumScan {
  std::vector<cplx> raw;
  std::vector<ScannedLevel> levels;
  std::vector<cplx> filtered;
};

/// eigen_all plus the decay and resolution filters on each eigenvector.
SpectrumScan scan_spectrum(const DiscreteOperator& op, const FilterOptions& filter = {},
                           const DenseOptions& dense = {});
/// Tail and roughness measures of an interior eigenvector.
ScannedLevel measure_vector(const DiscreteOperator& op, cplx energy, const std::vector<cplx>& vec,
                            const FilterOptions& filter = {});

/// Zeros of the eigenfunction in the strip rectangle, by the argument
/// principle. The eigenvector is continued off the real t-axis by
/// integrating the differential equation vertically (RK4) from each grid
/// point. Columns where |psi| is below `resolved` times its peak are cut off
/// the ends of the rectangle. Throws WindingNotInteger.
double eigenvector_winding(const DiscreteOperator& op, cplx energy, const std::vector<cplx>& vec,
                           const StripRect& rect = {}, int vertical_steps = 40, double resolved = 1e-10);
int eigenvector_node_count(const DiscreteOperator& op, cplx energy, const std::vector<cplx>& vec,
                           const StripRect& rect = {}, int vertical_steps = 40, double resolved = 1e-10);

cplx richardson(cplx coarse, cplx fine, double order = 2.0, double ratio = 2.0);

struct EigenMatch {
  cplx analytic_energy;
  cplx numeric_energy;
  double relative_error = 0.0;
  std::optional<int> node_count;
  bool converged = false;
  bool matched = false;
  std::size_t numeric_index = 0;
};

/// Greedy nearest-neighbour pairing in the complex plane, analytic levels in
/// the given order. Levels further than tol (relative) are flagged unmatched.
/// `nodes`, when supplied, is called with the numeric index of each match.
std::vector<EigenMatch> match_spectrum(const std::vector<cplx>& numeric, const std::vector<cplx>& analytic,
                                       double tol, const std::function<int(std::size_t)>& nodes = {});

struct ConfirmOptions {
  std::size_t n_fine = 4001;
  FilterOptions filter;
  // Wider end margin than the analytic count: Dirichlet truncation puts
  // spurious zeros within about a unit of each end.
  StripRect strip{0.2, 0.2, 2.0, 0.05};
  DenseOptions dense;
  double real_tol = 1e-3;   // |Im E| / max(|E|, 1) for a bound-state candidate
  double match_tol = 1e-3;  // relative error accepted by match_spectrum
};

struct ConfirmedLevel {
  cplx coarse, fine, extrapolated;
  double tail_ratio = 0.0;
  double winding = 0.0;
  std::optional<int> node_count;  // empty when the winding was not an integer
};

struct Confirmation {
  ModelKind kind = ModelKind::Eckart;
  std::size_t n_coarse = 0, n_fine = 0;
  std::vector<cplx> raw, filtered;
  std::vector<ConfirmedLevel> levels;
  std::vector<EigenMatch> matches;  // against the extrapolated values
};

using OperatorFactory = std::function<DiscreteOperator(const GridPtr&)>;

/// Dense scan on `coarse`, filter, refine every near-real survivor on a grid
/// with n_fine points, extrapolate, count eigenvector nodes, and only then
/// pair with `analytic`.
Confirmation confirm_spectrum(const GridPtr& coarse, const OperatorFactory& make,
                              const std::vector<cplx>& analytic, const ConfirmOptions& opt = {});

}  // namespace ptdoublet
