#pragma once

#include <array>
#include <variant>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/potentials.hpp"

namespace ptdoublet {

struct EckartLevel {
  int N = 0;
  double delta = 0.0;
  double energy = 0.0;
};

/// Levels N = 0, 1, ... with A - N - 1 > 0, energy -delta^2 + beta^2/delta^2.
/// Throws NoBoundStates when A <= 1.
std::vector<EckartLevel> eckart_levels(const EckartParams& p);
double eckart_energy(double delta, double beta);
/// (delta + N + 1/2)^2 + 3/4 - C.
double natanzon_energy(int N, double delta, double C);

struct CubicCoeffs {
  double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;
};

/// (2N+1) d^3 + (N^2+N+1-C) d^2 + beta^2 = 0. The equation was multiplied by
/// d^2, so d = 0 is never a genuine root and is rejected downstream.
CubicCoeffs delta_cubic_coeffs(int N, double beta, double C);

enum class RootKind { PositiveReal, NegativeReal, ComplexPair };

struct DeltaRoots {
  int N = 0;
  double beta = 0.0;
  double C = 0.0;
  std::array<cplx, 3> roots{};  // real roots first, descending; then the pair
  std::array<RootKind, 3> kinds{};
  double discriminant = 0.0;

  int count(RootKind kind) const noexcept;
};

/// Companion-matrix eigenvalues polished by Newton. Throws DegenerateCubic
/// when beta = 0; use linear_delta then.
DeltaRoots solve_delta(int N, double beta, double C);
/// Root of the beta = 0 reduction: (C - N^2 - N - 1)/(2N + 1).
double linear_delta(int N, double C);

/// |N^2+N+1 + (2N+1) d + beta^2/d^2 - C| / max(|C|, 1).
double map_residual(int N, double beta, double C, cplx delta);
double cubic_discriminant(int N, double beta, double C);

enum class Branch { Plus = +1, Minus = -1 };

struct Doublet {
  int N = 0;
  double delta_plus = 0.0;   // q = +1
  double delta_minus = 0.0;  // q = -1
  double e_plus = 0.0;
  double e_minus = 0.0;
};

struct SingleLevel {
  int N = 0;
  double delta = 0.0;
  double energy = 0.0;
  bool degenerate_doublet = false;  // double root at C = c_min
};

struct NoDoublet {
  int N = 0;
};

using LevelResult = std::variant<Doublet, SingleLevel, NoDoublet>;

LevelResult doublet(int N, double beta, double C);

/// delta of branch q for level N; throws InadmissibleN if that branch does
/// not exist for (beta, C).
double branch_delta(int N, Branch q, double beta, double C);

/// Smallest C with two positive roots, by bisection on the discriminant.
/// Throws BadParameters for beta <= 0.
double c_min(int N, double beta);
/// N^2+N+1 + 3 ((2N+1)^2 beta^2 / 4)^{1/3}.
double c_min_closed_form(int N, double beta);

struct SpectrumReport {
  double beta = 0.0;
  double C = 0.0;
  std::vector<LevelResult> levels;
};

SpectrumReport spectrum_report(const NatanzonParams& p, int n_max);

}  // namespace ptdoublet
