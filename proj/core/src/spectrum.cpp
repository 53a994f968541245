#include "ptdoublet/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptdoublet/error.hpp"

namespace ptdoublet {

namespace {

// Relative size of the discriminant below which the cubic is treated as
// having a double root.
constexpr double kDegenerateDiscriminant = 1e-12;

cplx eval_cubic(const CubicCoeffs& c, cplx x) { return ((c.c3 * x + c.c2) * x + c.c1) * x + c.c0; }
cplx eval_cubic_prime(const CubicCoeffs& c, cplx x) { return (3.0 * c.c3 * x + 2.0 * c.c2) * x + c.c1; }

cplx newton_polish(const CubicCoeffs& c, cplx x) {
  for (int it = 0; it < 60; ++it) {
    const cplx d = eval_cubic_prime(c, x);
    if (std::abs(d) == 0.0) break;
    const cplx step = eval_cubic(c, x) / d;
    const cplx next = x - step;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    // Keep the better of the two; Newton can wander near a double root.
    if (std::abs(eval_cubic(c, next)) > std::abs(eval_cubic(c, x))) break;
    x = next;
    if (std::abs(step) <= 1e-17 * std::max(std::abs(x), 1e-300)) break;
  }
  return x;
}

double discriminant_scale(const CubicCoeffs& c) {
  const double b2 = c.c0;
  return b2 * (4.0 * std::abs(c.c2 * c.c2 * c.c2) + 27.0 * c.c3 * c.c3 * b2);
}

}  // namespace

std::vector<EckartLevel> eckart_levels(const EckartParams& p) {
  validate(p);
  if (!(p.A > 1.0)) {
    std::ostringstream msg;
    msg << "A = " << p.A << " <= 1 admits no normalizable state";
    fail(ErrorCode::NoBoundStates, msg.str());
  }
  std::vector<EckartLevel> out;
  for (int N = 0; p.A - N - 1.0 > 0.0; ++N) {
    const double d = p.A - N - 1.0;
    out.push_back({N, d, eckart_energy(d, p.beta)});
  }
  return out;
}

double eckart_energy(double delta, double beta) { return -delta * delta + beta * beta / (delta * delta); }

double natanzon_energy(int N, double delta, double C) {
  const double s = delta + N + 0.5;
  return s * s + 0.75 - C;
}

CubicCoeffs delta_cubic_coeffs(int N, double beta, double C) {
  if (N < 0) fail(ErrorCode::BadParameters, "N must be non-negative");
  const double n = N;
  return {2.0 * n + 1.0, n * n + n + 1.0 - C, 0.0, beta * beta};
}

int DeltaRoots::count(RootKind kind) const noexcept {
  return static_cast<int>(std::count(kinds.begin(), kinds.end(), kind));
}

double cubic_discriminant(int N, double beta, double C) {
  const CubicCoeffs c = delta_cubic_coeffs(N, beta, C);
  return -c.c0 * (4.0 * c.c2 * c.c2 * c.c2 + 27.0 * c.c3 * c.c3 * c.c0);
}

double linear_delta(int N, double C) {
  const double n = N;
  return (C - n * n - n - 1.0) / (2.0 * n + 1.0);
}

DeltaRoots solve_delta(int N, double beta, double C) {
  const CubicCoeffs c = delta_cubic_coeffs(N, beta, C);
  if (beta == 0.0) {
    fail(ErrorCode::DegenerateCubic, "beta = 0 leaves a double root at delta = 0; use the linear root");
  }
  if (!std::isfinite(beta) || !std::isfinite(C) || beta < 0.0) {
    fail(ErrorCode::BadParameters, "solve_delta needs finite C and finite beta >= 0");
  }

  DeltaRoots out;
  out.N = N;
  out.beta = beta;
  out.C = C;
  out.discriminant = cubic_discriminant(N, beta, C);

  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(0, 0) = -c.c2 / c.c3;
  companion(0, 1) = -c.c1 / c.c3;
  companion(0, 2) = -c.c0 / c.c3;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(companion, false);
  std::array<cplx, 3> raw;
  for (int i = 0; i < 3; ++i) raw[i] = es.eigenvalues()[i];

  const bool degenerate = std::abs(out.discriminant) <= kDegenerateDiscriminant * discriminant_scale(c);
  if (out.discriminant > 0.0 || degenerate) {
    std::array<double, 3> re;
    for (int i = 0; i < 3; ++i) re[i] = newton_polish(c, cplx(raw[i].real(), 0.0)).real();
    if (degenerate) {
      // f = f' = 0 at the double root; Newton only converges linearly there.
      const double dstar = -2.0 * c.c2 / (3.0 * c.c3);
      const double neg = -c.c0 / (c.c3 * dstar * dstar);
      re = {dstar, dstar, newton_polish(c, cplx(neg, 0.0)).real()};
    }
    std::sort(re.begin(), re.end(), std::greater<>());
    for (int i = 0; i < 3; ++i) {
      out.roots[i] = re[i];
      out.kinds[i] = re[i] > 0.0 ? RootKind::PositiveReal : RootKind::NegativeReal;
    }
  } else {
    int real_idx = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(raw[i].imag()) < std::abs(raw[real_idx].imag())) real_idx = i;
    }
    const double x = newton_polish(c, cplx(raw[real_idx].real(), 0.0)).real();
    cplx z = raw[(real_idx + 1) % 3];
    z = newton_polish(c, z);
    if (z.imag() < 0.0) z = std::conj(z);
    out.roots = {cplx(x, 0.0), z, std::conj(z)};
    out.kinds = {x > 0.0 ? RootKind::PositiveReal : RootKind::NegativeReal, RootKind::ComplexPair,
                 RootKind::ComplexPair};
  }
  return out;
}

double map_residual(int N, double beta, double C, cplx delta) {
  const double n = N;
  const cplx lhs = n * n + n + 1.0 + (2.0 * n + 1.0) * delta + beta * beta / (delta * delta);
  return std::abs(lhs - C) / std::max(std::abs(C), 1.0);
}

LevelResult doublet(int N, double beta, double C) {
  if (N < 0) fail(ErrorCode::BadParameters, "N must be non-negative");
  if (beta == 0.0) {
    const double d = linear_delta(N, C);
    if (d > 0.0) return SingleLevel{N, d, natanzon_energy(N, d, C), false};
    return NoDoublet{N};
  }
  const DeltaRoots roots = solve_delta(N, beta, C);
  if (roots.count(RootKind::PositiveReal) >= 2) {
    const double dp = roots.roots[0].real();
    const double dm = roots.roots[1].real();
    if (dp == dm) return SingleLevel{N, dp, natanzon_energy(N, dp, C), true};
    return Doublet{N, dp, dm, natanzon_energy(N, dp, C), natanzon_energy(N, dm, C)};
  }
  return NoDoublet{N};
}

double branch_delta(int N, Branch q, double beta, double C) {
  const LevelResult lv = doublet(N, beta, C);
  if (const auto* d = std::get_if<Doublet>(&lv)) return q == Branch::Plus ? d->delta_plus : d->delta_minus;
  // A single level has no quasi-parity partner; either tag selects it.
  if (const auto* s = std::get_if<SingleLevel>(&lv)) return s->delta;
  std::ostringstream msg;
  msg << "no doublet and no single level for N=" << N << " at beta=" << beta << ", C=" << C;
  fail(ErrorCode::InadmissibleN, msg.str());
}

double c_min_closed_form(int N, double beta) {
  const double n = N;
  const double a = 2.0 * n + 1.0;
  return n * n + n + 1.0 + 3.0 * std::cbrt(a * a * beta * beta / 4.0);
}

double c_min(int N, double beta) {
  if (!(beta > 0.0)) fail(ErrorCode::BadParameters, "c_min needs beta > 0");
  if (N < 0) fail(ErrorCode::BadParameters, "N must be non-negative");
  const double n = N;
  const double a = 2.0 * n + 1.0;
  // Sign of 4 c2^3 + 27 c3^2 beta^2 decides; it is negative above the threshold.
  auto g = [&](double C) {
    const double c2 = n * n + n + 1.0 - C;
    return 4.0 * c2 * c2 * c2 + 27.0 * a * a * beta * beta;
  };
  double lo = n * n + n + 1.0;
  double hi = lo + 1.0;
  while (g(hi) > 0.0) hi = lo + 2.0 * (hi - lo);
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SpectrumReport spectrum_report(const NatanzonParams& p, int n_max) {
  validate(p);
  if (n_max < 0) fail(ErrorCode::BadParameters, "n_max must be non-negative");
  SpectrumReport rep;
  rep.beta = p.beta;
  rep.C = p.C;
  for (int N = 0; N <= n_max; ++N) rep.levels.push_back(doublet(N, p.beta, p.C));
  return rep;
}

}  // namespace ptdoublet
