#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers; only the contour map r(t) is shared.

#include <complex>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/potentials.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct RealRootCount {
  int positive = 0;
  int negative = 0;
  std::vector<double> roots;  // ascending
};

/// Real roots of c3 d^3 + c2 d^2 + c1 d + c0 by a dense sign scan over the
/// Cauchy bound, with the critical points added to the scan so that every
/// monotone piece is bracketed, then bisection.
RealRootCount sign_scan_roots(double c3, double c2, double c1, double c0, int samples = 4096);

/// Jacobi parameters of the Eckart polynomial factor in x = coth r, from the
/// reduced equation (1 - x^2) y'' + [2 i beta / delta - (2 delta + 2) x] y'
/// + N (N + 2 delta + 1) y = 0.
std::pair<cplx, cplx> eckart_jacobi_params(double delta, double beta);

/// Roots of P_N^{(a, b)} from the companion matrix of its hypergeometric
/// series in u = (1 - x) / 2.
std::vector<cplx> jacobi_roots(int N, cplx a, cplx b);

/// Zeros of the closed-form eigenfunction whose Eckart partner has
/// (delta, beta), located in the complex t-plane: coth r = root, every sheet
/// r + i pi m, then Newton on r(t) = r. Returns the t that fall inside
/// [t_lo, t_hi] x [-below, above].
std::vector<cplx> jacobi_zeros_in_strip(int N, double delta, double beta, const ptdoublet::EpsilonProfile& profile,
                                        double t_lo, double t_hi, double below, double above);

/// The beta term exactly as printed: 2 i beta e^{2i xi} / sqrt(1 - e^{2i xi})
/// in place of 2 beta e^{i xi} / sqrt(...), principal square root.
cplx printed_potential(cplx xi, double beta, double C);

/// Omega and Z from t and eps in extended precision.
struct XiLong {
  long double omega;
  long double z;
};
XiLong xi_long(long double t, long double eps);

/// |sinh t cos eps - e^Z sin Omega| and |cosh t sin eps - e^Z cos Omega|,
/// evaluated in long double for given (double) Omega and Z.
std::pair<long double, long double> implicit_pair_long(long double t, long double eps, long double omega,
                                                       long double z);

}  // namespace oracle
