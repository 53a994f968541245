#include "ptdoublet/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptdoublet/error.hpp"
#include "singular.hpp"

namespace ptdoublet {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx one_minus_e2ixi(cplx xi) { return 1.0 - std::exp(2.0 * kI * xi); }

}  // namespace

void validate(const EckartParams& p) {
  if (!std::isfinite(p.A) || !std::isfinite(p.beta) || p.beta < 0.0) {
    std::ostringstream msg;
    msg << "Eckart parameters need finite A and beta >= 0 (A=" << p.A << ", beta=" << p.beta << ")";
    fail(ErrorCode::BadParameters, msg.str());
  }
}

void validate(const NatanzonParams& p) {
  if (!std::isfinite(p.C) || !std::isfinite(p.beta) || p.beta < 0.0) {
    std::ostringstream msg;
    msg << "target-model parameters need finite C and beta >= 0 (beta=" << p.beta << ", C=" << p.C
        << ")";
    fail(ErrorCode::BadParameters, msg.str());
  }
}

cplx v_eckart(cplx r, const EckartParams& p) {
  const cplx sh = std::sinh(r);
  if (std::abs(sh) < detail::kSingularTolerance) fail(ErrorCode::SingularPoint, "v_eckart: sinh r = 0");
  return p.A * (p.A - 1.0) / (sh * sh) - 2.0 * kI * p.beta * std::cosh(r) / sh;
}

cplx v_natanzon_in_r(cplx r, const NatanzonParams& p) {
  const cplx ch = std::cosh(r);
  if (std::abs(ch) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "v_natanzon_in_r: cosh r = 0");
  }
  const cplx c2 = ch * ch;
  return 0.75 / (c2 * c2) - p.C / c2 + 2.0 * kI * p.beta * std::sinh(r) / ch;
}

cplx v_d_in_r(cplx r, int N, double delta, double beta) {
  if (!(delta > 0.0)) fail(ErrorCode::InvalidDelta, "v_d_in_r: delta must be positive");
  const cplx ch = std::cosh(r);
  if (std::abs(ch) < detail::kSingularTolerance) fail(ErrorCode::SingularPoint, "v_d_in_r: cosh r = 0");
  const cplx c2 = ch * ch;
  const double n = N;
  const double b2d2 = beta * beta / (delta * delta);
  const double k = n * (n + 1.0) + (2.0 * n + 1.0) * delta + 1.0 + b2d2;
  return 0.75 / (c2 * c2) - k / c2 + (b2d2 - delta * delta) + 2.0 * kI * beta * std::sinh(r) / ch;
}

NatanzonPotential::NatanzonPotential(NatanzonParams p, GridPtr grid) : p_(p), grid_(std::move(grid)) {
  validate(p_);
  std::vector<cplx> w(grid_->size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = one_minus_e2ixi((*grid_)[k].xi);
  root_ = BranchTrack(w, grid_->anchor_index());
}

cplx NatanzonPotential::eval_with_branch(cplx xi, std::size_t k) const {
  const cplx w = one_minus_e2ixi(xi);
  if (std::abs(w) < detail::kSingularTolerance) {
    fail(ErrorCode::SingularPoint, "target potential: e^{2i xi} = 1");
  }
  const cplx s = root_.sqrt(w, k);
  return 0.75 / (w * w) - p_.C / w + 2.0 * p_.beta * std::exp(kI * xi) / s;
}

cplx NatanzonPotential::at(std::size_t k) const { return eval_with_branch((*grid_)[k].xi, k); }

cplx NatanzonPotential::operator()(cplx xi) const {
  double dist = 0.0;
  const std::size_t k = grid_->nearest_xi_index(xi, &dist);
  const std::size_t lo = k == 0 ? 0 : k - 1;
  const std::size_t hi = std::min(k + 1, grid_->size() - 1);
  const double local = std::max(std::abs((*grid_)[hi].xi - (*grid_)[k].xi),
                                std::abs((*grid_)[k].xi - (*grid_)[lo].xi));
  if (dist > std::max(grid_->safety_margin(), local)) {
    std::ostringstream msg;
    msg << "xi = (" << xi.real() << ", " << xi.imag() << ") lies " << dist
        << " from the contour; branch is not defined there";
    fail(ErrorCode::BranchUndefined, msg.str());
  }
  return eval_with_branch(xi, k);
}

std::vector<cplx> NatanzonPotential::values() const {
  std::vector<cplx> out(grid_->size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k);
  return out;
}

cplx v_natanzon(cplx xi, const NatanzonParams& p, const GridPtr& grid) {
  return NatanzonPotential(p, grid)(xi);
}

namespace {

cplx liouville_core(cplx r, cplx v_d, cplx e_e, cplx e_d, const EckartParams& p_e) {
  const cplx x1 = dxi_dr(r);
  const cplx x2 = d2xi_dr2(r);
  const cplx x3 = d3xi_dr3(r);
  const cplx schwarz_part = 0.75 * (x2 / x1) * (x2 / x1) - 0.5 * x3 / x1;
  return (v_eckart(r, p_e) - e_e) - (x1 * x1 * (v_d - e_d) + schwarz_part);
}

}  // namespace

cplx liouville_residual(std::size_t k, cplx e_e, cplx e_d, const EckartParams& p_e,
                        const NatanzonPotential& v_d) {
  const ContourPoint& pt = (*v_d.grid())[k];
  return liouville_core(pt.r, v_d.at(k), e_e, e_d, p_e);
}

cplx liouville_residual(cplx r, cplx e_e, cplx e_d, const EckartParams& p_e,
                        const NatanzonPotential& v_d) {
  double dist = 0.0;
  const std::size_t k = v_d.grid()->nearest_xi_index(xi_of_r(r), &dist);
  const cplx xi = xi_of_r(r, (*v_d.grid())[k].xi);
  return liouville_core(r, v_d(xi), e_e, e_d, p_e);
}

double liouville_relative(cplx r, cplx residual, cplx e_e, const EckartParams& p_e) {
  return std::abs(residual) / std::max(std::abs(v_eckart(r, p_e) - e_e), 1.0);
}

LiouvilleReport liouville_scan(cplx e_e, cplx e_d, const EckartParams& p_e,
                               const NatanzonPotential& v_d) {
  LiouvilleReport rep;
  const ContourGrid& g = *v_d.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx res = liouville_residual(k, e_e, e_d, p_e, v_d);
    const double rel = liouville_relative(g[k].r, res, e_e, p_e);
    rep.max_absolute = std::max(rep.max_absolute, std::abs(res));
    if (rel > rep.max_relative) {
      rep.max_relative = rel;
      rep.worst_index = k;
    }
  }
  return rep;
}

}  // namespace ptdoublet
