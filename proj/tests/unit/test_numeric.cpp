#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ptdoublet/numeric.hpp"
#include "ptdoublet/spectrum.hpp"
#include "test_util.hpp"

using namespace ptdoublet;

namespace {

GridPtr straight(std::size_t n, double T = 12.0) { return build_grid(EpsilonProfile::constant(0.25), -T, T, n); }

Tridiagonal make_tri(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> super) {
  Tridiagonal t;
  t.sub = std::move(sub);
  t.diag = std::move(diag);
  t.super = std::move(super);
  return t;
}

cplx nearest(const std::vector<cplx>& v, cplx z) {
  return *std::min_element(v.begin(), v.end(), [&](cplx a, cplx b) { return std::abs(a - z) < std::abs(b - z); });
}

}  // namespace

TEST(Tridiagonal, Apply) {
  const Tridiagonal t = make_tri({1.0, 2.0}, {3.0, 4.0, 5.0}, {6.0, 7.0});
  const std::vector<cplx> y = t.apply({1.0, cplx(0.0, 1.0), -1.0});
  EXPECT_EQ(y[0], cplx(3.0, 6.0));
  EXPECT_EQ(y[1], cplx(1.0 - 7.0, 4.0));
  EXPECT_EQ(y[2], cplx(-5.0, 2.0));
}

TEST(EigenAll, TwoByTwo) {
  const auto w = eigen_all(make_tri({1.0}, {0.0, 0.0}, {1.0}));
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(std::abs(w[0] - cplx(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w[1] - cplx(1.0)), 0.0, 1e-15);
}

TEST(EigenAll, DiagonalIsSortedDiagonal) {
  const auto w = eigen_all(make_tri({0.0, 0.0, 0.0}, {cplx(3.0, 1.0), -2.0, cplx(3.0, -1.0), 0.5}, {0.0, 0.0, 0.0}));
  const std::vector<cplx> want{-2.0, 0.5, cplx(3.0, -1.0), cplx(3.0, 1.0)};
  ASSERT_EQ(w.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(w[i], want[i]);
  EXPECT_TRUE(eigen_all(Tridiagonal{}).empty());
}

TEST(EigenAll, CapExceeded) {
  Tridiagonal t;
  t.diag.assign(11, 1.0);
  t.sub.assign(10, 0.0);
  t.super.assign(10, 0.0);
  EXPECT_PT_ERROR(eigen_all(t, DenseOptions{10}), ErrorCode::DenseCapExceeded);
  EXPECT_EQ(eigen_all(t, DenseOptions{11}).size(), 11u);
}

TEST(Discretize, FluxFormRowsByHand) {
  const GridPtr g = straight(64, 3.0);
  ModelFunctions mf;
  mf.ds_dt = [](cplx t) { return cplx(1.0, 0.2) + 0.1 * t; };
  mf.d2s_dt2 = [](cplx) { return cplx(0.1); };
  mf.potential = [](cplx t) { return t * t; };
  std::vector<cplx> v(g->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = cplx(0.5, -0.1 * double(k));
  const DiscreteOperator op = discretize(g, ModelKind::Natanzon, mf, v);
  ASSERT_EQ(op.size(), 62u);
  EXPECT_EQ(op.boundary, "dirichlet");
  const double h = g->spacing();
  for (std::size_t i : {std::size_t(0), std::size_t(30), std::size_t(61)}) {
    const std::size_t k = i + 1;
    const double t = (*g)[k].t;
    const cplx st = mf.ds_dt(t);
    const cplx mlo = 1.0 / mf.ds_dt(t - h / 2), mhi = 1.0 / mf.ds_dt(t + h / 2);
    EXPECT_LT(std::abs(op.matrix.diag[i] - ((mlo + mhi) / (h * h * st) + v[k])), 1e-9);
    if (i > 0) EXPECT_LT(std::abs(op.matrix.sub[i - 1] + mlo / (h * h * st)), 1e-9);
    if (i < 61) EXPECT_LT(std::abs(op.matrix.super[i] + mhi / (h * h * st)), 1e-9);
    EXPECT_EQ(op.weights[i], st);
  }
  // diag(weights) * A is complex symmetric.
  for (std::size_t i = 0; i + 1 < op.size(); ++i) {
    EXPECT_LT(std::abs(op.weights[i] * op.matrix.super[i] - op.weights[i + 1] * op.matrix.sub[i]), 1e-9);
  }
}

TEST(Discretize, StraightEckartIsTextbook) {
  const GridPtr g = straight(201);
  const EckartParams p{3.0, 1.0};
  const DiscreteOperator op = discretize(g, p);
  EXPECT_EQ(op.kind, ModelKind::Eckart);
  const double h = g->spacing();
  for (std::size_t i = 0; i < op.size(); ++i) {
    EXPECT_LT(std::abs(op.matrix.diag[i] - (2.0 / (h * h) + v_eckart((*g)[i + 1].r, p))), 1e-9);
    if (i + 1 < op.size()) {
      EXPECT_LT(std::abs(op.matrix.super[i] + 1.0 / (h * h)), 1e-9);
      EXPECT_LT(std::abs(op.matrix.sub[i] + 1.0 / (h * h)), 1e-9);
    }
  }
}

TEST(Discretize, Errors) {
  EXPECT_PT_ERROR(discretize(straight(63), EckartParams{3.0, 1.0}), ErrorCode::BadParameters);
  const GridPtr g = straight(64);
  ModelFunctions mf = eckart_model({3.0, 1.0}, g->profile());
  std::vector<cplx> v(g->size(), 0.0);
  EXPECT_PT_ERROR(discretize(g, ModelKind::Eckart, mf, std::vector<cplx>(5)), ErrorCode::BadParameters);
  v[10] = cplx(std::nan(""), 0.0);
  EXPECT_PT_ERROR(discretize(g, ModelKind::Eckart, mf, v), ErrorCode::SingularPoint);
  EXPECT_PT_ERROR(discretize(g, EckartParams{3.0, -1.0}), ErrorCode::BadParameters);
}

TEST(EigenNear, DiagonalAndSymmetric) {
  const Tridiagonal t = make_tri({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  // Eigenvalues 2 cos(k pi / 5).
  const NearResult r = eigen_near(t, 0.5);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(std::abs(r.value - 2.0 * std::cos(2.0 * std::numbers::pi / 5.0)), 0.0, 1e-12);
  EXPECT_NEAR(r.distance_from_guess, std::abs(r.value - 0.5), 1e-15);
  ASSERT_EQ(r.vector.size(), 4u);
  double mx = 0.0;
  for (const cplx& x : r.vector) mx = std::max(mx, std::abs(x));
  EXPECT_NEAR(mx, 1.0, 1e-15);
  const auto ax = t.apply(r.vector);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(ax[i] - r.value * r.vector[i]), 1e-10);
}

TEST(EigenNear, ShiftIsEigenvalue) {
  const cplx g = 0.0;
  const cplx retry = 1e-9 * cplx(1.0, 1.0);
  const Tridiagonal t = make_tri({0.0}, {g, retry}, {0.0});
  EXPECT_PT_ERROR(eigen_near(t, g), ErrorCode::ShiftIsEigenvalue);
  // A single exact hit is retried with a perturbed shift and still converges.
  const Tridiagonal d = make_tri({0.0}, {0.0, 5.0}, {0.0});
  EXPECT_NEAR(std::abs(eigen_near(d, 0.0).value), 0.0, 1e-12);
}

TEST(EigenNear, NoConvergenceWithinBudget) {
  const DiscreteOperator op = discretize(straight(401), EckartParams{3.0, 1.0});
  NearOptions opt;
  opt.max_iter = 1;
  EXPECT_PT_ERROR(eigen_near(op, cplx(30.0, 0.0), opt), ErrorCode::NoConvergence);
}

TEST(EigenNear, EckartStraightContour) {
  const DiscreteOperator op = discretize(straight(2001), EckartParams{3.0, 1.0});
  for (const double e : {-3.75, 0.0}) {
    const NearResult r = eigen_near(op, cplx(e + 0.01, 0.0));
    EXPECT_TRUE(r.converged);
    EXPECT_LT(std::abs(r.value - e) / std::max(1.0, std::abs(e)), 1e-3);
    EXPECT_GE(r.condition, 1.0);
  }
}

TEST(EigenAll, EckartStraightContourLowLevels) {
  const DiscreteOperator op = discretize(straight(2001), EckartParams{3.0, 1.0});
  ASSERT_EQ(op.size(), 1999u);
  const std::vector<cplx> w = eigen_all(op);
  EXPECT_LT(std::abs(nearest(w, -3.75) - cplx(-3.75)), 1e-3 * 3.75);
  EXPECT_LT(std::abs(nearest(w, 0.0)), 1e-3);
}

TEST(Convergence, SecondOrderAndRichardson) {
  const double exact = -3.75;
  std::vector<cplx> est;
  for (std::size_t n : {501u, 1001u, 2001u}) {
    const DiscreteOperator op = discretize(straight(n), EckartParams{3.0, 1.0});
    est.push_back(eigen_near(op, cplx(-3.7, 0.0)).value);
  }
  const double e1 = std::abs(est[0] - exact), e2 = std::abs(est[1] - exact), e3 = std::abs(est[2] - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
  EXPECT_NEAR(e2 / e3, 4.0, 0.4);
  const double er = std::abs(richardson(est[1], est[2]) - exact);
  EXPECT_LT(er * 10.0, e3);
}

TEST(Richardson, Formula) {
  EXPECT_EQ(richardson(1.0, 2.0), cplx(2.0 + 1.0 / 3.0));
  EXPECT_NEAR(std::abs(richardson(cplx(1.0, 1.0), cplx(1.0, 1.0))), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(richardson(0.0, 1.0, 1.0, 2.0).real(), 2.0, 1e-15);
}

TEST(MatchSpectrum, PerfectAndUnmatched) {
  const std::vector<cplx> num{cplx(-3.75), cplx(0.0), cplx(50.0, 3.0)};
  const auto perfect = match_spectrum(num, {cplx(0.0), cplx(-3.75)}, 1e-3);
  ASSERT_EQ(perfect.size(), 2u);
  for (const EigenMatch& m : perfect) {
    EXPECT_TRUE(m.matched);
    EXPECT_EQ(m.relative_error, 0.0);
  }
  EXPECT_EQ(perfect[0].numeric_index, 1u);
  EXPECT_EQ(perfect[1].numeric_index, 0u);

  const auto off = match_spectrum(num, {cplx(-3.70), cplx(20.0)}, 1e-3);
  EXPECT_FALSE(off[0].matched);
  EXPECT_NEAR(off[0].relative_error, 0.05 / 3.70, 1e-12);
  EXPECT_FALSE(off[1].matched);
}

TEST(MatchSpectrum, GreedyDoesNotReuse) {
  const auto m = match_spectrum({cplx(1.0)}, {cplx(1.0), cplx(1.0001)}, 1e-3);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_TRUE(m[0].matched);
  EXPECT_FALSE(m[1].matched);
}

TEST(MatchSpectrum, NodesCallback) {
  const auto m = match_spectrum({cplx(1.0), cplx(2.0)}, {cplx(2.0)}, 1e-3,
                                [](std::size_t i) { return int(i) + 10; });
  ASSERT_TRUE(m[0].node_count.has_value());
  EXPECT_EQ(*m[0].node_count, 11);
}

TEST(ScanSpectrum, FilterKeepsBoundStates) {
  const DiscreteOperator op = discretize(straight(801), EckartParams{3.0, 1.0});
  const SpectrumScan s = scan_spectrum(op);
  EXPECT_EQ(s.raw.size(), op.size());
  EXPECT_EQ(s.levels.size(), s.raw.size());
  EXPECT_LT(s.filtered.size(), s.raw.size());
  EXPECT_LT(std::abs(nearest(s.filtered, -3.75) - cplx(-3.75)), 1e-2);
  EXPECT_LT(std::abs(nearest(s.filtered, 0.0)), 1e-2);
  for (const ScannedLevel& l : s.levels) {
    if (l.kept) {
      EXPECT_LT(l.tail_ratio, FilterOptions{}.tail_ratio);
      EXPECT_LT(l.roughness, FilterOptions{}.roughness);
    }
  }
}

TEST(EigenvectorNodes, EckartAgreesWithOracle) {
  const GridPtr g = straight(1601);
  const EckartParams p{3.0, 1.0};
  const DiscreteOperator op = discretize(g, p);
  const StripRect rect = ConfirmOptions{}.strip;
  for (const EckartLevel& l : eckart_levels(p)) {
    const NearResult r = eigen_near(op, cplx(l.energy + 0.01, 0.0));
    const auto want = oracle::jacobi_zeros_in_strip(l.N, l.delta, p.beta, g->profile(), g->t_min() + rect.margin,
                                                    g->t_max() - rect.margin, rect.below, rect.above);
    EXPECT_EQ(eigenvector_node_count(op, r.value, r.vector, rect), int(want.size())) << "N=" << l.N;
  }
}

TEST(EigenvectorNodes, WindingCloseToInteger) {
  const DiscreteOperator op = discretize(straight(1601), EckartParams{3.0, 1.0});
  const NearResult r = eigen_near(op, cplx(-3.7, 0.0));
  const double w = eigenvector_winding(op, r.value, r.vector, ConfirmOptions{}.strip);
  EXPECT_LT(std::abs(w - std::round(w)), 0.1);
}

TEST(Confirm, EckartSpectrum) {
  const GridPtr g = straight(801);
  const EckartParams p{3.0, 1.0};
  ConfirmOptions opt;
  opt.n_fine = 1601;
  std::vector<cplx> analytic;
  for (const EckartLevel& l : eckart_levels(p)) analytic.push_back(l.energy);
  const Confirmation c = confirm_spectrum(g, [&](const GridPtr& gr) { return discretize(gr, p); }, analytic, opt);
  EXPECT_EQ(c.n_coarse, 801u);
  EXPECT_EQ(c.n_fine, 1601u);
  ASSERT_EQ(c.matches.size(), 2u);
  for (const EigenMatch& m : c.matches) {
    EXPECT_TRUE(m.matched);
    EXPECT_LT(m.relative_error, 1e-3);
    EXPECT_LT(std::abs(m.numeric_energy.imag()), 1e-8);
  }
}
