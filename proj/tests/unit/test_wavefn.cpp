#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptdoublet/wavefn.hpp"
#include "test_util.hpp"

using namespace ptdoublet;

namespace {
const cplx kI{0.0, 1.0};

GridPtr reference_grid() {
  static const GridPtr g = build_grid(EpsilonProfile::decaying(0.25), -12, 12, 2001);
  return g;
}

std::vector<cplx> eckart_potential(const EckartParams& p, const GridPtr& g) {
  std::vector<cplx> v(g->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = v_eckart((*g)[k].r, p);
  return v;
}

int oracle_count(int N, double delta, double beta, const GridPtr& g, const StripRect& rect) {
  return int(oracle::jacobi_zeros_in_strip(N, delta, beta, g->profile(), g->t_min() + rect.margin,
                                           g->t_max() - rect.margin, rect.below, rect.above)
                 .size());
}
}  // namespace

TEST(DeriveUV, WorkedExample) {
  const UVParams p = derive_uv(0, 2.0, 1.0);
  EXPECT_EQ(p.u, cplx(1.0, -0.25));
  EXPECT_EQ(p.v, cplx(1.0, 0.25));
  EXPECT_EQ(p.b, cplx(0.0));
  EXPECT_EQ(p.c, 1.0 + 2.0 * p.u);
  EXPECT_EQ(p.a, cplx(2.0 * 3.0 - 0.0 - 1.0));
  const double E = -3.75;
  EXPECT_LT(std::abs(4.0 * p.u * p.u + 2.0 * kI + E), 1e-12);
  EXPECT_LT(std::abs(4.0 * p.v * p.v - 2.0 * kI + E), 1e-12);
}

TEST(DeriveUV, InvariantsSweep) {
  for (int N = 0; N <= 4; ++N) {
    for (double delta : {0.2, 1.0, 8.99}) {
      for (double beta : {0.0, 0.5, 3.0}) {
        const UVParams p = derive_uv(N, delta, beta);
        const double E = eckart_energy(delta, beta);
        EXPECT_LT(std::abs(4.0 * p.u * p.u + 2.0 * kI * beta + E), 1e-12 * std::max(1.0, std::abs(E)));
        EXPECT_LT(std::abs(4.0 * p.v * p.v - 2.0 * kI * beta + E), 1e-12 * std::max(1.0, std::abs(E)));
        EXPECT_LT(std::abs(p.u + p.v - delta), 1e-14 * delta);
        EXPECT_LT(std::abs(p.u - p.v + kI * beta / delta), 1e-14 * std::max(1.0, beta / delta));
        EXPECT_EQ(p.b, cplx(-N));
      }
    }
  }
  const UVParams h = derive_uv(0, 2.0, 0.0);
  EXPECT_EQ(h.u, cplx(1.0));
  EXPECT_EQ(h.v, cplx(1.0));
}

TEST(DeriveUV, Errors) {
  EXPECT_PT_ERROR(derive_uv(0, 0.0, 1.0), ErrorCode::InvalidDelta);
  EXPECT_PT_ERROR(derive_uv(0, -2.0, 1.0), ErrorCode::InvalidDelta);
}

TEST(Jacobi, Examples) {
  EXPECT_EQ(jacobi_poly(0, cplx(0.3, 1.0), cplx(-2.0, 0.1), cplx(5.0, -1.0)), cplx(1.0));
  EXPECT_LT(std::abs(jacobi_poly(1, 1.0, 1.0, 0.0)), 1e-15);
  EXPECT_NEAR(jacobi_poly(2, 0.0, 0.0, 1.0).real(), 1.0, 1e-15);
  // P_N^{(a, b)}(1) = binom(N + a, N).
  EXPECT_NEAR(jacobi_poly(3, 2.0, 0.5, 1.0).real(), 10.0, 1e-13);
  // Legendre P_3(x) = (5x^3 - 3x)/2.
  const cplx x(0.3, -0.7);
  EXPECT_LT(std::abs(jacobi_poly(3, 0.0, 0.0, x) - (5.0 * x * x * x - 3.0 * x) / 2.0), 1e-14);
}

TEST(Jacobi, DerivativeMatchesDifference) {
  const cplx a(0.9, -0.2), b(1.1, 0.2), z(1.3, 0.4);
  const double h = 1e-6;
  for (int N = 0; N <= 4; ++N) {
    const cplx num = (jacobi_poly(N, a, b, z + h) - jacobi_poly(N, a, b, z - h)) / (2 * h);
    EXPECT_LT(std::abs(num - jacobi_poly_derivative(N, a, b, z)), 1e-7 * std::max(1.0, std::abs(num)));
  }
  EXPECT_EQ(jacobi_poly_derivative(0, a, b, z), cplx(0.0));
}

TEST(Hyp2F1, Examples) {
  EXPECT_EQ(hyp2f1_terminating(cplx(3.0, 1.0), 0, cplx(0.5), cplx(9.0)), cplx(1.0));
  EXPECT_NEAR(std::abs(hyp2f1_terminating(2.0, 1, 3.0, 0.5) - 2.0 / 3.0), 0.0, 1e-15);
  EXPECT_PT_ERROR(hyp2f1_terminating(1.0, -1, 1.0, 0.5), ErrorCode::BadParameters);
  EXPECT_PT_ERROR(hyp2f1_terminating(1.0, 3, -1.0, 0.5), ErrorCode::BadParameters);
  EXPECT_NO_THROW(hyp2f1_terminating(1.0, 1, -1.0, 0.5));  // (c)_1 = -1 is fine
}

TEST(Hyp2F1, RatioToJacobiIsConstant) {
  // P_N^{(a,b)}(x) = binom(N+a, N) 2F1(-N, N+a+b+1; a+1; (1-x)/2).
  const UVParams uv = derive_uv(3, 0.6, 1.0);
  const cplx a = 2.0 * uv.u, b = 2.0 * uv.v;
  std::vector<cplx> ratios;
  for (int i = 0; i < 10; ++i) {
    const cplx x(1.7 + 0.3 * i, 0.1 * i - 0.4);
    ratios.push_back(hyp2f1_terminating(3.0 + a + b + 1.0, 3, a + 1.0, (1.0 - x) / 2.0) / jacobi_poly(3, a, b, x));
  }
  for (const cplx& r : ratios) EXPECT_LT(std::abs(r / ratios.front() - 1.0), 1e-10);
}

TEST(EckartState, JacobiParamsStandardMatchOracle) {
  const EckartState s({3.0, 1.0}, 1, reference_grid());
  const auto [a, b] = s.jacobi_params();
  const auto [oa, ob] = oracle::eckart_jacobi_params(s.delta(), 1.0);
  EXPECT_LT(std::abs(a - oa), 1e-15);
  EXPECT_LT(std::abs(b - ob), 1e-15);
  const EckartState halved({3.0, 1.0}, 1, reference_grid(), JacobiConvention::Halved);
  EXPECT_LT(std::abs(halved.jacobi_params().first - oa / 4.0), 1e-15);
}

TEST(EckartState, Errors) {
  EXPECT_PT_ERROR(EckartState({3.0, 1.0}, 2, reference_grid()), ErrorCode::InadmissibleN);
  EXPECT_PT_ERROR(EckartState({3.0, 1.0}, -1, reference_grid()), ErrorCode::BadParameters);
  EXPECT_PT_ERROR(EckartState({0.5, 1.0}, 0, reference_grid()), ErrorCode::InadmissibleN);
}

TEST(EckartState, GroundStateClosedForm) {
  const EckartParams p{3.0, 1.0};
  const EckartState s(p, 0, reference_grid());
  const GridPtr g = reference_grid();
  // Ratio to the principal-branch formula is a constant of modulus one.
  const std::size_t a = g->anchor_index();
  auto direct = [&](std::size_t k) {
    const cplx r = (*g)[k].r;
    return std::pow(1.0 / std::sinh(r), 2.0) * std::exp(kI * 0.5 * r);
  };
  const cplx c = s.at(a) / direct(a);
  for (std::size_t k = a - 200; k <= a + 200; k += 20) EXPECT_LT(std::abs(s.at(k) / direct(k) / c - 1.0), 1e-12);
}

TEST(EckartState, LogDerivative) {
  const EckartState s({3.0, 1.0}, 1, reference_grid());
  const cplx r(0.8, -0.15);
  const double h = 1e-6;
  const cplx num = (std::log(s(r + h)) - std::log(s(r - h))) / (2 * h);
  EXPECT_LT(std::abs(num - s.log_derivative_r(r)), 1e-7);
}

TEST(Residual, EckartStates) {
  const EckartParams p{3.0, 1.0};
  const GridPtr g = reference_grid();
  const auto v = eckart_potential(p, g);
  for (int N = 0; N <= 1; ++N) {
    const EckartState s(p, N, g);
    EXPECT_LT(schrodinger_residual(sample(s), v, s.energy(), Variable::R), 1e-6) << N;
  }
}

TEST(Residual, HalvedConventionFails) {
  const EckartParams p{3.0, 1.0};
  const GridPtr g = reference_grid();
  const EckartState s(p, 1, g, JacobiConvention::Halved);
  EXPECT_GT(schrodinger_residual(sample(s), eckart_potential(p, g), s.energy(), Variable::R), 1e-3);
}

class TargetStates : public ::testing::TestWithParam<std::tuple<int, Branch>> {};

TEST_P(TargetStates, ResidualBelowBound) {
  const auto [N, q] = GetParam();
  const GridPtr g = reference_grid();
  const NatanzonState s({1.0, 10.0}, N, q, g);
  const NatanzonPotential v({1.0, 10.0}, g);
  EXPECT_LT(schrodinger_residual(sample(s), v.values(), s.energy(), Variable::Xi), 1e-5);
}

TEST_P(TargetStates, LiouvilleMapSpread) {
  const auto [N, q] = GetParam();
  const GridPtr g = reference_grid();
  const NatanzonState d({1.0, 10.0}, N, q, g);
  const EckartState e(d.eckart_partner(), N, g);
  const MapSpread m = liouville_map_spread(d, e);
  EXPECT_LT(m.relative_spread, 1e-8);
  EXPECT_GT(std::abs(m.constant), 0.0);
}

TEST_P(TargetStates, PTDefect) {
  const auto [N, q] = GetParam();
  const NatanzonState s({1.0, 10.0}, N, q, reference_grid());
  EXPECT_LT(pt_symmetry_defect(sample(s)), 1e-8);
}

TEST_P(TargetStates, NodesAgreeWithOracle) {
  const auto [N, q] = GetParam();
  const GridPtr g = reference_grid();
  const NatanzonState s({1.0, 10.0}, N, q, g);
  const StripRect rect{};
  EXPECT_EQ(count_nodes(sample(s), rect), oracle_count(N, s.delta(), 1.0, g, rect));
}

INSTANTIATE_TEST_SUITE_P(Doublets, TargetStates,
                         ::testing::Combine(::testing::Values(0, 1), ::testing::Values(Branch::Plus, Branch::Minus)));

TEST(NatanzonState, Errors) {
  EXPECT_PT_ERROR(NatanzonState({1.0, 10.0}, 2, Branch::Plus, reference_grid()), ErrorCode::InadmissibleN);
  EXPECT_PT_ERROR(NatanzonState({1.0, 10.0}, 0, Branch::Plus, -1.0, reference_grid()), ErrorCode::InvalidDelta);
  const NatanzonState s({1.0, 10.0}, 0, Branch::Minus, reference_grid());
  EXPECT_PT_ERROR(s(xi_of_r(cplx(0.5, -1.4))), ErrorCode::BranchUndefined);
}

TEST(NatanzonState, ExplicitDeltaMatchesLookup) {
  const GridPtr g = reference_grid();
  const NatanzonState a({1.0, 10.0}, 0, Branch::Minus, g);
  const NatanzonState b({1.0, 10.0}, 0, Branch::Minus, a.delta(), g);
  for (std::size_t k = 0; k < g->size(); k += 111) EXPECT_EQ(a.at(k), b.at(k));
  EXPECT_EQ(psi_natanzon((*g)[700].xi, 0, Branch::Minus, {1.0, 10.0}, g), a.at(700));
}

TEST(NatanzonState, LogDerivativeT) {
  const GridPtr g = reference_grid();
  const NatanzonState s({1.0, 10.0}, 1, Branch::Minus, g);
  const EpsilonProfile& prof = g->profile();
  const double t = 0.813, h = 1e-6;
  const cplx num =
      (std::log(s(xi_of_r(r_of_t(t + h, prof)))) - std::log(s(xi_of_r(r_of_t(t - h, prof))))) / (2 * h);
  EXPECT_LT(std::abs(num - s.log_derivative_t(t)), 1e-6 * std::max(1.0, std::abs(num)));
}

TEST(Decay, SlopesMatchDelta) {
  const GridPtr g = reference_grid();
  for (Branch q : {Branch::Plus, Branch::Minus}) {
    const NatanzonState s({1.0, 10.0}, 0, q, g);
    const DecayFit f = decay_rate(sample(s));
    EXPECT_NEAR(f.slope_left, -s.delta(), 0.02 * s.delta());
    EXPECT_NEAR(f.slope_right, -s.delta(), 0.02 * s.delta());
  }
  const EckartState e({3.0, 1.0}, 0, g);
  const DecayFit fe = decay_rate(sample(e));
  EXPECT_NEAR(fe.slope_right, -2.0, 0.04);
}

TEST(Decay, ScaleInvariantAndTailErrors) {
  const GridPtr g = reference_grid();
  WaveSamples s = sample(NatanzonState({1.0, 10.0}, 0, Branch::Minus, g));
  const DecayFit a = decay_rate(s);
  for (cplx& v : s.values) v *= cplx(3.0, -7.0);
  const DecayFit b = decay_rate(s);
  EXPECT_NEAR(a.slope_left, b.slope_left, 1e-12);
  EXPECT_NEAR(a.slope_right, b.slope_right, 1e-12);
  EXPECT_PT_ERROR(decay_rate(s, 11.9), ErrorCode::TailTooShort);
  const GridPtr coarse = build_grid(EpsilonProfile::decaying(0.25), -3, 3, 61);
  EXPECT_PT_ERROR(decay_rate(sample(NatanzonState({1.0, 10.0}, 0, Branch::Minus, coarse))), ErrorCode::TailTooShort);
}

TEST(PTDefect, ReversedAndBroken) {
  const GridPtr g = reference_grid();
  WaveSamples s = sample(NatanzonState({1.0, 10.0}, 0, Branch::Minus, g));
  const double d0 = pt_symmetry_defect(s);
  WaveSamples rev = s;
  std::reverse(rev.values.begin(), rev.values.end());
  EXPECT_DOUBLE_EQ(pt_symmetry_defect(rev), d0);
  WaveSamples broken = s;
  for (std::size_t k = 0; k < g->size(); ++k) broken.values[k] *= 1.0 + 0.1 * (*g)[k].t;
  EXPECT_GT(pt_symmetry_defect(broken), 0.01);
  const GridPtr lopsided = build_grid(EpsilonProfile::decaying(0.25), -12, 10, 1001);
  EXPECT_PT_ERROR(pt_symmetry_defect(sample(NatanzonState({1.0, 10.0}, 0, Branch::Minus, lopsided))),
                  ErrorCode::AsymmetricGrid);
}

TEST(Residual, RandomSamplesAreNotSolutions) {
  const GridPtr g = reference_grid();
  WaveSamples s = sample(NatanzonState({1.0, 10.0}, 0, Branch::Minus, g));
  std::mt19937 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (cplx& v : s.values) v = cplx(n(rng), n(rng));
  EXPECT_GT(schrodinger_residual(s, NatanzonPotential({1.0, 10.0}, g).values(), s.energy, Variable::Xi), 0.1);
}

TEST(Residual, Errors) {
  const GridPtr tiny = build_grid(EpsilonProfile::decaying(0.25), -0.4, 0.4, 9);
  const NatanzonState s({1.0, 10.0}, 0, Branch::Minus, tiny);
  const WaveSamples w = sample(s);
  const auto v = NatanzonPotential({1.0, 10.0}, tiny).values();
  EXPECT_PT_ERROR(schrodinger_residual(w, v, s.energy(), Variable::Xi), ErrorCode::GridTooCoarse);
  EXPECT_NO_THROW(schrodinger_residual(w, v, s.energy(), Variable::Xi, 2));
  std::vector<cplx> shorter(v.begin(), v.end() - 1);
  EXPECT_PT_ERROR(schrodinger_residual(w, shorter, s.energy(), Variable::Xi, 2), ErrorCode::BadParameters);
}

TEST(Residual, ProfileHasNanEdges) {
  const GridPtr g = reference_grid();
  const NatanzonState s({1.0, 10.0}, 0, Branch::Minus, g);
  const auto prof = schrodinger_residual_profile(sample(s), NatanzonPotential({1.0, 10.0}, g).values(), s.energy(),
                                                 Variable::Xi, 3);
  ASSERT_EQ(prof.size(), g->size());
  for (int k = 0; k < 3; ++k) {
    EXPECT_TRUE(std::isnan(prof[k]));
    EXPECT_TRUE(std::isnan(prof[prof.size() - 1 - k]));
  }
  EXPECT_FALSE(std::isnan(prof[3]));
}

TEST(Stencil, CentralWeights) {
  const auto w = central_weights(2);
  ASSERT_EQ(w.size(), 3u);
  const std::vector<double> d2{-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  const std::vector<double> d1{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(w[2][i], d2[i], 1e-14);
    EXPECT_NEAR(w[1][i], d1[i], 1e-14);
    EXPECT_NEAR(w[0][i], i == 2 ? 1.0 : 0.0, 1e-14);
  }
}

TEST(Nodes, GroundStatesHaveNone) {
  const GridPtr g = reference_grid();
  for (Branch q : {Branch::Plus, Branch::Minus}) {
    EXPECT_EQ(count_nodes(sample(NatanzonState({1.0, 10.0}, 0, q, g))), 0);
  }
  EXPECT_EQ(count_nodes(sample(EckartState({3.0, 1.0}, 0, g))), 0);
}

TEST(Nodes, WiderStripFindsOracleZero) {
  // The N = 1 minus-branch zero sits near t = -0.27i, outside the default strip.
  const GridPtr g = reference_grid();
  const NatanzonState s({1.0, 10.0}, 1, Branch::Minus, g);
  StripRect rect;
  rect.below = 0.35;
  const int want = oracle_count(1, s.delta(), 1.0, g, rect);
  EXPECT_EQ(want, 1);
  EXPECT_EQ(count_nodes(sample(s), rect), want);
}

TEST(Nodes, HermitianSingleLevel) {
  const GridPtr g = reference_grid();
  const NatanzonState s({0.0, 10.0}, 1, Branch::Plus, g);
  const StripRect rect{};
  EXPECT_EQ(count_nodes(sample(s), rect), oracle_count(1, s.delta(), 0.0, g, rect));
}

TEST(Nodes, EckartAgreesWithOracle) {
  const GridPtr g = reference_grid();
  const EckartState s({3.0, 1.0}, 1, g);
  StripRect rect;
  rect.below = 0.35;
  EXPECT_EQ(count_nodes(sample(s), rect), oracle_count(1, s.delta(), 1.0, g, rect));
}

TEST(Nodes, WindingOfKnownFunction) {
  // (t - 0.1i)(t + 0.05i) has two zeros inside the default rectangle.
  auto ld = [](cplx t) { return 1.0 / (t - cplx(0.0, 0.1)) + 1.0 / (t + cplx(0.0, 0.05)); };
  EXPECT_NEAR(winding_number(ld, -3.0, 3.0, 0.2, 0.2), 2.0, 1e-8);
  EXPECT_NEAR(winding_number(ld, 1.0, 3.0, 0.2, 0.2), 0.0, 1e-8);
}

TEST(Annotate, FillsBothFields) {
  WaveSamples s = sample(NatanzonState({1.0, 10.0}, 0, Branch::Minus, reference_grid()));
  EXPECT_FALSE(s.decay_fit.has_value());
  annotate(s);
  ASSERT_TRUE(s.decay_fit.has_value());
  ASSERT_TRUE(s.node_count.has_value());
  EXPECT_EQ(*s.node_count, 0);
  EXPECT_EQ(s.q, -1);
  EXPECT_EQ(s.normalization, "unnormalized");
}
