// SPDX-License-Identifier: Apache-2.0
#include "isac/admm.hpp"
#include "isac/model.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace isac {
namespace {

struct Instance {
  CMatrix h, s, t;
};

Instance random_instance(Rng& rng, int k, int n, int m) {
  return {oracle::random_matrix(rng, k, n), oracle::random_matrix(rng, k, m),
          oracle::random_matrix(rng, n, m)};
}

RMatrix as_pairs(const RVector& v) {
  const Eigen::Index nm = v.size() / 2;
  RMatrix p(nm, 2);
  p.col(0) = v.head(nm);
  p.col(1) = v.tail(nm);
  return p;
}

TEST(Embedding, RoundTripAndLayout) {
  Rng rng(1);
  const CMatrix x = oracle::random_matrix(rng, 3, 4);
  const RVector xr = embed(x);
  EXPECT_TRUE(xr == oracle::stack_real_imag(x));
  EXPECT_TRUE(unembed(xr, 3, 4) == x);
  EXPECT_THROW(unembed(xr, 4, 4), SpecError);
}

TEST(Selector, SymmetricIdempotentAndPartitionsIdentity) {
  const Eigen::Index nm = 6;
  RMatrix sum = RMatrix::Zero(2 * nm, 2 * nm);
  for (Eigen::Index n = 0; n < nm; ++n) {
    const RMatrix e = oracle::selector(n, nm);
    EXPECT_TRUE(e.transpose() == e);
    EXPECT_TRUE(e * e == e);
    sum += e;
  }
  EXPECT_TRUE(sum == RMatrix::Identity(2 * nm, 2 * nm));
}

TEST(BuildStacked, WeightEndpoints) {
  Rng rng(2);
  const Instance in = random_instance(rng, 2, 3, 4);
  const StackedSystem comm = build_stacked(in.h, in.s, in.t, 1.0, 1.0);
  EXPECT_EQ(comm.a.bottomRows(3).norm(), 0.0);
  EXPECT_EQ(comm.b.bottomRows(3).norm(), 0.0);
  EXPECT_TRUE(comm.a.topRows(2) == in.h);

  const StackedSystem radar = build_stacked(in.h, in.s, in.t, 0.0, 1.0);
  const CMatrix x = oracle::random_matrix(rng, 3, 4);
  EXPECT_NEAR((radar.a * x - radar.b).squaredNorm(), (x - in.t).squaredNorm(), 1e-12);
}

TEST(BuildStacked, StackedResidualEqualsWeightedObjective) {
  Rng rng(3);
  for (double rho : {0.1, 0.37, 0.9}) {
    const Instance in = random_instance(rng, 3, 4, 5);
    const CMatrix x = oracle::random_matrix(rng, 4, 5);
    const StackedSystem sys = build_stacked(in.h, in.s, in.t, rho, 0.7);
    const double lhs = (sys.a * x - sys.b).squaredNorm();
    const double rhs = rho * (in.h * x - in.s).squaredNorm() + (1.0 - rho) * (x - in.t).squaredNorm();
    EXPECT_NEAR(lhs, rhs, 1e-10 * rhs);
  }
}

TEST(BuildStacked, FactorReproducesDenseNormalMatrix) {
  Rng rng(4);
  const Instance in = random_instance(rng, 2, 3, 2);
  const double mu = 1.3;
  const StackedSystem sys = build_stacked(in.h, in.s, in.t, 0.4, mu);
  const CMatrix l = sys.gram.matrixL();
  const CMatrix llh = l * l.adjoint();
  const CMatrix gram_blocks = oracle::block_diagonal(2.0 * llh, 2);

  CMatrix a(5, 3);
  a << std::sqrt(0.4) * in.h, std::sqrt(0.6) * CMatrix::Identity(3, 3);
  const RMatrix a_bar = oracle::real_embedding(oracle::block_diagonal(a, 2));
  const RMatrix dense = 2.0 * a_bar.transpose() * a_bar + 2.0 * mu * RMatrix::Identity(12, 12);
  EXPECT_LT((oracle::real_embedding(gram_blocks) - dense).norm(), 1e-8 * dense.norm());
  EXPECT_LT((sys.b_bar - oracle::stack_real_imag(sys.b)).norm(), 1e-15);
}

TEST(BuildStacked, RejectsBadInputs) {
  Rng rng(5);
  const Instance in = random_instance(rng, 2, 3, 4);
  EXPECT_THROW(build_stacked(in.h, in.s, in.t, 1.2, 1.0), SpecError);
  EXPECT_THROW(build_stacked(in.h, in.s, in.t, 0.5, 0.0), SolverAbort);
  EXPECT_THROW(build_stacked(in.h, in.s, CMatrix::Zero(3, 3), 0.5, 1.0), SpecError);
}

AdmmState random_state(Rng& rng, Eigen::Index nm) {
  AdmmState st;
  st.x = oracle::random_real(rng, 2 * nm);
  st.alpha = oracle::random_real(rng, 2 * nm);
  st.gamma = oracle::random_real(rng, 2 * nm);
  st.u = oracle::random_real(rng, 2 * nm);
  st.w = oracle::random_real(rng, 2 * nm);
  return st;
}

TEST(XUpdate, MatchesDenseRealSolveOnSmallInstance) {
  Rng rng(6);
  const Instance in = random_instance(rng, 1, 2, 2);
  const double rho = 0.6;
  const double mu = 0.8;
  const StackedSystem sys = build_stacked(in.h, in.s, in.t, rho, mu);
  const AdmmState st = random_state(rng, 4);
  const RVector got = x_update(sys, st);
  const RVector want = oracle::dense_x_update(in.h, in.s, in.t, rho, mu, st.alpha, as_pairs(st.gamma),
                                              st.u, as_pairs(st.w));
  EXPECT_LT((got - want).norm(), 1e-9 * want.norm());
}

TEST(XUpdate, BlockSolveEqualsDenseSolveAcrossShapes) {
  Rng rng(7);
  for (int k = 1; k <= 3; ++k)
    for (int n = k; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m) {
        const Instance in = random_instance(rng, k, n, m);
        const double rho = rng.uniform();
        const double mu = 0.1 + 2.0 * rng.uniform();
        const StackedSystem sys = build_stacked(in.h, in.s, in.t, rho, mu);
        const AdmmState st = random_state(rng, n * m);
        const RVector got = x_update(sys, st);
        const RVector want = oracle::dense_x_update(in.h, in.s, in.t, rho, mu, st.alpha,
                                                    as_pairs(st.gamma), st.u, as_pairs(st.w));
        EXPECT_LT((got - want).norm(), 1e-9 * want.norm()) << "K=" << k << " N=" << n << " M=" << m;
      }
}

TEST(XUpdate, SatisfiesStationarity) {
  Rng rng(8);
  const Instance in = random_instance(rng, 2, 3, 3);
  const double rho = 0.3;
  const double mu = 1.0;
  const StackedSystem sys = build_stacked(in.h, in.s, in.t, rho, mu);
  const AdmmState st = random_state(rng, 9);
  const RVector x = x_update(sys, st);

  CMatrix a(5, 3);
  a << std::sqrt(rho) * in.h, std::sqrt(1.0 - rho) * CMatrix::Identity(3, 3);
  const RMatrix a_bar = oracle::real_embedding(oracle::block_diagonal(a, 3));
  // Gradient of the augmented Lagrangian in x; selectors sum to the identity.
  const RVector grad = 2.0 * a_bar.transpose() * (a_bar * x - sys.b_bar) + st.u + st.w +
                       mu * (x - st.alpha) + mu * (x - st.gamma);
  EXPECT_LE(grad.norm(), 1e-8 * (1.0 + sys.b_bar.norm()));
}

TEST(XUpdate, ScalarHandSolution) {
  // N = M = 1, rho = 0: x = (2 t + mu a + mu g) / (2 + 2 mu) with zero duals.
  const CMatrix h = CMatrix::Constant(1, 1, cplx(0.4, -1.0));
  const CMatrix s = CMatrix::Constant(1, 1, cplx(1.0, 1.0));
  const cplx t(0.3, -0.7);
  const cplx a(1.1, 0.2);
  const cplx g(-0.5, 0.25);
  const double mu = 0.9;
  const StackedSystem sys = build_stacked(h, s, CMatrix::Constant(1, 1, t), 0.0, mu);
  AdmmState st;
  st.alpha = embed(CMatrix::Constant(1, 1, a));
  st.gamma = embed(CMatrix::Constant(1, 1, g));
  st.u = RVector::Zero(2);
  st.w = RVector::Zero(2);
  st.x = RVector::Zero(2);
  const cplx want = (2.0 * t + mu * a + mu * g) / (2.0 + 2.0 * mu);
  const CMatrix got = unembed(x_update(sys, st), 1, 1);
  EXPECT_NEAR(std::abs(got(0, 0) - want), 0.0, 1e-14);
}

TEST(AlphaUpdate, ProjectsOntoPowerSphere) {
  Rng rng(9);
  const RVector x = oracle::random_real(rng, 40);
  const RVector u = oracle::random_real(rng, 40);
  const RVector a = alpha_update(x, u, 0.7, 20, 0.1, RVector::Zero(40));
  EXPECT_NEAR(a.squaredNorm(), 2.0, 1e-12 * 2.0);

  const RVector parallel = alpha_update(x, RVector::Zero(40), 0.7, 20, 0.1, RVector::Zero(40));
  EXPECT_NEAR(parallel.normalized().dot(x.normalized()), 1.0, 1e-14);
}

TEST(AlphaUpdate, ZeroDirectionKeepsPrevious) {
  const RVector x = RVector::Ones(6);
  const RVector u = -2.0 * RVector::Ones(6);
  const RVector prev = RVector::Constant(6, 0.25);
  EXPECT_TRUE(alpha_update(x, u, 2.0, 1, 1.0, prev) == prev);
}

TEST(AlphaUpdate, BeatsRandomSphereSamples) {
  Rng rng(10);
  const RVector x = oracle::random_real(rng, 4);
  const RVector u = oracle::random_real(rng, 4);
  const double mu = 1.5;
  const int m = 3;
  const double pt = 0.4;
  const double radius = std::sqrt(m * pt);
  auto objective = [&](const RVector& a) { return u.dot(x - a) + 0.5 * mu * (x - a).squaredNorm(); };
  const double best = objective(alpha_update(x, u, mu, m, pt, RVector::Zero(4)));
  for (int i = 0; i < 1000; ++i) {
    const RVector cand = radius * oracle::random_real(rng, 4).normalized();
    EXPECT_LE(best, objective(cand) + 1e-12);
  }
}

TEST(GammaUpdate, InsideDiskUnchanged) {
  const double pt = 0.1, eta = 2.0;
  const int n = 4;
  const double cap = pt * eta / n;
  RVector x(4);
  x << 0.1, -0.05, 0.02, 0.1;  // entries (0.1, 0.02), (-0.05, 0.1)
  ASSERT_LT(0.1 * 0.1 + 0.02 * 0.02, cap);
  const RVector g = gamma_update(x, RVector::Zero(4), 1.0, pt, eta, n);
  EXPECT_TRUE(g == x);
}

TEST(GammaUpdate, OutsideDiskLandsOnBoundary) {
  const double pt = 0.1, eta = 2.0;
  const int n = 4;
  const double cap = pt * eta / n;
  RVector x(2);
  x << 2.0 * std::sqrt(cap) * 0.6, 2.0 * std::sqrt(cap) * 0.8;  // |v|^2 = 4 cap
  const RVector g = gamma_update(x, RVector::Zero(2), 1.0, pt, eta, n);
  EXPECT_NEAR(g.squaredNorm(), cap, 1e-15);
  EXPECT_NEAR(g(0) / g(1), 0.75, 1e-14);
}

TEST(GammaUpdate, NearestPointAmongRandomDiskSamples) {
  Rng rng(11);
  const double pt = 0.1, eta = 1.5, mu = 0.8;
  const int n = 2;
  const double cap = pt * eta / n;
  const double radius = std::sqrt(cap);
  RVector x(2), w(2);
  x << 0.9, -0.4;
  w << 0.05, 0.1;
  const RVector v = x + w / mu;
  ASSERT_GT(v.squaredNorm(), cap);
  const RVector g = gamma_update(x, w, mu, pt, eta, n);
  const double d = (g - v).norm();
  for (int i = 0; i < 1000; ++i) {
    const double r = radius * std::sqrt(rng.uniform());
    const double th = 2.0 * std::numbers::pi * rng.uniform();
    RVector p(2);
    p << r * std::cos(th), r * std::sin(th);
    EXPECT_LE(d, (p - v).norm() + 1e-15);
  }
}

TEST(GammaUpdate, EveryPairWithinCap) {
  Rng rng(12);
  const double pt = 0.1, eta = 2.0;
  const int n = 4;
  const double cap = pt * eta / n;
  const RVector g = gamma_update(oracle::random_real(rng, 64), oracle::random_real(rng, 64), 0.5, pt, eta, n);
  for (Eigen::Index k = 0; k < 32; ++k) EXPECT_LE(g(k) * g(k) + g(k + 32) * g(k + 32), cap + 1e-12);
}

TEST(DualUpdate, ZeroResidualKeepsDuals) {
  Rng rng(13);
  const RVector x = oracle::random_real(rng, 8);
  const RVector u = oracle::random_real(rng, 8);
  const RVector w = oracle::random_real(rng, 8);
  const Duals d = dual_update(x, x, x, u, w, 1.7);
  EXPECT_TRUE(d.u == u);
  EXPECT_TRUE(d.w == w);
}

TEST(DualUpdate, ZeroPenaltyKeepsDuals) {
  Rng rng(14);
  const RVector x = oracle::random_real(rng, 8);
  const RVector a = oracle::random_real(rng, 8);
  const RVector g = oracle::random_real(rng, 8);
  const RVector u = oracle::random_real(rng, 8);
  const RVector w = oracle::random_real(rng, 8);
  const Duals d = dual_update(x, a, g, u, w, 0.0);
  EXPECT_TRUE(d.u == u);
  EXPECT_TRUE(d.w == w);
}

TEST(DualUpdate, MatchesSelectorFormula) {
  Rng rng(15);
  const Eigen::Index nm = 5;
  const RVector x = oracle::random_real(rng, 2 * nm);
  const RVector a = oracle::random_real(rng, 2 * nm);
  const RVector g = oracle::random_real(rng, 2 * nm);
  const RVector u = oracle::random_real(rng, 2 * nm);
  const RVector w = oracle::random_real(rng, 2 * nm);
  const double mu = 0.6;
  const Duals d = dual_update(x, a, g, u, w, mu);
  for (Eigen::Index k = 0; k < 2 * nm; ++k) EXPECT_NEAR(d.u(k), u(k) + mu * (x(k) - a(k)), 1e-15);
  for (Eigen::Index n = 0; n < nm; ++n) {
    const RVector ex = oracle::selector(n, nm) * x;
    EXPECT_NEAR(d.w(n), w(n) + mu * (ex(n) - g(n)), 1e-15);
    EXPECT_NEAR(d.w(n + nm), w(n + nm) + mu * (ex(n + nm) - g(n + nm)), 1e-15);
  }
}

TEST(SolveInner, UnconstrainedPeakApproachesLeastSquares) {
  Rng rng(16);
  const int k = 3, n = 6, m = 8;
  const double pt = 0.5;
  const Instance in = random_instance(rng, k, n, m);
  const StackedSystem sys = build_stacked(in.h, in.s, in.t, 1.0, 1.0);
  const WaveformLimits limits{pt, static_cast<double>(n * m), n, m};
  const CMatrix x_ls = least_squares_precoder(in.h, in.s, pt);
  AdmmState st = AdmmState::from_waveform(x_ls);
  const InnerResult res = solve_inner(sys, st, limits, 500, 1e-9);
  EXPECT_LE(mui_power(in.h, res.x, in.s), 1.05 * mui_power(in.h, x_ls, in.s));
  EXPECT_NEAR(res.x.squaredNorm(), m * pt, 1e-10 * m * pt);
}

TEST(SolveInner, MeetsPaprLimitAtConvergence) {
  Rng rng(17);
  const int k = 4, n = 16, m = 20;
  const double pt = 0.1;
  const Instance in = random_instance(rng, k, n, m);
  const StackedSystem sys = build_stacked(in.h, in.s, in.t * std::sqrt(pt / n), 0.5, 1.0);
  const WaveformLimits limits{pt, 2.0, n, m};
  AdmmState st = AdmmState::from_waveform(least_squares_precoder(in.h, in.s, pt));
  const InnerResult res = solve_inner(sys, st, limits, 2000, 1e-7);
  EXPECT_TRUE(res.diagnostics.converged);
  EXPECT_LE(papr(res.x), 2.0 * (1.0 + 1e-3));
  EXPECT_NEAR(res.x.squaredNorm(), m * pt, 1e-10 * m * pt);

  // alpha sits on the power sphere, gamma pairs inside the peak disk.
  EXPECT_NEAR(st.alpha.squaredNorm(), m * pt, 1e-10 * m * pt);
  const Eigen::Index nm = n * m;
  for (Eigen::Index i = 0; i < nm; ++i) {
    EXPECT_LE(st.gamma(i) * st.gamma(i) + st.gamma(i + nm) * st.gamma(i + nm), limits.peak_power() + 1e-12);
  }
  double running = std::numeric_limits<double>::infinity();
  for (double r : st.residual_history) {
    EXPECT_LE(std::min(running, r), running);
    running = std::min(running, r);
  }
  EXPECT_LT(running, 1e-7 * std::sqrt(limits.energy()));
}

TEST(SolveInner, AbortsOnNonFiniteState) {
  Rng rng(18);
  const Instance in = random_instance(rng, 1, 2, 2);
  const StackedSystem sys = build_stacked(in.h, in.s, in.t, 0.5, 1.0);
  AdmmState st = AdmmState::from_waveform(in.t);
  st.u(0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve_inner(sys, st, WaveformLimits{1.0, 2.0, 2, 2}, 10, 1e-6), SolverAbort);
}

}  // namespace
}  // namespace isac
