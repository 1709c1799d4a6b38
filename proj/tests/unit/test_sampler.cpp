#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rlmc/ensemble.hpp"
#include "rlmc/errors.hpp"
#include "rlmc/estimate.hpp"
#include "rlmc/sampler.hpp"

using namespace rlmc;
using std::numbers::pi;

namespace {

SamplerConfig sphere_config(double h, double T) {
  SamplerConfig c;
  c.potential = VonMisesFisher{1.0};
  c.h = h;
  c.T = T;
  c.scheme = Scheme::RetractionEuler;
  c.initial = SpherePoint(Chart::One, pi / 4, pi / 4);
  c.seed = 77;
  return c;
}

SamplerConfig spd_config(PotentialSpec spec, double h, double T) {
  SamplerConfig c;
  c.potential = spec;
  c.h = h;
  c.T = T;
  c.scheme = Scheme::ExpEuler;
  HalfVec x0;
  x0 << 2, 4, 2, 1, 1, 0;
  c.initial = SpdPoint(hvec_inv(x0));
  c.seed = 78;
  return c;
}

bool same_point(const ManifoldPoint& a, const ManifoldPoint& b) {
  if (a.index() != b.index()) return false;
  if (const auto* p = std::get_if<SpherePoint>(&a)) {
    const auto& q = std::get<SpherePoint>(b);
    return p->chart == q.chart && p->r == q.r && p->theta == q.theta;
  }
  return std::get<SpdPoint>(a).matrix() == std::get<SpdPoint>(b).matrix();
}

const PotentialSpec kGauss = RiemannianGaussian{1.0 / std::sqrt(2.0)};

}  // namespace

TEST(SamplerConfig, StepCount) {
  EXPECT_EQ(sphere_config(0.1, 5.0).steps(), 50);
  EXPECT_EQ(sphere_config(0.0125, 5.0).steps(), 400);
  EXPECT_EQ(sphere_config(0.3, 0.3).steps(), 1);
  EXPECT_THROW(sphere_config(0.3, 1.0).steps(), ConfigError);
  EXPECT_THROW(sphere_config(0.0, 1.0).steps(), ConfigError);
  EXPECT_THROW(sphere_config(0.2, 0.1).steps(), ConfigError);
}

TEST(SamplerConfig, RejectsMismatches) {
  auto c = sphere_config(0.1, 1.0);
  c.scheme = Scheme::ExpEuler;
  EXPECT_THROW(c.validate(), ConfigError);
  c = sphere_config(0.1, 1.0);
  c.rejection_radius = 2.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = sphere_config(0.1, 1.0);
  c.initial = SpdPoint::identity();
  EXPECT_THROW(c.validate(), ConfigError);
  auto s = spd_config(kGauss, 0.1, 1.0);
  s.scheme = Scheme::RetractionEuler;
  EXPECT_THROW(s.validate(), ConfigError);
  s = spd_config(kGauss, 0.1, 1.0);
  s.rejection_radius = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s.rejection_radius = 2.7;
  EXPECT_NO_THROW(s.validate());
}

TEST(StepExpSpd, FixedPointAtIdentity) {
  const auto c = spd_config(kGauss, 0.1, 1.0);
  const SpdPoint y = step_exp_spd(SpdPoint::identity(), c, HalfVec::Zero());
  EXPECT_LT((y.matrix() - Mat<3>::Identity()).norm(), 1e-15);
}

TEST(StepExpSpd, UnitNoiseAtIdentity) {
  for (double sigma : {0.5, 1.0, 3.0}) {
    const auto c = spd_config(RiemannianGaussian{sigma}, 0.04, 1.0);
    const SpdPoint y = step_exp_spd(SpdPoint::identity(), c, HalfVec::Ones());
    Eigen::Matrix3d m;
    const double a = 1.0 / std::sqrt(2.0);
    m << 1, a, a, a, 1, a, a, a, 1;
    EXPECT_LT((y.matrix() - oracle::exp_taylor(0.2 * m)).norm(), 1e-13);
  }
}

TEST(StepSplittingSpd, ReducesToExpStep) {
  std::mt19937_64 gen(3);
  const auto c = spd_config(kGauss, 0.05, 1.0);
  // No noise: both schemes take the same drift-only move.
  const SpdPoint x(SymMatrix<3>(oracle::random_spd(gen)));
  EXPECT_LT((step_splitting_spd(x, c, HalfVec::Zero()).matrix() -
             step_exp_spd(x, c, HalfVec::Zero()).matrix())
                .norm(),
            1e-13);
  // No drift at the identity: both take the same noise-only move.
  HalfVec xi;
  xi << 1, -1, 1, 1, -1, -1;
  EXPECT_LT((step_splitting_spd(SpdPoint::identity(), c, xi).matrix() -
             step_exp_spd(SpdPoint::identity(), c, xi).matrix())
                .norm(),
            1e-13);
}

TEST(StepRetractionSphere, RestsAtModeWithoutNoise) {
  const auto c = sphere_config(0.1, 1.0);
  const SpherePoint mode(Chart::Two, pi / 2, pi / 2);
  const SpherePoint q = step_retraction_sphere(mode, c, {0.0, 0.0});
  EXPECT_EQ(q.chart, Chart::Two);
  EXPECT_NEAR(q.r, pi / 2, 1e-15);
  EXPECT_NEAR(q.theta, pi / 2, 1e-15);
}

TEST(StepRetractionSphere, SwitchesChartNearPole) {
  const auto c = sphere_config(0.01, 1.0);
  const SpherePoint q = step_retraction_sphere({Chart::One, 0.3, 1.0}, c, {0.0, 0.0});
  EXPECT_EQ(q.chart, Chart::Two);
}

TEST(StepRetractionSphere, MatchesRefinedIntegration) {
  const double h = 0.01;
  const auto c = sphere_config(h, 1.0);
  const SpherePoint p(Chart::One, pi / 2, 1.0);
  const SpherePoint q = step_retraction_sphere(p, c, {1.0, 1.0});
  // Initial velocity from the chart-1 formulas: drift -(sqrt h / 2) sin r, noise (1, 1 / sin r).
  const double s = std::sqrt(h);
  const auto y = oracle::geodesic_refined({p.r, p.theta, -s / 2 + 1.0, 1.0}, s, 100);
  const Eigen::Vector3d expect = oracle::embed<double>(1, y[0], y[1]);
  EXPECT_LT((sphere_embed(q) - expect).norm(), 1e-6);
}

TEST(StepSplittingSphere, NoNoiseIsDriftMove) {
  const auto c = sphere_config(0.04, 1.0);
  const SpherePoint p(Chart::One, 1.2, 0.4);
  const SpherePoint a = step_splitting_sphere(p, c, {0.0, 0.0});
  const SpherePoint b = step_retraction_sphere(p, c, {0.0, 0.0});
  EXPECT_LT((sphere_embed(a) - sphere_embed(b)).norm(), 1e-15);
}

TEST(Step, StaysOnManifold) {
  std::mt19937_64 gen(101);
  std::normal_distribution<double> n;
  for (Scheme scheme : {Scheme::RetractionEuler, Scheme::Splitting}) {
    auto c = sphere_config(0.05, 1.0);
    c.scheme = scheme;
    ManifoldPoint x = c.initial;
    std::array<double, 2> xi{};
    for (int k = 0; k < 100000; ++k) {
      xi = {n(gen), n(gen)};
      x = step(x, c, xi);
      const auto& p = std::get<SpherePoint>(x);
      ASSERT_TRUE(p.r > 0.0 && p.r < pi && p.theta >= 0.0 && p.theta < 2 * pi);
      ASSERT_NEAR(sphere_embed(p).norm(), 1.0, 1e-12);
    }
  }
  for (PotentialSpec spec : {kGauss, PotentialSpec{DoubleWell{}}}) {
    for (Scheme scheme : {Scheme::ExpEuler, Scheme::Splitting}) {
      auto c = spd_config(spec, 0.05, 1.0);
      c.scheme = scheme;
      ManifoldPoint x = c.initial;
      std::array<double, 6> xi{};
      for (int k = 0; k < 100000; ++k) {
        for (double& v : xi) v = n(gen);
        x = step(x, c, xi);
        const Mat<3>& m = std::get<SpdPoint>(x).matrix();
        ASSERT_EQ(m, m.transpose().eval());
        ASSERT_GT(m.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff(), 0.0);
      }
    }
  }
}

TEST(Step, NoNoiseNoDriftIsConstant) {
  auto c = spd_config(kGauss, 0.1, 1.0);
  ManifoldPoint x = SpdPoint::identity();
  const std::array<double, 6> xi{};
  for (int k = 0; k < 10; ++k) x = step(x, c, xi);
  EXPECT_LT((std::get<SpdPoint>(x).matrix() - Mat<3>::Identity()).norm(), 1e-15);
}

TEST(RunTrajectory, OneStep) {
  const auto c = sphere_config(0.1, 0.1);
  const Observable obs = Observable::sin_r();
  const TrajectoryOutcome out = run_trajectory(c, 5, &obs);
  ASSERT_TRUE(out.completed());
  const auto& done = std::get<Completed>(out.status);
  ASSERT_EQ(done.trace.size(), 1u);
  EXPECT_DOUBLE_EQ(done.trace[0], std::sin(pi / 4));

  RngStream rng(c.seed, 5);
  std::array<double, 2> xi{};
  draw(c.noise_spec(), rng, xi);
  const ManifoldPoint manual = step(c.initial, c, xi);
  EXPECT_TRUE(same_point(done.final_point, manual));
}

TEST(RunTrajectory, Deterministic) {
  const auto c = spd_config(kGauss, 0.1, 2.0);
  const auto a = run_trajectory(c, 9);
  const auto b = run_trajectory(c, 9);
  EXPECT_TRUE(same_point(std::get<Completed>(a.status).final_point,
                         std::get<Completed>(b.status).final_point));
  const auto other = run_trajectory(c, 10);
  EXPECT_FALSE(same_point(std::get<Completed>(a.status).final_point,
                          std::get<Completed>(other.status).final_point));
}

TEST(RunTrajectory, FinalSpherePointInChartOne) {
  auto c = sphere_config(0.05, 5.0);
  for (std::uint64_t id = 0; id < 50; ++id) {
    const auto out = run_trajectory(c, id);
    EXPECT_EQ(std::get<SpherePoint>(std::get<Completed>(out.status).final_point).chart, Chart::One);
  }
}

TEST(RunTrajectory, RejectsOutsideBall) {
  auto c = spd_config(kGauss, 0.1, 1.0);
  // X_0 is at distance ~1.8 from I.
  c.rejection_radius = 0.5;
  const auto out = run_trajectory(c, 0);
  ASSERT_FALSE(out.completed());
  EXPECT_EQ(std::get<Rejected>(out.status).step, 1);
}

TEST(RunTrajectory, StepFailureCarriesIndex) {
  // The double-well drift overshoots and blows up at h = 1.
  const auto c = spd_config(PotentialSpec{DoubleWell{}}, 1.0, 5.0);
  try {
    run_trajectory(c, 3);
    FAIL() << "expected TrajectoryError";
  } catch (const TrajectoryError& e) {
    EXPECT_GE(e.step(), 1);
    EXPECT_LE(e.step(), 5);
    EXPECT_EQ(e.stream_id(), 3u);
  }
}

TEST(Ensemble, IndependentOfWorkerCount) {
  const auto c = spd_config(PotentialSpec{DoubleWell{}}, 0.1, 1.0);
  EnsembleOptions one{5000, 1, 1000};
  EnsembleOptions many{5000, 3, 1000};
  const SampleTally a = run_ensemble(c, Observable::inv_one_plus_trace(), one);
  const SampleTally b = run_ensemble(c, Observable::inv_one_plus_trace(), many);
  EXPECT_EQ(a.sum, b.sum);
  EXPECT_EQ(a.sum_sq, b.sum_sq);
  EXPECT_EQ(a.count, 5000u);
  EXPECT_EQ(a.count, b.count);
}

TEST(Ensemble, CountsRejections) {
  auto c = spd_config(kGauss, 0.1, 1.0);
  c.rejection_radius = 0.5;
  const SampleTally t = run_ensemble(c, Observable::det(), {300, 2, 100});
  EXPECT_EQ(t.rejected, 300u);
  EXPECT_EQ(t.count, 0u);
  EXPECT_THROW(ensemble_estimate(t), InsufficientSamples);
}

TEST(Ensemble, SplittingAgreesWithExpEuler) {
  // Both are first order towards the same limit.
  auto c = spd_config(PotentialSpec{DoubleWell{}}, 0.05, 5.0);
  auto s = c;
  s.scheme = Scheme::Splitting;
  const EnsembleOptions opts{100000, 0, 1000};
  const auto obs = Observable::inv_one_plus_trace();
  const EstimateResult a = ensemble_estimate(run_ensemble(c, obs, opts));
  const EstimateResult b = ensemble_estimate(run_ensemble(s, obs, opts));
  const double se = std::sqrt(a.mcerr / a.n_samples + b.mcerr / b.n_samples);
  EXPECT_LT(std::abs(a.estimate - b.estimate), 3.0 * se)
      << a.estimate << " vs " << b.estimate;
}
