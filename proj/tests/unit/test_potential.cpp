#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rlmc/errors.hpp"
#include "rlmc/potential.hpp"
#include "rlmc/quadrature.hpp"

using namespace rlmc;
using std::numbers::pi;

namespace {

const PotentialSpec kVmf = VonMisesFisher{1.0};
const PotentialSpec kGauss = RiemannianGaussian{1.0 / std::sqrt(2.0)};
const PotentialSpec kWell = DoubleWell{};

}  // namespace

TEST(GaussLegendre, ExactForPolynomials) {
  const QuadratureRule q = gauss_legendre(5, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], 9);
  EXPECT_NEAR(s, (std::pow(2.0, 10) - 1.0) / 10.0, 1e-12);
  const QuadratureRule one = gauss_legendre(1, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(one.nodes[0], 0.5);
  EXPECT_DOUBLE_EQ(one.weights[0], 1.0);
}

TEST(GaussLegendre, SmoothIntegrand) {
  const QuadratureRule q = gauss_legendre(64, 0.0, pi);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::sin(q.nodes[i]);
  EXPECT_NEAR(s, 2.0, 1e-14);
}

TEST(PotentialSpec, Validation) {
  EXPECT_THROW(validate(PotentialSpec{VonMisesFisher{0.0}}), ConfigError);
  EXPECT_THROW(validate(PotentialSpec{RiemannianGaussian{-1.0}}), ConfigError);
  EXPECT_NO_THROW(validate(kWell));
  EXPECT_EQ(manifold_of(kVmf), ManifoldKind::Sphere2);
  EXPECT_EQ(manifold_of(kWell), ManifoldKind::Spd3);
}

TEST(PotentialValue, Examples) {
  EXPECT_NEAR(potential_value(VonMisesFisher{2.0}, {Chart::One, pi / 3, 0.0}), -1.0, 1e-15);
  const double e = std::numbers::e;
  const SpdPoint x(SymMatrix<3>::diagonal(Vec<3>(e, 1, 1)));
  EXPECT_NEAR(potential_value(kGauss, x), 1.0, 1e-14);
  EXPECT_NEAR(potential_value(kWell, x), 0.0, 1e-14);
}

TEST(SpdDrift, Examples) {
  EXPECT_LT(spd_drift_matrix(SpdPoint::identity(), kGauss, 0.1).matrix().norm(), 1e-15);
  EXPECT_LT(spd_drift_matrix(SpdPoint::identity(), kWell, 0.1).matrix().norm(), 1e-15);

  const double e = std::numbers::e;
  const SpdPoint x(SymMatrix<3>::diagonal(Vec<3>(e, 1, 1)));
  const SymMatrix<3> d = spd_drift_matrix(x, RiemannianGaussian{1.0}, 0.1);
  EXPECT_NEAR(d(0, 0), -0.05, 1e-15);
  EXPECT_NEAR(d.matrix().norm(), 0.05, 1e-15);

  // rho(X, I) = 1/sqrt(2) zeroes the double-well drift.
  const double a = std::exp(0.5);
  const SpdPoint y(SymMatrix<3>::diagonal(Vec<3>(a, 1.0 / a, 1)));
  EXPECT_LT(spd_drift_matrix(y, kWell, 0.3).matrix().norm(), 1e-15);

  EXPECT_THROW(spd_drift_matrix(x, kVmf, 0.1), UnsupportedError);
}

TEST(SpdDrift, Symmetric) {
  Mat<3> m;
  m << 2, 0.3, -0.4, 0.3, 1.5, 0.2, -0.4, 0.2, 0.8;
  const SymMatrix<3> d = spd_drift_matrix(SpdPoint(SymMatrix<3>(m)), kWell, 0.2);
  EXPECT_EQ(d.matrix(), d.matrix().transpose().eval());
}

TEST(Observable, Names) {
  EXPECT_EQ(observable_from_name("sin_r").kind(), Observable::Kind::SinR);
  EXPECT_EQ(observable_from_name("det").kind(), Observable::Kind::Det);
  EXPECT_EQ(observable_from_name("inv1ptr").kind(), Observable::Kind::InvOnePlusTrace);
  EXPECT_THROW(observable_from_name("cos_r"), UnsupportedError);
}

TEST(Observable, Values) {
  const SpherePoint p(Chart::One, 0.4, 2.0);
  EXPECT_NEAR(Observable::sin_r()(p), std::sin(0.4), 1e-15);
  EXPECT_NEAR(Observable::sin_r()(sphere_transition(p)), std::sin(0.4), 1e-14);
  const SpdPoint x(SymMatrix<3>::diagonal(Vec<3>(2, 3, 4)));
  EXPECT_NEAR(Observable::det()(x), 24.0, 1e-13);
  EXPECT_NEAR(Observable::inv_one_plus_trace()(x), 0.1, 1e-16);
  EXPECT_THROW(Observable::det()(p), UnsupportedError);
  EXPECT_THROW(Observable::sin_r()(x), UnsupportedError);
}

TEST(ReferenceValue, PublishedValues) {
  EXPECT_NEAR(reference_value(kVmf, Observable::sin_r()), 0.7554024361, 1e-6);
  EXPECT_NEAR(reference_value(kGauss, Observable::det()), 2.11699998, 1e-5);
  EXPECT_NEAR(reference_value(kWell, Observable::inv_one_plus_trace()), 0.2204801571878534, 1e-6);
}

TEST(ReferenceValue, VmfClosedForm) {
  // E[sin r] under exp(lambda cos r) sin r dr; the numerator is pi I_1(lambda) / lambda.
  const double lambda = 1.0;
  const double numerator = pi * std::cyl_bessel_i(1.0, lambda) / lambda;
  const double denominator = 2.0 * std::sinh(lambda) / lambda;
  EXPECT_NEAR(reference_value(kVmf, Observable::sin_r()), numerator / denominator, 1e-13);
}

TEST(ReferenceValue, ConvergedUnderNodeDoubling) {
  QuadratureOptions fine;
  fine.sphere_nodes *= 2;
  fine.sphere_theta_nodes *= 2;
  fine.spd_nodes *= 2;
  for (const auto& [spec, obs] : {std::pair{kVmf, Observable::sin_r()},
                                  std::pair{kGauss, Observable::det()},
                                  std::pair{kWell, Observable::inv_one_plus_trace()}}) {
    EXPECT_LT(std::abs(reference_value(spec, obs) - reference_value(spec, obs, fine)), 1e-7)
        << describe(spec);
  }
}

TEST(ReferenceValue, CustomSphereObservables) {
  const Observable one = Observable::custom("one", [](const SpherePoint&) { return 1.0; });
  EXPECT_NEAR(reference_value(kVmf, one), 1.0, 1e-14);

  const Observable sin_custom = Observable::custom(
      "sin_r_2d", [](const SpherePoint& p) { return Observable::sin_r()(p); });
  EXPECT_NEAR(reference_value(kVmf, sin_custom), reference_value(kVmf, Observable::sin_r()), 1e-13);

  // E[x] vanishes by symmetry in theta.
  const Observable x = Observable::custom("x", [](const SpherePoint& p) { return sphere_embed(p)(0); });
  EXPECT_NEAR(reference_value(kVmf, x), 0.0, 1e-14);
}

TEST(ReferenceValue, Unsupported) {
  EXPECT_THROW(reference_value(kVmf, Observable::det()), UnsupportedError);
  EXPECT_THROW(reference_value(kGauss, Observable::sin_r()), UnsupportedError);
  const Observable f = Observable::custom("f", [](const SpdPoint& x) { return x(0, 0); });
  EXPECT_THROW(reference_value(kGauss, f), UnsupportedError);
}
