#include "rlmc/manifold.hpp"

#include <array>
#include <cmath>
#include <string>

namespace rlmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (r, theta, y, z): position and velocity of the geodesic in chart coordinates.
using GeodesicVec = std::array<double, 4>;

GeodesicVec geodesic_rhs(const GeodesicVec& u) {
  const double sr = std::sin(u[0]);
  const double cr = std::cos(u[0]);
  const double y = u[2];
  const double z = u[3];
  return {y, z, sr * cr * z * z, -2.0 * (cr / sr) * y * z};
}

GeodesicVec axpy(const GeodesicVec& u, double a, const GeodesicVec& k) {
  return {u[0] + a * k[0], u[1] + a * k[1], u[2] + a * k[2], u[3] + a * k[3]};
}

// Stages may leave (0, pi): the coordinate formulas extend smoothly past the
// poles and describe the same great circles there. Only sin r = 0 is singular.
constexpr double kMinSinR = 1e-9;

void require_regular(const GeodesicVec& u, const char* stage) {
  if (!std::isfinite(u[0]) || !std::isfinite(u[1]) || !std::isfinite(u[2]) ||
      !std::isfinite(u[3]) || std::abs(std::sin(u[0])) < kMinSinR) {
    throw StepOutOfChart(std::string("RK4 ") + stage + " hit the coordinate singularity: r = " +
                         std::to_string(u[0]));
  }
}

// Brings r back into (0, pi) using (r, theta) ~ (-r, theta + pi) and 2 pi periodicity.
GeodesicVec fold_into_chart(GeodesicVec u) {
  u[0] = std::remainder(u[0], kTwoPi);
  if (u[0] < 0.0) {
    u[0] = -u[0];
    u[1] += kPi;
    u[2] = -u[2];
  }
  return u;
}

}  // namespace

Chart other(Chart c) { return c == Chart::One ? Chart::Two : Chart::One; }

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod of a tiny negative angle can round back up to exactly 2 pi.
  if (t >= kTwoPi) t = 0.0;
  return t;
}

SpherePoint::SpherePoint(Chart c, double r_in, double theta_in) : chart(c), r(r_in) {
  if (!(r_in > 0.0 && r_in < kPi) || !std::isfinite(theta_in)) {
    throw ChartDomainError("sphere point needs r in (0, pi), got r = " + std::to_string(r_in));
  }
  theta = normalize_angle(theta_in);
}

bool in_chart_band(const SpherePoint& p) {
  return p.r >= kChartEpsilon && p.r <= kPi - kChartEpsilon;
}

Eigen::Vector3d sphere_embed(const SpherePoint& p) {
  const double sr = std::sin(p.r);
  const double cr = std::cos(p.r);
  const double ct = std::cos(p.theta);
  const double st = std::sin(p.theta);
  if (p.chart == Chart::One) return {sr * ct, sr * st, cr};
  return {cr, sr * ct, sr * st};
}

SpherePoint sphere_from_embedding(Chart chart, const Eigen::Vector3d& x) {
  // (polar axis, first equatorial axis, second equatorial axis) per chart.
  const int axis = chart == Chart::One ? 2 : 0;
  const int e1 = chart == Chart::One ? 0 : 1;
  const int e2 = chart == Chart::One ? 1 : 2;
  const double r = std::atan2(std::hypot(x(e1), x(e2)), x(axis));
  const double theta = std::atan2(x(e2), x(e1));
  return SpherePoint(chart, r, theta);
}

SpherePoint sphere_transition(const SpherePoint& p) {
  return sphere_from_embedding(other(p.chart), sphere_embed(p));
}

SpherePoint ensure_chart_band(const SpherePoint& p) {
  return in_chart_band(p) ? p : sphere_transition(p);
}

Eigen::Matrix2d sphere_metric_inv_sqrt(const SpherePoint& p) {
  if (!in_chart_band(p)) {
    throw ChartDomainError("metric requested outside the chart band: r = " + std::to_string(p.r));
  }
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0 / std::sin(p.r);
  return m;
}

GeodesicState sphere_geodesic_rk4_state(const SpherePoint& p, const SphereTangent& v, double s) {
  const GeodesicVec u0{p.r, p.theta, v(0), v(1)};
  const GeodesicVec k1 = geodesic_rhs(u0);
  const GeodesicVec u1 = axpy(u0, 0.5 * s, k1);
  require_regular(u1, "stage 2");
  const GeodesicVec k2 = geodesic_rhs(u1);
  const GeodesicVec u2 = axpy(u0, 0.5 * s, k2);
  require_regular(u2, "stage 3");
  const GeodesicVec k3 = geodesic_rhs(u2);
  const GeodesicVec u3 = axpy(u0, s, k3);
  require_regular(u3, "stage 4");
  const GeodesicVec k4 = geodesic_rhs(u3);

  GeodesicVec out;
  for (int i = 0; i < 4; ++i) {
    out[i] = u0[i] + (s / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  require_regular(out, "result");
  out = fold_into_chart(out);
  return {SpherePoint(p.chart, out[0], out[1]), SphereTangent(out[2], out[3])};
}

SpherePoint sphere_geodesic_rk4(const SpherePoint& p, const SphereTangent& v, double s) {
  return sphere_geodesic_rk4_state(p, v, s).point;
}

SpdFrame spd_frame(const SpdPoint& x) {
  SpdFrame f;
  f.eig = sym_eig(x.sym());
  require_positive(f.eig);
  const Vec<3> lam = f.eig.values;
  const Vec<3> sq = lam.cwiseSqrt();
  const Vec<3> lg = lam.array().log().matrix();
  const Mat<3>& q = f.eig.vectors;
  f.sqrt = SymMatrix<3>(q * sq.asDiagonal() * q.transpose()).matrix();
  f.inv_sqrt = SymMatrix<3>(q * sq.cwiseInverse().asDiagonal() * q.transpose()).matrix();
  f.log = SymMatrix<3>(q * lg.asDiagonal() * q.transpose());
  f.dist_to_identity = lg.norm();
  return f;
}

SpdPoint spd_exp(const SpdPoint& x, const SymMatrix<3>& s) {
  const SpdFrame f = spd_frame(x);
  const SpdMatrix<3> e = mat_exp(congruence(f.inv_sqrt, s));
  return SpdPoint::unchecked(congruence(f.sqrt, e.sym()));
}

SymMatrix<3> spd_log(const SpdPoint& x, const SpdPoint& y) {
  const SpdFrame f = spd_frame(x);
  const SymMatrix<3> inner = mat_log(SpdMatrix<3>::unchecked(congruence(f.inv_sqrt, y.sym())));
  return congruence(f.sqrt, inner);
}

double spd_dist(const SpdPoint& x, const SpdPoint& y) {
  const SpdFrame f = spd_frame(x);
  const auto e = sym_eig(congruence(f.inv_sqrt, y.sym()));
  require_positive(e);
  return e.values.array().log().matrix().norm();
}

double spd_inner(const SpdPoint& x, const SymMatrix<3>& u, const SymMatrix<3>& v) {
  const Mat<3> xi = x.matrix().ldlt().solve(Mat<3>::Identity());
  return (xi * u.matrix() * xi * v.matrix()).trace();
}

SymMatrix<6> spd_metric_inv(const HalfVec& x) {
  const double x1 = x(0), x2 = x(1), x3 = x(2), x4 = x(3), x5 = x(4), x6 = x(5);
  Mat<6> g;
  g << x1 * x1, x4 * x4, x6 * x6, x1 * x4, x4 * x6, x1 * x6,
       x4 * x4, x2 * x2, x5 * x5, x2 * x4, x2 * x5, x4 * x5,
       x6 * x6, x5 * x5, x3 * x3, x5 * x6, x3 * x5, x3 * x6,
       x1 * x4, x2 * x4, x5 * x6, 0.5 * (x1 * x2 + x4 * x4), 0.5 * (x2 * x6 + x4 * x5), 0.5 * (x1 * x5 + x4 * x6),
       x4 * x6, x2 * x5, x3 * x5, 0.5 * (x2 * x6 + x4 * x5), 0.5 * (x2 * x3 + x5 * x5), 0.5 * (x3 * x4 + x5 * x6),
       x1 * x6, x4 * x5, x3 * x6, 0.5 * (x1 * x5 + x4 * x6), 0.5 * (x3 * x4 + x5 * x6), 0.5 * (x1 * x3 + x6 * x6);
  return SymMatrix<6>(g);
}

SpdMatrix<6> spd_metric_inv_sqrt(const HalfVec& x) {
  const auto e = sym_eig(spd_metric_inv(x));
  require_positive(e);
  return SpdMatrix<6>::unchecked(apply_spectral(e, [](double l) { return std::sqrt(l); }));
}

}  // namespace rlmc
