#pragma once

// Geometry of the two state spaces.
//
// Sphere: two spherical-coordinate charts. Chart 1 embeds (r, theta) as
// (sin r cos theta, sin r sin theta, cos r); chart 2 permutes the axes to
// (cos r, sin r cos theta, sin r sin theta). Both carry the round metric
// dr^2 + sin^2 r dtheta^2. A point is only stepped from while r lies in
// [eps, pi - eps]; the poles of one chart sit on the equator of the other.
//
// SPD: 3x3 symmetric positive-definite matrices with the affine-invariant
// metric g_X(U, V) = tr(X^-1 U X^-1 V). Tangent vectors are symmetric
// matrices, written in the six hvec coordinates where needed.

#include <numbers>

#include "rlmc/symmat.hpp"

namespace rlmc {

inline constexpr double kChartEpsilon = 0.5;

enum class Chart : int { One = 1, Two = 2 };

Chart other(Chart c);

struct SpherePoint {
  Chart chart = Chart::One;
  double r = std::numbers::pi / 2;
  double theta = 0.0;

  SpherePoint() = default;
  // Normalizes theta into [0, 2 pi). Throws ChartDomainError unless r is in (0, pi).
  SpherePoint(Chart chart, double r, double theta);
};

using SphereTangent = Eigen::Vector2d;

using SpdPoint = SpdMatrix<3>;

double normalize_angle(double theta);

bool in_chart_band(const SpherePoint& p);

Eigen::Vector3d sphere_embed(const SpherePoint& p);

// Coordinates of a unit vector in the given chart.
SpherePoint sphere_from_embedding(Chart chart, const Eigen::Vector3d& x);

// Same point, expressed in the other chart.
SpherePoint sphere_transition(const SpherePoint& p);

// Switches charts when r has left the band; otherwise returns p.
SpherePoint ensure_chart_band(const SpherePoint& p);

// diag(1, 1/sin r), the SPD square root of the inverse metric.
Eigen::Matrix2d sphere_metric_inv_sqrt(const SpherePoint& p);

struct GeodesicState {
  SpherePoint point;
  SphereTangent velocity;
};

// One classical RK4 step of length s for the geodesic equations
//   r' = y, theta' = z, y' = sin r cos r z^2, z' = -2 cot r y z.
// Stages may pass over a pole; the result is folded back into r in (0, pi).
// Throws StepOutOfChart if a stage lands on sin r = 0 or overflows.
GeodesicState sphere_geodesic_rk4_state(const SpherePoint& p, const SphereTangent& v, double s);
SpherePoint sphere_geodesic_rk4(const SpherePoint& p, const SphereTangent& v, double s);

// X^{1/2} Exp(X^{-1/2} S X^{-1/2}) X^{1/2}
SpdPoint spd_exp(const SpdPoint& x, const SymMatrix<3>& s);
// X^{1/2} Log(X^{-1/2} Y X^{-1/2}) X^{1/2}
SymMatrix<3> spd_log(const SpdPoint& x, const SpdPoint& y);
// sqrt(sum log^2 r_i) over the eigenvalues r_i of X^-1 Y.
double spd_dist(const SpdPoint& x, const SpdPoint& y);
// tr(X^-1 U X^-1 V)
double spd_inner(const SpdPoint& x, const SymMatrix<3>& u, const SymMatrix<3>& v);

// Inverse metric in hvec coordinates, closed form in the entries of X.
SymMatrix<6> spd_metric_inv(const HalfVec& x);
SpdMatrix<6> spd_metric_inv_sqrt(const HalfVec& x);

// Everything a chain step needs from one eigendecomposition of X.
struct SpdFrame {
  SymEigen<3> eig;
  Mat<3> sqrt;
  Mat<3> inv_sqrt;
  SymMatrix<3> log;
  double dist_to_identity = 0.0;
};

SpdFrame spd_frame(const SpdPoint& x);

}  // namespace rlmc
