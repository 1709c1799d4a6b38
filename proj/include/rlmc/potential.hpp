#pragma once

// Target densities exp(-phi) dvol_g, their drift terms, and the quadrature
// oracle for exact expectations under the target.

#include <functional>
#include <string>
#include <variant>

#include "rlmc/manifold.hpp"

namespace rlmc {

// phi = -lambda cos r (north pole of chart 1 as the mode).
struct VonMisesFisher {
  double lambda = 1.0;
};

// phi = rho(X, I)^2 / (2 sigma^2)
struct RiemannianGaussian {
  double sigma = 1.0;
};

// phi = rho(X, I)^4 - rho(X, I)^2
struct DoubleWell {};

using PotentialSpec = std::variant<VonMisesFisher, RiemannianGaussian, DoubleWell>;

enum class ManifoldKind { Sphere2, Spd3 };

ManifoldKind manifold_of(const PotentialSpec& spec);
void validate(const PotentialSpec& spec);
std::string describe(const PotentialSpec& spec);

double potential_value(const VonMisesFisher& vmf, const SpherePoint& p);
double potential_value(const PotentialSpec& spec, const SpdPoint& x);

// -(sqrt(h)/2) grad phi in chart coordinates; the initial velocity of the
// retraction curve before noise is added. Throws ChartDomainError off-band.
SphereTangent vmf_drift_tangent(const SpherePoint& p, double lambda, double h);

// -(h/2) X^{-1/2} grad phi X^{-1/2}: the drift part of the matrix that gets
// exponentiated in the SPD chain. For both potentials it is a multiple of Log X.
SymMatrix<3> spd_drift_matrix(const SpdPoint& x, const PotentialSpec& spec, double h);
SymMatrix<3> spd_drift_matrix(const SpdFrame& frame, const PotentialSpec& spec, double h);

// Test function evaluated on chain states.
class Observable {
 public:
  enum class Kind { SinR, Det, InvOnePlusTrace, Custom };
  using SphereFn = std::function<double(const SpherePoint&)>;
  using SpdFn = std::function<double(const SpdPoint&)>;

  // sin r measured from the chart-1 north pole, whatever chart p is in.
  static Observable sin_r();
  static Observable det();
  static Observable inv_one_plus_trace();
  static Observable custom(std::string name, SphereFn fn);
  static Observable custom(std::string name, SpdFn fn);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool supports(ManifoldKind m) const;

  double operator()(const SpherePoint& p) const;
  double operator()(const SpdPoint& x) const;

 private:
  Observable(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  SphereFn sphere_fn_;
  SpdFn spd_fn_;
};

// Parses "sin_r", "det", "inv1ptr".
Observable observable_from_name(const std::string& name);

// Quadrature resolution for reference_value.
struct QuadratureOptions {
  int sphere_nodes = 256;
  int sphere_theta_nodes = 64;  // only for custom (theta-dependent) observables
  int spd_nodes = 96;
};

// mu_phi(obs) to ~1e-8. Sphere: Gauss-Legendre in r. SPD: eigenvalue
// coordinates with density exp(-phi) prod_{i<j} sinh(|l_i - l_j| / 2),
// integrated over the ordered chamber l1 >= l2 >= l3.
// Throws UnsupportedError for observables the oracle cannot reduce.
double reference_value(const PotentialSpec& spec, const Observable& obs,
                       const QuadratureOptions& opts = {});

}  // namespace rlmc
