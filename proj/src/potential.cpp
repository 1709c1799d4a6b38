#include "rlmc/potential.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "rlmc/quadrature.hpp"
#include "rlmc/summation.hpp"

namespace rlmc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// phi as a function of rho(X, I), for the isotropic SPD potentials.
double spd_phi_of_rho(const PotentialSpec& spec, double rho) {
  return std::visit(
      Overloaded{
          [](const VonMisesFisher&) -> double {
            throw UnsupportedError("von Mises-Fisher lives on the sphere");
          },
          [rho](const RiemannianGaussian& g) { return rho * rho / (2.0 * g.sigma * g.sigma); },
          [rho](const DoubleWell&) {
            const double r2 = rho * rho;
            return r2 * r2 - r2;
          },
      },
      spec);
}

double sphere_reference(const VonMisesFisher& vmf, const Observable& obs,
                        const QuadratureOptions& opts) {
  const QuadratureRule rule = gauss_legendre(opts.sphere_nodes, 0.0, std::numbers::pi);
  const int nr = opts.sphere_nodes;
  std::vector<double> num(nr);
  std::vector<double> den(nr);
  const bool rotationally_symmetric = obs.kind() == Observable::Kind::SinR;
  const int nt = opts.sphere_theta_nodes;

  for (int i = 0; i < nr; ++i) {
    const double r = rule.nodes[i];
    const double w = rule.weights[i] * std::exp(vmf.lambda * std::cos(r)) * std::sin(r);
    double f = 0.0;
    if (rotationally_symmetric) {
      f = std::sin(r);
    } else {
      // Periodic trapezoid rule in theta.
      std::vector<double> vals(nt);
      for (int k = 0; k < nt; ++k) {
        vals[k] = obs(SpherePoint(Chart::One, r, 2.0 * std::numbers::pi * k / nt));
      }
      f = pairwise_sum(vals) / nt;
    }
    num[i] = w * f;
    den[i] = w;
  }
  return pairwise_sum(num) / pairwise_sum(den);
}

// Half-width of a box in eigenvalue coordinates outside which the target
// weight is below exp(-60) relative to its scale, allowing for the growth of
// the sinh factors and of exp(sum l) in det.
double spd_truncation_radius(const PotentialSpec& spec) {
  double rho = 1.0;
  while (spd_phi_of_rho(spec, rho) - 4.0 * rho < 60.0) rho += 0.25;
  return rho;
}

double spd_reference(const PotentialSpec& spec, const Observable& obs,
                     const QuadratureOptions& opts) {
  if (obs.kind() != Observable::Kind::Det && obs.kind() != Observable::Kind::InvOnePlusTrace) {
    throw UnsupportedError("no eigenvalue-coordinate reduction for observable '" + obs.name() +
                           "' on SPD matrices");
  }
  const double rho_max = spd_truncation_radius(spec);
  const int n = opts.spd_nodes;
  const QuadratureRule top = gauss_legendre(n, -rho_max, rho_max);
  const QuadratureRule gap = gauss_legendre(n, 0.0, 2.0 * rho_max);

  // l1 = a, l2 = a - u, l3 = a - u - v with u, v >= 0: the ordered chamber,
  // where the sinh product is smooth. The 3! chambers contribute equally and
  // the factor cancels in the ratio, as does the volume constant.
  std::vector<double> num_slab(n);
  std::vector<double> den_slab(n);
  std::vector<double> num_terms(static_cast<std::size_t>(n) * n);
  std::vector<double> den_terms(static_cast<std::size_t>(n) * n);
  for (int ia = 0; ia < n; ++ia) {
    const double a = top.nodes[ia];
    for (int iu = 0; iu < n; ++iu) {
      const double u = gap.nodes[iu];
      for (int iv = 0; iv < n; ++iv) {
        const double v = gap.nodes[iv];
        const double l1 = a;
        const double l2 = a - u;
        const double l3 = a - u - v;
        const double rho = std::sqrt(l1 * l1 + l2 * l2 + l3 * l3);
        const double w = gap.weights[iu] * gap.weights[iv] *
                         std::exp(-spd_phi_of_rho(spec, rho)) * std::sinh(0.5 * u) *
                         std::sinh(0.5 * (u + v)) * std::sinh(0.5 * v);
        double f = 0.0;
        if (obs.kind() == Observable::Kind::Det) {
          f = std::exp(l1 + l2 + l3);
        } else {
          f = 1.0 / (1.0 + std::exp(l1) + std::exp(l2) + std::exp(l3));
        }
        const std::size_t k = static_cast<std::size_t>(iu) * n + iv;
        num_terms[k] = w * f;
        den_terms[k] = w;
      }
    }
    num_slab[ia] = top.weights[ia] * pairwise_sum(num_terms);
    den_slab[ia] = top.weights[ia] * pairwise_sum(den_terms);
  }
  return pairwise_sum(num_slab) / pairwise_sum(den_slab);
}

}  // namespace

ManifoldKind manifold_of(const PotentialSpec& spec) {
  return std::holds_alternative<VonMisesFisher>(spec) ? ManifoldKind::Sphere2 : ManifoldKind::Spd3;
}

void validate(const PotentialSpec& spec) {
  std::visit(Overloaded{
                 [](const VonMisesFisher& v) {
                   if (!(v.lambda > 0.0) || !std::isfinite(v.lambda)) {
                     throw ConfigError("von Mises-Fisher concentration must be positive");
                   }
                 },
                 [](const RiemannianGaussian& g) {
                   if (!(g.sigma > 0.0) || !std::isfinite(g.sigma)) {
                     throw ConfigError("Riemannian-Gaussian sigma must be positive");
                   }
                 },
                 [](const DoubleWell&) {},
             },
             spec);
}

std::string describe(const PotentialSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&os](const VonMisesFisher& v) { os << "vmf(lambda=" << v.lambda << ")"; },
                 [&os](const RiemannianGaussian& g) { os << "rgauss(sigma=" << g.sigma << ")"; },
                 [&os](const DoubleWell&) { os << "dwell"; },
             },
             spec);
  return os.str();
}

double potential_value(const VonMisesFisher& vmf, const SpherePoint& p) {
  return -vmf.lambda * sphere_embed(p)(2);
}

double potential_value(const PotentialSpec& spec, const SpdPoint& x) {
  return spd_phi_of_rho(spec, spd_frame(x).dist_to_identity);
}

SphereTangent vmf_drift_tangent(const SpherePoint& p, double lambda, double h) {
  if (!in_chart_band(p)) {
    throw ChartDomainError("drift requested outside the chart band: r = " + std::to_string(p.r));
  }
  const double c = 0.5 * lambda * std::sqrt(h);
  if (p.chart == Chart::One) return {-c * std::sin(p.r), 0.0};
  return {c * std::cos(p.r) * std::sin(p.theta), c * std::cos(p.theta) / std::sin(p.r)};
}

SymMatrix<3> spd_drift_matrix(const SpdFrame& frame, const PotentialSpec& spec, double h) {
  return std::visit(
      Overloaded{
          [](const VonMisesFisher&) -> SymMatrix<3> {
            throw UnsupportedError("von Mises-Fisher lives on the sphere");
          },
          [&](const RiemannianGaussian& g) {
            return frame.log * (-h / (2.0 * g.sigma * g.sigma));
          },
          [&](const DoubleWell&) {
            const double rho = frame.dist_to_identity;
            return frame.log * (h * (1.0 - 2.0 * rho * rho));
          },
      },
      spec);
}

SymMatrix<3> spd_drift_matrix(const SpdPoint& x, const PotentialSpec& spec, double h) {
  return spd_drift_matrix(spd_frame(x), spec, h);
}

Observable Observable::sin_r() { return Observable(Kind::SinR, "sin_r"); }
Observable Observable::det() { return Observable(Kind::Det, "det"); }
Observable Observable::inv_one_plus_trace() { return Observable(Kind::InvOnePlusTrace, "inv1ptr"); }

Observable Observable::custom(std::string name, SphereFn fn) {
  Observable o(Kind::Custom, std::move(name));
  o.sphere_fn_ = std::move(fn);
  return o;
}

Observable Observable::custom(std::string name, SpdFn fn) {
  Observable o(Kind::Custom, std::move(name));
  o.spd_fn_ = std::move(fn);
  return o;
}

bool Observable::supports(ManifoldKind m) const {
  switch (kind_) {
    case Kind::SinR:
      return m == ManifoldKind::Sphere2;
    case Kind::Det:
    case Kind::InvOnePlusTrace:
      return m == ManifoldKind::Spd3;
    case Kind::Custom:
      return m == ManifoldKind::Sphere2 ? static_cast<bool>(sphere_fn_)
                                        : static_cast<bool>(spd_fn_);
  }
  return false;
}

double Observable::operator()(const SpherePoint& p) const {
  if (kind_ == Kind::SinR) {
    const Eigen::Vector3d x = sphere_embed(p);
    return std::hypot(x(0), x(1));
  }
  if (kind_ == Kind::Custom && sphere_fn_) return sphere_fn_(p);
  throw UnsupportedError("observable '" + name_ + "' is not defined on the sphere");
}

double Observable::operator()(const SpdPoint& x) const {
  switch (kind_) {
    case Kind::Det:
      return x.matrix().determinant();
    case Kind::InvOnePlusTrace:
      return 1.0 / (1.0 + x.matrix().trace());
    case Kind::Custom:
      if (spd_fn_) return spd_fn_(x);
      break;
    case Kind::SinR:
      break;
  }
  throw UnsupportedError("observable '" + name_ + "' is not defined on SPD matrices");
}

Observable observable_from_name(const std::string& name) {
  if (name == "sin_r") return Observable::sin_r();
  if (name == "det") return Observable::det();
  if (name == "inv1ptr") return Observable::inv_one_plus_trace();
  throw UnsupportedError("unknown observable '" + name + "' (expected sin_r, det, inv1ptr)");
}

double reference_value(const PotentialSpec& spec, const Observable& obs,
                       const QuadratureOptions& opts) {
  validate(spec);
  if (!obs.supports(manifold_of(spec))) {
    throw UnsupportedError("observable '" + obs.name() + "' does not match target " +
                           describe(spec));
  }
  if (const auto* vmf = std::get_if<VonMisesFisher>(&spec)) {
    return sphere_reference(*vmf, obs, opts);
  }
  return spd_reference(spec, obs, opts);
}

}  // namespace rlmc
