#include "rlmc/sampler.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace rlmc {

Scheme scheme_from_name(const std::string& name) {
  if (name == "exp") return Scheme::ExpEuler;
  if (name == "retraction") return Scheme::RetractionEuler;
  if (name == "splitting") return Scheme::Splitting;
  throw ConfigError("unknown scheme '" + name + "' (expected exp, retraction, splitting)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ExpEuler:
      return "exp";
    case Scheme::RetractionEuler:
      return "retraction";
    case Scheme::Splitting:
      return "splitting";
  }
  return "?";
}

std::int64_t SamplerConfig::steps() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("step size h must be positive");
  if (!(T >= h) || !std::isfinite(T)) throw ConfigError("horizon T must be at least h");
  const double ratio = std::round(T / h);
  const auto n = static_cast<std::int64_t>(ratio);
  if (n < 1 || std::abs(static_cast<double>(n) * h - T) >= 1e-9 * T) {
    std::ostringstream os;
    os.precision(17);
    os << "T = " << T << " is not an integer multiple of h = " << h;
    throw ConfigError(os.str());
  }
  return n;
}

void SamplerConfig::validate() const {
  rlmc::validate(potential);
  steps();
  const bool sphere = manifold() == ManifoldKind::Sphere2;
  if (sphere != std::holds_alternative<SpherePoint>(initial)) {
    throw ConfigError("initial point does not live on the target's manifold");
  }
  if (sphere && scheme == Scheme::ExpEuler) {
    throw ConfigError("the sphere chain uses the RK4 retraction (scheme 'retraction' or 'splitting')");
  }
  if (!sphere && scheme == Scheme::RetractionEuler) {
    throw ConfigError("the SPD chain uses the closed-form exponential map (scheme 'exp' or 'splitting')");
  }
  if (rejection_radius) {
    if (sphere) throw ConfigError("geodesic-ball rejection applies to the SPD manifold only");
    if (!(*rejection_radius > 0.0)) throw ConfigError("rejection radius must be positive");
  }
}

SymMatrix<3> spd_noise_matrix(const SpdPoint& x, const SpdFrame& frame, double h,
                              const HalfVec& xi) {
  const SpdMatrix<6> g_inv_sqrt = spd_metric_inv_sqrt(hvec(x.sym()));
  const SymMatrix<3> v = hvec_inv(g_inv_sqrt.matrix() * xi);
  return congruence(frame.inv_sqrt, v) * std::sqrt(h);
}

SpdPoint step_exp_spd(const SpdPoint& x, const SamplerConfig& cfg, const HalfVec& xi) {
  const SpdFrame frame = spd_frame(x);
  const SymMatrix<3> m =
      spd_drift_matrix(frame, cfg.potential, cfg.h) + spd_noise_matrix(x, frame, cfg.h, xi);
  return SpdPoint::unchecked(congruence(frame.sqrt, mat_exp(m).sym()));
}

SpdPoint step_splitting_spd(const SpdPoint& x, const SamplerConfig& cfg, const HalfVec& xi) {
  const SpdFrame frame = spd_frame(x);
  const SpdPoint mid = SpdPoint::unchecked(
      congruence(frame.sqrt, mat_exp(spd_drift_matrix(frame, cfg.potential, cfg.h)).sym()));
  const SpdFrame mid_frame = spd_frame(mid);
  return SpdPoint::unchecked(
      congruence(mid_frame.sqrt, mat_exp(spd_noise_matrix(mid, mid_frame, cfg.h, xi)).sym()));
}

namespace {

double vmf_lambda(const SamplerConfig& cfg) {
  const auto* vmf = std::get_if<VonMisesFisher>(&cfg.potential);
  if (vmf == nullptr) throw ConfigError("sphere chain needs a von Mises-Fisher target");
  return vmf->lambda;
}

}  // namespace

SpherePoint step_retraction_sphere(const SpherePoint& p, const SamplerConfig& cfg,
                                   const SphereTangent& xi) {
  const SpherePoint q = ensure_chart_band(p);
  const SphereTangent v =
      vmf_drift_tangent(q, vmf_lambda(cfg), cfg.h) + sphere_metric_inv_sqrt(q) * xi;
  return sphere_geodesic_rk4(q, v, std::sqrt(cfg.h));
}

SpherePoint step_splitting_sphere(const SpherePoint& p, const SamplerConfig& cfg,
                                  const SphereTangent& xi) {
  const double s = std::sqrt(cfg.h);
  const SpherePoint q = ensure_chart_band(p);
  const SpherePoint mid =
      ensure_chart_band(sphere_geodesic_rk4(q, vmf_drift_tangent(q, vmf_lambda(cfg), cfg.h), s));
  return sphere_geodesic_rk4(mid, sphere_metric_inv_sqrt(mid) * xi, s);
}

ManifoldPoint step(const ManifoldPoint& x, const SamplerConfig& cfg, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != cfg.dim()) {
    throw std::invalid_argument("step: noise length does not match the manifold dimension");
  }
  const bool split = cfg.scheme == Scheme::Splitting;
  if (const auto* p = std::get_if<SpherePoint>(&x)) {
    const SphereTangent e(xi[0], xi[1]);
    return split ? step_splitting_sphere(*p, cfg, e) : step_retraction_sphere(*p, cfg, e);
  }
  const HalfVec e = Eigen::Map<const HalfVec>(xi.data());
  const auto& m = std::get<SpdPoint>(x);
  return split ? step_splitting_spd(m, cfg, e) : step_exp_spd(m, cfg, e);
}

namespace {

double observe(const Observable& obs, const ManifoldPoint& x) {
  return std::visit([&obs](const auto& p) { return obs(p); }, x);
}

double distance_to_identity(const SpdPoint& x) {
  const auto e = sym_eig(x.sym());
  require_positive(e);
  return e.values.array().log().matrix().norm();
}

}  // namespace

TrajectoryOutcome run_trajectory(const SamplerConfig& cfg, std::uint64_t stream_id,
                                 const Observable* trace_observable) {
  cfg.validate();
  const std::int64_t n_steps = cfg.steps();
  const NoiseSpec spec = cfg.noise_spec();
  RngStream rng(cfg.seed, stream_id);

  Completed done{cfg.initial, {}};
  if (trace_observable != nullptr) done.trace.reserve(static_cast<std::size_t>(n_steps));

  ManifoldPoint& state = done.final_point;
  std::array<double, 6> xi_buf{};
  const std::span<double> xi(xi_buf.data(), static_cast<std::size_t>(spec.dim));

  for (std::int64_t n = 0; n < n_steps; ++n) {
    try {
      if (trace_observable != nullptr) done.trace.push_back(observe(*trace_observable, state));
      draw(spec, rng, xi);
      state = step(state, cfg, xi);
      if (cfg.rejection_radius) {
        if (distance_to_identity(std::get<SpdPoint>(state)) > *cfg.rejection_radius) {
          return {Rejected{n + 1}};
        }
      }
    } catch (const TrajectoryError&) {
      throw;
    } catch (const std::exception& e) {
      throw TrajectoryError(e.what(), n + 1, stream_id);
    }
  }

  // Report sphere states in chart 1, as the chain was started.
  if (auto* p = std::get_if<SpherePoint>(&state); p != nullptr && p->chart == Chart::Two) {
    *p = sphere_transition(*p);
  }
  return {std::move(done)};
}

}  // namespace rlmc
