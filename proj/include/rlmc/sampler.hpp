#pragma once

// Riemannian Langevin chains.
//
// Every scheme moves the state along (an approximation of) a geodesic, so
// the chain never leaves the manifold:
//   ExpEuler         X' = exp_X(-(h/2) grad phi + sqrt(h) g^{-1/2} xi)      (SPD)
//   RetractionEuler  one RK4 step of length sqrt(h) of the geodesic ODE with
//                    initial velocity -(sqrt(h)/2) grad phi + g^{-1/2} xi   (sphere)
//   Splitting        a drift-only move followed by a noise-only move from the
//                    intermediate point.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rlmc/noise.hpp"
#include "rlmc/potential.hpp"

namespace rlmc {

enum class Scheme { ExpEuler, RetractionEuler, Splitting };

Scheme scheme_from_name(const std::string& name);
std::string to_string(Scheme s);

using ManifoldPoint = std::variant<SpherePoint, SpdPoint>;

struct SamplerConfig {
  PotentialSpec potential = VonMisesFisher{};
  double h = 0.1;
  double T = 1.0;
  NoiseKind noise = NoiseKind::Rademacher;
  Scheme scheme = Scheme::RetractionEuler;
  // SPD only: a trajectory is rejected once rho(X_n, I) exceeds this.
  std::optional<double> rejection_radius;
  ManifoldPoint initial = SpherePoint{};
  std::uint64_t seed = 0;

  ManifoldKind manifold() const { return manifold_of(potential); }
  int dim() const { return manifold() == ManifoldKind::Sphere2 ? 2 : 6; }
  NoiseSpec noise_spec() const { return {noise, dim()}; }

  // N = round(T / h); requires |N h - T| < 1e-9 T and N >= 1.
  std::int64_t steps() const;
  // Throws ConfigError on any inconsistency.
  void validate() const;
};

// sqrt(h) X^{-1/2} hvec^{-1}(G^{-1/2}(X) xi) X^{-1/2}
SymMatrix<3> spd_noise_matrix(const SpdPoint& x, const SpdFrame& frame, double h,
                              const HalfVec& xi);

SpdPoint step_exp_spd(const SpdPoint& x, const SamplerConfig& cfg, const HalfVec& xi);
SpherePoint step_retraction_sphere(const SpherePoint& p, const SamplerConfig& cfg,
                                   const SphereTangent& xi);
SpdPoint step_splitting_spd(const SpdPoint& x, const SamplerConfig& cfg, const HalfVec& xi);
SpherePoint step_splitting_sphere(const SpherePoint& p, const SamplerConfig& cfg,
                                  const SphereTangent& xi);

// Dispatches on cfg.scheme and the state's manifold. xi.size() == cfg.dim().
ManifoldPoint step(const ManifoldPoint& x, const SamplerConfig& cfg, std::span<const double> xi);

struct Completed {
  ManifoldPoint final_point;
  // phi(X_n) for n = 0 .. N-1, filled only when a trace observable is given.
  std::vector<double> trace;
};

struct Rejected {
  std::int64_t step;
};

struct TrajectoryOutcome {
  std::variant<Completed, Rejected> status;

  bool completed() const { return std::holds_alternative<Completed>(status); }
};

// Runs N steps from cfg.initial with the random stream (cfg.seed, stream_id).
// Step failures are rethrown as TrajectoryError carrying the step index.
TrajectoryOutcome run_trajectory(const SamplerConfig& cfg, std::uint64_t stream_id,
                                 const Observable* trace_observable = nullptr);

}  // namespace rlmc
