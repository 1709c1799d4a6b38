#pragma once

// Experiment descriptions and drivers behind the command-line tool.
//
// Configuration is a flat key=value text file ('#' starts a comment).
// Recognised keys:
//   name, target (vmf | rgauss | dwell), lambda, sigma,
//   obs (sin_r | det | inv1ptr), scheme (exp | retraction | splitting),
//   noise (rademacher | gaussian | sphere), h (comma list), T, L, seed,
//   R (rejection radius or 'none'), burn_in, output, x0 (comma list),
//   workers, synthetic ("a,b": replace the sampler by A(h) = a + b h).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlmc/estimate.hpp"
#include "rlmc/sampler.hpp"

namespace rlmc {

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_value_file(const std::string& path);
// Entries of top replace those of base.
void overlay(KeyValues& base, const KeyValues& top);

// Directory holding the shipped presets (table-1.cfg, ...). RLMC_CONFIG_DIR
// in the environment takes precedence over the build-time location.
std::string preset_directory();
std::string preset_path(const std::string& preset);

// Sources of configuration, lowest precedence first: preset, file, the seed
// from the environment, --set key=value overrides, dedicated flags.
struct ConfigLayers {
  std::string preset;
  std::string file;
  std::optional<std::string> env_seed;
  std::vector<std::string> sets;
  KeyValues flags;
};

KeyValues resolve_layers(const ConfigLayers& layers);

struct ExperimentConfig {
  std::string name = "experiment";
  PotentialSpec potential = VonMisesFisher{};
  std::string observable = "sin_r";
  Scheme scheme = Scheme::RetractionEuler;
  NoiseKind noise = NoiseKind::Rademacher;
  std::vector<double> h_list;
  double T = 5.0;
  std::uint64_t L = 1000;
  std::uint64_t seed = 1;
  std::optional<double> rejection_radius;
  std::uint64_t burn_in = 0;
  std::string output;
  ManifoldPoint x0 = SpherePoint{};
  unsigned workers = 0;
  std::optional<std::pair<double, double>> synthetic;

  ManifoldKind manifold() const { return manifold_of(potential); }
};

// Unknown keys and malformed values raise ConfigError.
ExperimentConfig experiment_from_key_values(const KeyValues& kv);

// Checks h_list non-empty, L >= 2, and the (target, observable, scheme) combination.
void validate(const ExperimentConfig& cfg);

SamplerConfig sampler_config(const ExperimentConfig& cfg, double h);
Observable observable(const ExperimentConfig& cfg);
double reference(const ExperimentConfig& cfg);

EstimateResult run_ensemble_at(const ExperimentConfig& cfg, double h,
                               std::optional<double> ref);

// One row per h. A row whose ensemble fails carries the error in `failure`.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

inline constexpr const char* kConvergenceCsvHeader =
    "h,L,estimate,err,mcerr,ci_low,ci_high,n_rejected,wall_time_s";

// Numbers are written with 17 significant digits. Failed rows carry nan
// fields followed by a "# failed,<h>,<message>" line; the fit, when present,
// follows as "# fit,slope,<s>,intercept,<b>,rows,<n>".
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
ConvergenceReport read_convergence_csv(std::istream& in);

struct ExtrapolationResult {
  double h1 = 0.0;
  double a1 = 0.0;
  double h2 = 0.0;
  double a2 = 0.0;
  double improved = 0.0;
  std::optional<double> reference;
  std::optional<EstimateResult> first;
  std::optional<EstimateResult> second;

  std::optional<double> err1() const;
  std::optional<double> err2() const;
  std::optional<double> err_improved() const;
};

// Needs exactly two step sizes.
ExtrapolationResult run_extrapolation(const ExperimentConfig& cfg);

struct TimeAverageResult {
  double h = 0.0;
  std::int64_t steps = 0;
  std::uint64_t burn_in = 0;
  double estimate = 0.0;
  std::optional<double> reference;
  std::optional<double> err;
};

// Single long trajectory (stream 0) at the one step size in h_list.
TimeAverageResult run_time_average(const ExperimentConfig& cfg);

}  // namespace rlmc
