#pragma once

// Estimators built on chain output: ensemble and time averages, Monte Carlo
// error, Talay-Tubaro extrapolation and log-log slope fits.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rlmc {

// Partial sums over one batch of trajectories.
struct SampleTally {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
  std::uint64_t rejected = 0;
};

SampleTally tally(std::span<const double> values, std::uint64_t rejected = 0);
// Combines shard tallies in the given (index) order, pairwise.
SampleTally combine(std::span<const SampleTally> shards);

struct EstimateResult {
  double estimate = 0.0;
  // Sample variance of the observable values (not of their mean).
  double mcerr = 0.0;
  // 1.96 sqrt(mcerr / n_samples)
  double ci_halfwidth = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_rejected = 0;
  std::optional<double> err;

  double ci_low() const { return estimate - ci_halfwidth; }
  double ci_high() const { return estimate + ci_halfwidth; }
};

// mean, and MCerr = (sum phi^2 - (sum phi)^2 / L) / (L - 1).
// Throws InsufficientSamples when fewer than two values are available.
EstimateResult ensemble_estimate(std::span<const double> values,
                                 std::optional<double> reference = std::nullopt);
EstimateResult ensemble_estimate(const SampleTally& t,
                                 std::optional<double> reference = std::nullopt);

// (1/M) sum_{n=burn_in}^{N-1} trace[n]
double time_average(std::span<const double> trace, std::size_t burn_in = 0);

// A1 h2/(h2 - h1) - A2 h1/(h2 - h1): cancels the O(h) bias term.
double talay_tubaro(double h1, double a1, double h2, double a2);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t rows_used = 0;
};

struct StepError {
  double h;
  double err;
};

// Unweighted least squares of log(err) on log(h).
SlopeFit convergence_slope(std::span<const StepError> rows);

struct ConvergenceRow {
  double h = 0.0;
  std::uint64_t L = 0;
  EstimateResult result;
  double wall_time_s = 0.0;
  // Set when the row could not be computed.
  std::optional<std::string> failure;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::optional<SlopeFit> fit;
};

// Fits the rows whose err is resolved above Monte Carlo noise
// (err > 2 ci_halfwidth). Returns nullopt when fewer than two rows qualify.
std::optional<SlopeFit> fit_resolved_rows(std::span<const ConvergenceRow> rows);

}  // namespace rlmc
