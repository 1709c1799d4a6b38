#include "rlmc/estimate.hpp"

#include <cmath>
#include <vector>

#include "rlmc/errors.hpp"
#include "rlmc/summation.hpp"

namespace rlmc {

SampleTally tally(std::span<const double> values, std::uint64_t rejected) {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
  return {pairwise_sum(values), pairwise_sum(sq), values.size(), rejected};
}

SampleTally combine(std::span<const SampleTally> shards) {
  std::vector<double> sums(shards.size());
  std::vector<double> sqs(shards.size());
  SampleTally out;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    sums[i] = shards[i].sum;
    sqs[i] = shards[i].sum_sq;
    out.count += shards[i].count;
    out.rejected += shards[i].rejected;
  }
  out.sum = pairwise_sum(sums);
  out.sum_sq = pairwise_sum(sqs);
  return out;
}

EstimateResult ensemble_estimate(const SampleTally& t, std::optional<double> reference) {
  if (t.count < 2) {
    throw InsufficientSamples("ensemble estimate needs at least two completed trajectories, got " +
                              std::to_string(t.count));
  }
  const double n = static_cast<double>(t.count);
  EstimateResult r;
  r.estimate = t.sum / n;
  r.mcerr = std::max(0.0, (t.sum_sq - t.sum * t.sum / n) / (n - 1.0));
  r.ci_halfwidth = 1.96 * std::sqrt(r.mcerr / n);
  r.n_samples = t.count;
  r.n_rejected = t.rejected;
  if (reference) r.err = std::abs(r.estimate - *reference);
  return r;
}

EstimateResult ensemble_estimate(std::span<const double> values, std::optional<double> reference) {
  return ensemble_estimate(tally(values), reference);
}

double time_average(std::span<const double> trace, std::size_t burn_in) {
  if (burn_in >= trace.size()) {
    throw InsufficientSamples("time average: nothing left after discarding " +
                              std::to_string(burn_in) + " of " + std::to_string(trace.size()) +
                              " states");
  }
  const auto kept = trace.subspan(burn_in);
  return pairwise_sum(kept) / static_cast<double>(kept.size());
}

double talay_tubaro(double h1, double a1, double h2, double a2) {
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw DegenerateSteps("extrapolation needs positive step sizes");
  if (h1 == h2) throw DegenerateSteps("extrapolation needs two distinct step sizes");
  const double d = h2 - h1;
  return a1 * (h2 / d) - a2 * (h1 / d);
}

SlopeFit convergence_slope(std::span<const StepError> rows) {
  if (rows.size() < 2) throw InsufficientSamples("slope fit needs at least two rows");
  std::vector<double> x(rows.size());
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].h > 0.0) || !(rows[i].err > 0.0)) {
      throw std::invalid_argument("slope fit needs positive h and err in every row");
    }
    x[i] = std::log(rows[i].h);
    y[i] = std::log(rows[i].err);
  }
  const double n = static_cast<double>(rows.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateSteps("slope fit needs at least two distinct step sizes");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.rows_used = rows.size();
  return fit;
}

std::optional<SlopeFit> fit_resolved_rows(std::span<const ConvergenceRow> rows) {
  std::vector<StepError> kept;
  for (const auto& row : rows) {
    if (row.failure || !row.result.err) continue;
    if (*row.result.err > 2.0 * row.result.ci_halfwidth && *row.result.err > 0.0) {
      kept.push_back({row.h, *row.result.err});
    }
  }
  if (kept.size() < 2) return std::nullopt;
  return convergence_slope(kept);
}

}  // namespace rlmc
