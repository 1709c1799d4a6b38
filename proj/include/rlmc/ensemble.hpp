#pragma once

#include <cstdint>

#include "rlmc/estimate.hpp"
#include "rlmc/sampler.hpp"

namespace rlmc {

struct EnsembleOptions {
  std::uint64_t trajectories = 0;
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  // Trajectories per shard. Results depend on the shard size but not on the
  // worker count.
  std::uint64_t shard_size = 1000;
};

// Runs trajectories with stream ids 0 .. trajectories-1 and tallies obs at
// their final states. Rejected trajectories are counted, not averaged. The
// first failing shard (by index) has its error rethrown.
SampleTally run_ensemble(const SamplerConfig& cfg, const Observable& obs,
                         const EnsembleOptions& opts);

}  // namespace rlmc
