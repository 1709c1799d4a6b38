#include "rlmc/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace rlmc {

SampleTally run_ensemble(const SamplerConfig& cfg, const Observable& obs,
                         const EnsembleOptions& opts) {
  cfg.validate();
  if (!obs.supports(cfg.manifold())) {
    throw UnsupportedError("observable '" + obs.name() + "' does not match the target manifold");
  }
  const std::uint64_t shard_size = std::max<std::uint64_t>(1, opts.shard_size);
  const std::uint64_t n_shards = (opts.trajectories + shard_size - 1) / shard_size;

  std::vector<SampleTally> shards(n_shards);
  std::vector<std::exception_ptr> errors(n_shards);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    std::vector<double> values;
    values.reserve(shard_size);
    for (;;) {
      const std::uint64_t s = next.fetch_add(1);
      if (s >= n_shards || failed.load()) return;
      const std::uint64_t begin = s * shard_size;
      const std::uint64_t end = std::min(opts.trajectories, begin + shard_size);
      values.clear();
      std::uint64_t rejected = 0;
      try {
        for (std::uint64_t id = begin; id < end; ++id) {
          const TrajectoryOutcome out = run_trajectory(cfg, id);
          if (const auto* c = std::get_if<Completed>(&out.status)) {
            values.push_back(std::visit([&obs](const auto& p) { return obs(p); }, c->final_point));
          } else {
            ++rejected;
          }
        }
        shards[s] = tally(values, rejected);
      } catch (...) {
        errors[s] = std::current_exception();
        failed.store(true);
      }
    }
  };

  unsigned workers = opts.workers != 0 ? opts.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(1, n_shards)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return combine(shards);
}

}  // namespace rlmc
