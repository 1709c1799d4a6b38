#pragma once

// Increment distributions for the chains, and per-trajectory random streams.

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>

namespace rlmc {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each
// (key, counter) pair maps to an independent 128-bit block.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

// Random stream owned by a single trajectory. The generator key is the seed,
// and the stream id occupies the upper half of the counter, so streams with
// different ids never share a block.
class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  double uniform01();  // [0, 1), 53 random bits
  double normal();
  double rademacher();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  std::uint32_t bits_ = 0;
  int bits_left_ = 0;
  std::normal_distribution<double> normal_;
};

enum class NoiseKind { Rademacher, Gaussian, ScaledSphereUniform };

NoiseKind noise_kind_from_name(const std::string& name);
std::string to_string(NoiseKind k);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Rademacher;
  int dim = 2;
};

// Fills out (length spec.dim) with one increment. Components have mean 0,
// unit variance and zero third moment:
//   Rademacher: i.i.d. +-1;  Gaussian: i.i.d. N(0, 1);
//   ScaledSphereUniform: sqrt(q) times a uniform point on S^{q-1}.
void draw(const NoiseSpec& spec, RngStream& rng, std::span<double> out);

}  // namespace rlmc
