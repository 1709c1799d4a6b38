#include "rlmc/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "rlmc/errors.hpp"

namespace rlmc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

void RngStream::refill() {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_index_),
                                static_cast<std::uint32_t>(block_index_ >> 32),
                                static_cast<std::uint32_t>(stream_id_),
                                static_cast<std::uint32_t>(stream_id_ >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  buffer_ = Philox4x32::block(ctr, key);
  ++block_index_;
  used_ = 0;
}

RngStream::result_type RngStream::operator()() {
  if (used_ == 4) refill();
  return buffer_[used_++];
}

double RngStream::uniform01() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(*this); }

double RngStream::rademacher() {
  if (bits_left_ == 0) {
    bits_ = (*this)();
    bits_left_ = 32;
  }
  const double v = (bits_ & 1u) ? 1.0 : -1.0;
  bits_ >>= 1;
  --bits_left_;
  return v;
}

NoiseKind noise_kind_from_name(const std::string& name) {
  if (name == "rademacher") return NoiseKind::Rademacher;
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "sphere") return NoiseKind::ScaledSphereUniform;
  throw ConfigError("unknown noise '" + name + "' (expected rademacher, gaussian, sphere)");
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::Rademacher:
      return "rademacher";
    case NoiseKind::Gaussian:
      return "gaussian";
    case NoiseKind::ScaledSphereUniform:
      return "sphere";
  }
  return "?";
}

void draw(const NoiseSpec& spec, RngStream& rng, std::span<double> out) {
  if (static_cast<int>(out.size()) != spec.dim) {
    throw std::invalid_argument("noise draw: output length does not match the noise dimension");
  }
  switch (spec.kind) {
    case NoiseKind::Rademacher:
      for (double& x : out) x = rng.rademacher();
      return;
    case NoiseKind::Gaussian:
      for (double& x : out) x = rng.normal();
      return;
    case NoiseKind::ScaledSphereUniform: {
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (double& x : out) {
          x = rng.normal();
          norm2 += x * x;
        }
      } while (norm2 == 0.0);
      const double scale = std::sqrt(static_cast<double>(spec.dim) / norm2);
      for (double& x : out) x *= scale;
      return;
    }
  }
}

}  // namespace rlmc
