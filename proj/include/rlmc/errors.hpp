#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlmc {

// Smallest eigenvalue fell at or below the positivity floor.
class NotPositiveDefinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A sphere point was used outside the (eps, pi - eps) band of its chart.
class ChartDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An RK4 stage hit the chart singularity at a pole or overflowed.
class StepOutOfChart : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateSteps : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A step failed inside run_trajectory. Carries where it happened.
class TrajectoryError : public std::runtime_error {
 public:
  TrajectoryError(const std::string& what, std::int64_t step, std::uint64_t stream_id)
      : std::runtime_error("trajectory " + std::to_string(stream_id) + ", step " +
                           std::to_string(step) + ": " + what),
        step_(step),
        stream_id_(stream_id) {}

  std::int64_t step() const { return step_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::int64_t step_;
  std::uint64_t stream_id_;
};

}  // namespace rlmc
