#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbocal {

// Vector/matrix sizes that do not line up with a layout or network.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed trajectory file or unusable dataset.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two consecutive vehicles came closer than the minimal headway while
// simulating a follow-the-leader model.
class NonPositiveHeadway : public std::runtime_error {
 public:
  NonPositiveHeadway(std::size_t follower, double headway, std::size_t time_index = 0)
      : std::runtime_error("non-positive headway " + std::to_string(headway) +
                           " behind vehicle " + std::to_string(follower + 1) +
                           " at time index " + std::to_string(time_index)),
        follower_(follower),
        headway_(headway),
        time_index_(time_index) {}

  std::size_t follower() const noexcept { return follower_; }
  double headway() const noexcept { return headway_; }
  std::size_t time_index() const noexcept { return time_index_; }

 private:
  std::size_t follower_;
  double headway_;
  std::size_t time_index_;
};

}  // namespace cbocal
