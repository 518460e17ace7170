#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cbocal {

/// Log(1 + e^x) without overflow for large |x|.
double softplus(double x) noexcept;

/// Layer sizes of a fully connected feed-forward network, counted without
/// bias units. Hidden layers use softplus, the output layer is the identity
/// and carries no bias unit of its own.
///
/// Weights are stored layer by layer. The matrix between layer l and l+1 has
/// (n_l + 1) rows and n_{l+1} columns, stored row-major, with row 0 holding
/// the bias weights.
class NetworkSpec {
 public:
  NetworkSpec() = default;
  explicit NetworkSpec(std::vector<std::size_t> layer_sizes);

  /// Single-input, single-output network with the given hidden widths.
  static NetworkSpec scalar(std::vector<std::size_t> hidden);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t input_size() const noexcept { return sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.back(); }
  std::size_t weight_count() const noexcept { return weight_count_; }

  bool operator==(const NetworkSpec&) const = default;

 private:
  std::vector<std::size_t> sizes_{1, 1};
  std::size_t weight_count_ = 3;
};

std::size_t weight_count(const NetworkSpec& spec) noexcept;

std::vector<double> forward(const NetworkSpec& spec, std::span<const double> theta,
                            std::span<const double> x);

/// Scalar-in scalar-out evaluation, used on the simulation hot path.
/// Requires input_size() == output_size() == 1 and a matching theta length.
double forward_scalar(const NetworkSpec& spec, std::span<const double> theta, double x);

}  // namespace cbocal
