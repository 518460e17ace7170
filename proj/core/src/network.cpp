#include "cbocal/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbocal/errors.hpp"

namespace cbocal {

namespace {

constexpr double kSoftplusThreshold = 30.0;
constexpr std::size_t kMaxWidth = 256;

}  // namespace

double softplus(double x) noexcept {
  if (x > kSoftplusThreshold) return x + std::log1p(std::exp(-x));
  if (x < -kSoftplusThreshold) return std::exp(x);
  return std::log1p(std::exp(x));
}

NetworkSpec::NetworkSpec(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw DimensionError("network needs at least an input and an output layer");
  if (std::any_of(sizes_.begin(), sizes_.end(), [](std::size_t n) { return n == 0; }))
    throw DimensionError("network layers must have at least one neuron");
  if (std::any_of(sizes_.begin(), sizes_.end(), [](std::size_t n) { return n > kMaxWidth; }))
    throw DimensionError("network layer wider than " + std::to_string(kMaxWidth));
  weight_count_ = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) weight_count_ += (sizes_[l] + 1) * sizes_[l + 1];
}

NetworkSpec NetworkSpec::scalar(std::vector<std::size_t> hidden) {
  std::vector<std::size_t> sizes;
  sizes.reserve(hidden.size() + 2);
  sizes.push_back(1);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return NetworkSpec(std::move(sizes));
}

std::size_t weight_count(const NetworkSpec& spec) noexcept { return spec.weight_count(); }

std::vector<double> forward(const NetworkSpec& spec, std::span<const double> theta,
                            std::span<const double> x) {
  if (theta.size() != spec.weight_count())
    throw DimensionError("network expects " + std::to_string(spec.weight_count()) +
                         " weights, got " + std::to_string(theta.size()));
  if (x.size() != spec.input_size())
    throw DimensionError("network expects input of size " + std::to_string(spec.input_size()) +
                         ", got " + std::to_string(x.size()));

  const auto& sizes = spec.layer_sizes();
  std::vector<double> activation(x.begin(), x.end());
  std::vector<double> next;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t n_in = sizes[l];
    const std::size_t n_out = sizes[l + 1];
    const bool output_layer = (l + 2 == sizes.size());
    next.assign(n_out, 0.0);
    for (std::size_t k = 0; k < n_out; ++k) {
      double z = theta[offset + k];  // bias row
      for (std::size_t j = 0; j < n_in; ++j) z += theta[offset + (j + 1) * n_out + k] * activation[j];
      next[k] = output_layer ? z : softplus(z);
    }
    offset += (n_in + 1) * n_out;
    activation.swap(next);
  }
  return activation;
}

double forward_scalar(const NetworkSpec& spec, std::span<const double> theta, double x) {
  if (spec.input_size() != 1 || spec.output_size() != 1)
    throw DimensionError("forward_scalar requires a scalar network");
  if (theta.size() != spec.weight_count())
    throw DimensionError("network expects " + std::to_string(spec.weight_count()) +
                         " weights, got " + std::to_string(theta.size()));

  const auto& sizes = spec.layer_sizes();
  double buf_a[kMaxWidth];
  double buf_b[kMaxWidth];
  double* activation = buf_a;
  double* next = buf_b;
  activation[0] = x;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t n_in = sizes[l];
    const std::size_t n_out = sizes[l + 1];
    const bool output_layer = (l + 2 == sizes.size());
    for (std::size_t k = 0; k < n_out; ++k) {
      double z = theta[offset + k];
      for (std::size_t j = 0; j < n_in; ++j) z += theta[offset + (j + 1) * n_out + k] * activation[j];
      next[k] = output_layer ? z : softplus(z);
    }
    offset += (n_in + 1) * n_out;
    std::swap(activation, next);
  }
  return activation[0];
}

}  // namespace cbocal
