#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace cbocal {

/// Flat parameter vector an optimizer agent carries.
using ParamVector = std::vector<double>;

/// Named model parameters. `car_length` is present for the follow-the-leader
/// laws, `theta` for network-driven models.
struct ModelParams {
  double v_max = 0.0;
  std::optional<double> car_length;
  std::vector<double> theta;

  bool operator==(const ModelParams&) const = default;
};

struct Slot {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;

  bool operator==(const Slot&) const = default;
};

/// Ordered, contiguous, disjoint slots covering [0, dimension()).
/// Recognised slot names: "v_max" (size 1), "L" (size 1), "theta".
class ParamLayout {
 public:
  ParamLayout() = default;
  /// Slots are laid out in the given order; offsets are assigned here.
  static ParamLayout from_sizes(const std::vector<std::pair<std::string, std::size_t>>& slots);

  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const Slot* find(const std::string& name) const noexcept;
  bool has(const std::string& name) const noexcept { return find(name) != nullptr; }

  bool operator==(const ParamLayout&) const = default;

 private:
  std::vector<Slot> slots_;
  std::size_t dimension_ = 0;
};

ParamVector pack(const ParamLayout& layout, const ModelParams& params);
ModelParams unpack(const ParamLayout& layout, std::span<const double> u);

/// Axis-aligned sampling box, lower <= upper in every coordinate.
class InitBox {
 public:
  InitBox() = default;
  InitBox(std::vector<double> lower, std::vector<double> upper);

  /// Same interval for each coordinate of a slot; per-slot intervals are
  /// given in layout order.
  static InitBox per_slot(const ParamLayout& layout,
                          const std::vector<std::pair<double, double>>& intervals);

  std::size_t dimension() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  bool contains(std::span<const double> u) const noexcept;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

using Rng = std::mt19937_64;

/// n independent uniform draws from the box. Deterministic given the stream.
std::vector<ParamVector> sample_initial(const InitBox& box, std::size_t n, Rng& rng);

}  // namespace cbocal
