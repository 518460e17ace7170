#include "cbocal/param_space.hpp"

#include <algorithm>
#include <cmath>

#include "cbocal/errors.hpp"

namespace cbocal {

ParamLayout ParamLayout::from_sizes(const std::vector<std::pair<std::string, std::size_t>>& slots) {
  ParamLayout layout;
  for (const auto& [name, size] : slots) {
    if (size == 0) throw DimensionError("empty parameter slot '" + name + "'");
    if (layout.has(name)) throw DimensionError("duplicate parameter slot '" + name + "'");
    layout.slots_.push_back({name, layout.dimension_, size});
    layout.dimension_ += size;
  }
  return layout;
}

const Slot* ParamLayout::find(const std::string& name) const noexcept {
  for (const auto& s : slots_)
    if (s.name == name) return &s;
  return nullptr;
}

ParamVector pack(const ParamLayout& layout, const ModelParams& params) {
  ParamVector u(layout.dimension(), 0.0);
  for (const auto& slot : layout.slots()) {
    if (slot.name == "v_max") {
      u[slot.offset] = params.v_max;
    } else if (slot.name == "L") {
      if (!params.car_length) throw DimensionError("layout has a car length slot but record has none");
      u[slot.offset] = *params.car_length;
    } else if (slot.name == "theta") {
      if (params.theta.size() != slot.size)
        throw DimensionError("theta has " + std::to_string(params.theta.size()) +
                             " entries, layout expects " + std::to_string(slot.size));
      std::copy(params.theta.begin(), params.theta.end(), u.begin() + static_cast<std::ptrdiff_t>(slot.offset));
    } else {
      throw DimensionError("unknown parameter slot '" + slot.name + "'");
    }
  }
  if (params.car_length && !layout.has("L")) throw DimensionError("record has a car length the layout lacks");
  if (!params.theta.empty() && !layout.has("theta"))
    throw DimensionError("record has network weights the layout lacks");
  return u;
}

ModelParams unpack(const ParamLayout& layout, std::span<const double> u) {
  if (u.size() != layout.dimension())
    throw DimensionError("parameter vector has dimension " + std::to_string(u.size()) +
                         ", layout expects " + std::to_string(layout.dimension()));
  ModelParams params;
  for (const auto& slot : layout.slots()) {
    if (slot.name == "v_max") {
      params.v_max = u[slot.offset];
    } else if (slot.name == "L") {
      params.car_length = u[slot.offset];
    } else if (slot.name == "theta") {
      params.theta.assign(u.begin() + static_cast<std::ptrdiff_t>(slot.offset),
                          u.begin() + static_cast<std::ptrdiff_t>(slot.offset + slot.size));
    } else {
      throw DimensionError("unknown parameter slot '" + slot.name + "'");
    }
  }
  return params;
}

InitBox::InitBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw DimensionError("box bounds differ in dimension");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
      throw ConfigError("box bounds must be finite");
    if (lower_[i] > upper_[i])
      throw ConfigError("box lower bound exceeds upper bound at coordinate " + std::to_string(i));
  }
}

InitBox InitBox::per_slot(const ParamLayout& layout,
                          const std::vector<std::pair<double, double>>& intervals) {
  if (intervals.size() != layout.slots().size())
    throw DimensionError("need one interval per parameter slot");
  std::vector<double> lo;
  std::vector<double> hi;
  for (std::size_t s = 0; s < intervals.size(); ++s) {
    lo.insert(lo.end(), layout.slots()[s].size, intervals[s].first);
    hi.insert(hi.end(), layout.slots()[s].size, intervals[s].second);
  }
  return InitBox(std::move(lo), std::move(hi));
}

bool InitBox::contains(std::span<const double> u) const noexcept {
  if (u.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] < lower_[i] || u[i] > upper_[i]) return false;
  return true;
}

std::vector<ParamVector> sample_initial(const InitBox& box, std::size_t n, Rng& rng) {
  if (n == 0) throw ConfigError("need at least one agent");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ParamVector> agents(n, ParamVector(box.dimension()));
  for (auto& agent : agents) {
    for (std::size_t i = 0; i < agent.size(); ++i) {
      const double lo = box.lower()[i];
      const double hi = box.upper()[i];
      // lo + w * (hi - lo) may round past hi
      const double w = unit(rng);
      agent[i] = std::min(hi, std::max(lo, lo + w * (hi - lo)));
    }
  }
  return agents;
}

}  // namespace cbocal
