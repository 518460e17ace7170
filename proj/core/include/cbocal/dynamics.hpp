#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbocal/network.hpp"
#include "cbocal/param_space.hpp"

namespace cbocal {

/// Positions of N vehicles sampled at M time points. Vehicle columns are
/// ordered follower to leader: column N-1 is the front car.
class Trajectory {
 public:
  Trajectory() = default;
  /// `positions` is row-major M x N.
  Trajectory(std::vector<double> times, std::size_t n_vehicles, std::vector<double> positions);

  std::size_t n_times() const noexcept { return times_.size(); }
  std::size_t n_vehicles() const noexcept { return n_vehicles_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& positions() const noexcept { return positions_; }

  double at(std::size_t k, std::size_t i) const noexcept { return positions_[k * n_vehicles_ + i]; }
  std::span<const double> row(std::size_t k) const noexcept {
    return {positions_.data() + k * n_vehicles_, n_vehicles_};
  }

  /// First `n` time points.
  Trajectory prefix(std::size_t n) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<double> times_;
  std::size_t n_vehicles_ = 0;
  std::vector<double> positions_;
};

enum class ModelKind { LwrLinear, LwrLog, NnVelocity, GeneralNn };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Which interaction law drives the vehicles, plus its network shape for the
/// network-driven variants.
class ModelSpec {
 public:
  static ModelSpec lwr_linear() { return ModelSpec(ModelKind::LwrLinear, std::nullopt); }
  static ModelSpec lwr_log() { return ModelSpec(ModelKind::LwrLog, std::nullopt); }
  static ModelSpec nn_velocity(NetworkSpec net) { return ModelSpec(ModelKind::NnVelocity, std::move(net)); }
  static ModelSpec general_nn(NetworkSpec net) { return ModelSpec(ModelKind::GeneralNn, std::move(net)); }

  ModelKind kind() const noexcept { return kind_; }
  bool is_lwr() const noexcept { return kind_ == ModelKind::LwrLinear || kind_ == ModelKind::LwrLog; }
  /// Only valid for the network-driven variants.
  const NetworkSpec& network() const;
  const ParamLayout& layout() const noexcept { return layout_; }

  /// Velocity (or pair force) the model assigns to a single headway.
  double interaction(const ModelParams& params, double headway) const;

 private:
  ModelSpec(ModelKind kind, std::optional<NetworkSpec> net);

  ModelKind kind_;
  std::optional<NetworkSpec> net_;
  ParamLayout layout_;
};

/// Vehicles closer than this are treated as collided in the LWR laws.
inline constexpr double kMinHeadway = 1e-6;

enum class LwrVariant { Linear, Log };

// Right-hand sides. `out` must have the size of `y`.
void rhs_lwr(const ModelParams& params, std::span<const double> y, LwrVariant variant,
             std::span<double> out);
void rhs_nn(const ModelParams& params, std::span<const double> y, const NetworkSpec& spec,
            std::span<double> out);
void rhs_general(const ModelParams& params, std::span<const double> y, const NetworkSpec& spec,
                 std::span<double> out);

std::vector<double> rhs_lwr(std::span<const double> u, std::span<const double> y, LwrVariant variant);
std::vector<double> rhs_nn(std::span<const double> u, std::span<const double> y, const NetworkSpec& spec);
std::vector<double> rhs_general(std::span<const double> u, std::span<const double> y,
                                const NetworkSpec& spec);

struct BlowUp {
  std::size_t time_index = 0;  // first grid point that could not be reached
  std::size_t follower = 0;
  double headway = 0.0;
};

/// Simulation output. On blow-up `trajectory` holds the grid points reached
/// before the collision.
struct SimulationOutcome {
  Trajectory trajectory;
  std::optional<BlowUp> blowup;
};

SimulationOutcome simulate(const ModelSpec& model, std::span<const double> u, std::span<const double> z0,
                           std::span<const double> grid, std::size_t substeps = 1);

/// Explicit Euler with `substeps` equal steps per grid interval. Throws
/// NonPositiveHeadway carrying the grid index of the collision.
Trajectory integrate_euler(const ModelSpec& model, std::span<const double> u, std::span<const double> z0,
                           std::span<const double> grid, std::size_t substeps = 1);

}  // namespace cbocal
