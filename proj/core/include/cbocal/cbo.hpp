#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "cbocal/cost.hpp"
#include "cbocal/param_space.hpp"

namespace cbocal {

struct CboConfig {
  std::size_t n_agents = 100;
  double lambda = 1.0;
  double sigma = 1.0;
  double alpha = 30.0;
  double dt = 0.05;
  std::size_t max_steps = 100;
  std::size_t batch_size = 50;
  std::uint64_t seed = 0;
  /// sigma at step k is sigma * sigma_decay^k; 1 keeps it constant.
  double sigma_decay = 1.0;
  /// Cost assigned to objective values that are NaN or infinite.
  double nonfinite_penalty = 1e6;
  /// Worker threads for objective evaluation. Results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

using Objective = std::function<double(std::span<const double>)>;

struct CboState {
  std::vector<ParamVector> agents;
  std::size_t step = 0;
  ParamVector best;
  double best_cost = std::numeric_limits<double>::infinity();
  Rng rng;
};

/// Per-step diagnostics; step 0 describes the initial ensemble.
struct StepRecord {
  std::size_t step = 0;
  double batch_min = 0.0;
  double batch_mean = 0.0;
  double best_cost = 0.0;
  std::size_t nonfinite = 0;
  ParamVector consensus;
};

struct CalibrationResult {
  ParamVector best;
  double best_cost = 0.0;
  double initial_mean_cost = 0.0;
  ParamVector final_consensus;
  std::vector<StepRecord> trace;
  std::size_t evaluations = 0;
};

/// Gibbs-weighted mean of the agents with weights exp(-alpha * cost).
/// Costs are shifted by their minimum before exponentiation, and the sum runs
/// in a canonical order, so the result does not depend on how the ensemble
/// is listed.
ParamVector consensus_point(std::span<const ParamVector> agents, std::span<const double> costs, double alpha);

/// Fresh state: agents sampled from the box with the config seed.
CboState make_state(const InitBox& box, const CboConfig& config);

/// Evaluates the given agents (in parallel when configured), replacing
/// non-finite values by the configured penalty and folding them into
/// state.best. Returns the costs in batch order and the non-finite count.
std::vector<double> evaluate_agents(CboState& state, std::span<const std::size_t> indices,
                                    const Objective& objective, const CboConfig& config,
                                    std::size_t* nonfinite = nullptr);

/// One consensus step restricted to `batch`: evaluate, form the batch
/// consensus point, then drift and diffuse the batch agents by one
/// Euler-Maruyama step of size config.dt. Agents outside the batch are left
/// as they are.
StepRecord cbo_step(CboState& state, std::span<const std::size_t> batch, const Objective& objective,
                    const CboConfig& config);

/// Draws `batch_size` distinct agent indices from the state's stream.
std::vector<std::size_t> draw_batch(CboState& state, const CboConfig& config);

CalibrationResult minimize(const Objective& objective, const InitBox& box, const CboConfig& config);
CalibrationResult run(const CalibrationProblem& problem, const CboConfig& config);

}  // namespace cbocal
