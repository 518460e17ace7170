#pragma once

#include <optional>
#include <span>

#include "cbocal/dynamics.hpp"
#include "cbocal/param_space.hpp"

namespace cbocal {

struct CostConfig {
  double delta = 0.0;
  std::optional<ParamVector> u_ref;  // required when delta > 0
  double blowup_penalty = 1e6;

  void validate(std::size_t dimension) const;
};

/// Everything a calibration run needs besides the optimizer settings.
struct CalibrationProblem {
  ModelSpec model;
  Trajectory data;
  CostConfig cost;
  InitBox init_box;
  std::size_t substeps = 1;

  void validate() const;
};

/// Half the trapezoidal time integral of the squared Euclidean distance
/// between two trajectories on the same grid.
double misfit(const Trajectory& y, const Trajectory& z);

/// Calibration objective: simulated-vs-recorded misfit plus the quadratic
/// pull toward the reference parameters. A simulation that collides costs
/// the blow-up penalty plus the misfit accumulated before the collision;
/// a non-finite result costs the blow-up penalty.
double evaluate(const CalibrationProblem& problem, std::span<const double> u);

}  // namespace cbocal
