#include "cbocal/cost.hpp"

#include <cmath>

#include "cbocal/errors.hpp"

namespace cbocal {

void CostConfig::validate(std::size_t dimension) const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be a finite non-negative number");
  if (delta > 0.0 && !u_ref) throw ConfigError("delta > 0 requires reference parameters u_ref");
  if (delta == 0.0 && u_ref) throw ConfigError("u_ref given but delta is 0");
  if (u_ref && u_ref->size() != dimension)
    throw ConfigError("u_ref has dimension " + std::to_string(u_ref->size()) + ", expected " +
                      std::to_string(dimension));
  if (!(blowup_penalty > 0.0) || !std::isfinite(blowup_penalty))
    throw ConfigError("blowup_penalty must be positive and finite");
}

void CalibrationProblem::validate() const {
  const std::size_t d = model.layout().dimension();
  cost.validate(d);
  if (init_box.dimension() != d)
    throw ConfigError("initialization box has dimension " + std::to_string(init_box.dimension()) +
                      ", model expects " + std::to_string(d));
  if (substeps == 0) throw ConfigError("substeps must be at least 1");
  if (data.n_times() == 0) throw DataError("empty dataset");
  if (model.kind() != ModelKind::GeneralNn && data.n_vehicles() < 2)
    throw DataError("follow-the-leader models need at least two vehicles");
}

double misfit(const Trajectory& y, const Trajectory& z) {
  if (y.n_vehicles() != z.n_vehicles()) throw DimensionError("trajectories differ in vehicle count");
  if (y.times() != z.times()) throw DimensionError("trajectories are on different time grids");
  const auto& t = y.times();
  const std::size_t m = t.size();
  if (m < 2) return 0.0;

  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double left = k > 0 ? t[k] - t[k - 1] : 0.0;
    const double right = k + 1 < m ? t[k + 1] - t[k] : 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < y.n_vehicles(); ++i) {
      const double d = y.at(k, i) - z.at(k, i);
      sq += d * d;
    }
    total += 0.5 * (left + right) * sq;
  }
  return 0.5 * total;
}

double evaluate(const CalibrationProblem& problem, std::span<const double> u) {
  const auto& z = problem.data;
  const auto z0 = z.row(0);
  auto outcome = simulate(problem.model, u, z0, z.times(), problem.substeps);

  double value = 0.0;
  if (outcome.blowup) {
    const auto reached = outcome.trajectory.n_times();
    value = problem.cost.blowup_penalty + misfit(outcome.trajectory, z.prefix(reached));
  } else {
    value = misfit(outcome.trajectory, z);
  }

  if (problem.cost.delta > 0.0) {
    const auto& ref = *problem.cost.u_ref;
    double sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sq += (u[i] - ref[i]) * (u[i] - ref[i]);
    value += 0.5 * problem.cost.delta * sq;
  }
  if (!std::isfinite(value)) return problem.cost.blowup_penalty;
  return value;
}

}  // namespace cbocal
