#include "cbocal/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "cbocal/errors.hpp"

namespace cbocal {

Trajectory::Trajectory(std::vector<double> times, std::size_t n_vehicles, std::vector<double> positions)
    : times_(std::move(times)), n_vehicles_(n_vehicles), positions_(std::move(positions)) {
  if (n_vehicles_ == 0) throw DimensionError("trajectory needs at least one vehicle");
  if (positions_.size() != times_.size() * n_vehicles_)
    throw DimensionError("trajectory positions do not match times x vehicles");
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1]))
      throw DataError("trajectory times must be strictly increasing (index " + std::to_string(k) + ")");
}

Trajectory Trajectory::prefix(std::size_t n) const {
  n = std::min(n, times_.size());
  Trajectory t;
  t.times_.assign(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(n));
  t.n_vehicles_ = n_vehicles_;
  t.positions_.assign(positions_.begin(), positions_.begin() + static_cast<std::ptrdiff_t>(n * n_vehicles_));
  return t;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LwrLinear: return "lwr_linear";
    case ModelKind::LwrLog: return "lwr_log";
    case ModelKind::NnVelocity: return "nn_velocity";
    case ModelKind::GeneralNn: return "general_nn";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "lwr_linear" || name == "lin") return ModelKind::LwrLinear;
  if (name == "lwr_log" || name == "log") return ModelKind::LwrLog;
  if (name == "nn_velocity" || name == "nn") return ModelKind::NnVelocity;
  if (name == "general_nn") return ModelKind::GeneralNn;
  throw ConfigError("unknown model '" + name + "'");
}

ModelSpec::ModelSpec(ModelKind kind, std::optional<NetworkSpec> net) : kind_(kind), net_(std::move(net)) {
  if (is_lwr()) {
    layout_ = ParamLayout::from_sizes({{"v_max", 1}, {"L", 1}});
    return;
  }
  if (net_->input_size() != 1 || net_->output_size() != 1)
    throw DimensionError("interaction networks map a scalar headway to a scalar output");
  if (kind_ == ModelKind::NnVelocity)
    layout_ = ParamLayout::from_sizes({{"v_max", 1}, {"theta", net_->weight_count()}});
  else
    layout_ = ParamLayout::from_sizes({{"theta", net_->weight_count()}});
}

const NetworkSpec& ModelSpec::network() const {
  if (!net_) throw ConfigError(to_string(kind_) + " has no network");
  return *net_;
}

namespace {

inline double lwr_velocity(double v_max, double car_length, double headway, LwrVariant variant) {
  const double s = headway / car_length;
  return variant == LwrVariant::Linear ? v_max * (1.0 - 1.0 / s) : v_max * std::log(s);
}

struct Collision {
  std::size_t follower;
  double headway;
};

std::optional<Collision> lwr_into(double v_max, double car_length, std::span<const double> y,
                                  LwrVariant variant, std::span<double> out) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = y[i + 1] - y[i];
    if (!(h > kMinHeadway)) return Collision{i, h};
    out[i] = lwr_velocity(v_max, car_length, h, variant);
  }
  out[n - 1] = v_max;
  return std::nullopt;
}

void nn_into(double v_max, std::span<const double> theta, std::span<const double> y, const NetworkSpec& spec,
             std::span<double> out) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = forward_scalar(spec, theta, y[i + 1] - y[i]);
  out[n - 1] = v_max;
}

void general_into(std::span<const double> theta, std::span<const double> y, const NetworkSpec& spec,
                  std::span<double> out) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum += forward_scalar(spec, theta, y[j] - y[i]);
    out[i] = sum;
  }
}

void require_sizes(std::span<const double> y, std::span<double> out, std::size_t min_vehicles) {
  if (out.size() != y.size()) throw DimensionError("rhs output size differs from state size");
  if (y.size() < min_vehicles)
    throw DimensionError("model needs at least " + std::to_string(min_vehicles) + " vehicles");
}

LwrVariant variant_of(ModelKind kind) {
  return kind == ModelKind::LwrLinear ? LwrVariant::Linear : LwrVariant::Log;
}

}  // namespace

double ModelSpec::interaction(const ModelParams& params, double headway) const {
  switch (kind_) {
    case ModelKind::LwrLinear:
    case ModelKind::LwrLog:
      return lwr_velocity(params.v_max, params.car_length.value_or(1.0), headway, variant_of(kind_));
    case ModelKind::NnVelocity:
    case ModelKind::GeneralNn:
      return forward_scalar(*net_, params.theta, headway);
  }
  return 0.0;
}

void rhs_lwr(const ModelParams& params, std::span<const double> y, LwrVariant variant, std::span<double> out) {
  require_sizes(y, out, 2);
  if (!params.car_length) throw DimensionError("LWR right-hand side needs a car length");
  if (auto c = lwr_into(params.v_max, *params.car_length, y, variant, out))
    throw NonPositiveHeadway(c->follower, c->headway);
}

void rhs_nn(const ModelParams& params, std::span<const double> y, const NetworkSpec& spec,
            std::span<double> out) {
  require_sizes(y, out, 2);
  nn_into(params.v_max, params.theta, y, spec, out);
}

void rhs_general(const ModelParams& params, std::span<const double> y, const NetworkSpec& spec,
                 std::span<double> out) {
  require_sizes(y, out, 1);
  general_into(params.theta, y, spec, out);
}

std::vector<double> rhs_lwr(std::span<const double> u, std::span<const double> y, LwrVariant variant) {
  const auto model = variant == LwrVariant::Linear ? ModelSpec::lwr_linear() : ModelSpec::lwr_log();
  std::vector<double> out(y.size());
  rhs_lwr(unpack(model.layout(), u), y, variant, out);
  return out;
}

std::vector<double> rhs_nn(std::span<const double> u, std::span<const double> y, const NetworkSpec& spec) {
  const auto model = ModelSpec::nn_velocity(spec);
  std::vector<double> out(y.size());
  rhs_nn(unpack(model.layout(), u), y, spec, out);
  return out;
}

std::vector<double> rhs_general(std::span<const double> u, std::span<const double> y,
                                const NetworkSpec& spec) {
  const auto model = ModelSpec::general_nn(spec);
  std::vector<double> out(y.size());
  rhs_general(unpack(model.layout(), u), y, spec, out);
  return out;
}

SimulationOutcome simulate(const ModelSpec& model, std::span<const double> u, std::span<const double> z0,
                           std::span<const double> grid, std::size_t substeps) {
  if (substeps == 0) throw ConfigError("substeps must be at least 1");
  if (grid.empty()) throw DimensionError("empty time grid");
  const std::size_t n = z0.size();
  if (n < (model.kind() == ModelKind::GeneralNn ? 1u : 2u))
    throw DimensionError("follow-the-leader models need at least two vehicles");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw DataError("time grid must be strictly increasing");

  const ModelParams params = unpack(model.layout(), u);
  const double car_length = params.car_length.value_or(1.0);

  std::vector<double> positions;
  positions.reserve(grid.size() * n);
  positions.insert(positions.end(), z0.begin(), z0.end());

  std::vector<double> y(z0.begin(), z0.end());
  std::vector<double> v(n);
  std::optional<BlowUp> blowup;

  for (std::size_t k = 1; k < grid.size() && !blowup; ++k) {
    const double h = (grid[k] - grid[k - 1]) / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) {
      switch (model.kind()) {
        case ModelKind::LwrLinear:
        case ModelKind::LwrLog:
          if (auto c = lwr_into(params.v_max, car_length, y, variant_of(model.kind()), v)) {
            blowup = BlowUp{k, c->follower, c->headway};
          }
          break;
        case ModelKind::NnVelocity:
          nn_into(params.v_max, params.theta, y, model.network(), v);
          break;
        case ModelKind::GeneralNn:
          general_into(params.theta, y, model.network(), v);
          break;
      }
      if (blowup) break;
      for (std::size_t i = 0; i < n; ++i) y[i] += h * v[i];
    }
    if (!blowup) positions.insert(positions.end(), y.begin(), y.end());
  }

  const std::size_t reached = positions.size() / n;
  std::vector<double> times(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(reached));
  return {Trajectory(std::move(times), n, std::move(positions)), blowup};
}

Trajectory integrate_euler(const ModelSpec& model, std::span<const double> u, std::span<const double> z0,
                           std::span<const double> grid, std::size_t substeps) {
  auto outcome = simulate(model, u, z0, grid, substeps);
  if (outcome.blowup)
    throw NonPositiveHeadway(outcome.blowup->follower, outcome.blowup->headway, outcome.blowup->time_index);
  return std::move(outcome.trajectory);
}

}  // namespace cbocal
