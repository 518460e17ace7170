#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbocal/cbo.hpp"
#include "cbocal/cost.hpp"
#include "cbocal/dynamics.hpp"

namespace cbocal {

// Trajectory CSV: header `t,x1,...,xN`, one row per sample time, vehicles
// ordered follower to leader, '.' decimal separator, '\n' line ends.
Trajectory read_trajectory(const std::filesystem::path& path);
Trajectory parse_trajectory(const std::string& text, const std::string& origin = "<memory>");
std::string format_trajectory(const Trajectory& t);
void write_trajectory(const Trajectory& t, const std::filesystem::path& path, bool overwrite = true);

/// t0, t0 + dt, ... up to t0 + duration (inclusive, rounded to whole steps).
std::vector<double> uniform_grid(double t0, double duration, double dt);

/// Smallest and largest gap between consecutive vehicles over the whole run.
std::pair<double, double> headway_range(const Trajectory& t);

/// Noise-free (or Gaussian-perturbed) data from a model at known parameters.
/// Throws NonPositiveHeadway if the ground-truth run collides.
Trajectory generate_synthetic(const ModelSpec& model, std::span<const double> u_true, std::span<const double> z0,
                              std::span<const double> grid, double noise_std, std::uint64_t seed,
                              std::size_t substeps = 100);

/// Short names used on the command line: lin, log, nn<k> (one hidden layer
/// of k units), and the long variant names with an explicit hidden list.
ModelSpec model_from_name(const std::string& name, const std::vector<std::size_t>& hidden = {4});

/// Paper defaults: v_max ~ U[20, 40], L ~ U[0, 10], theta ~ U[-0.5, 0.5].
InitBox default_init_box(const ModelSpec& model);

struct ForceRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t samples = 0;
};

struct RunConfig {
  std::string model_label;
  ModelSpec model = ModelSpec::lwr_linear();
  CboConfig cbo;
  CostConfig cost;
  InitBox init_box;
  std::size_t substeps = 1;
  std::filesystem::path data;
  std::filesystem::path out = "results";
  std::optional<ForceRange> force;  // defaults to the data's headway range

  void validate() const;
};

/// Flat JSON key-value document; relative paths resolve against `base_dir`.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
/// Fully resolved config, every default spelled out, including the layout.
std::string dump_run_config(const RunConfig& config);

struct GenerateConfig {
  std::string model_label;
  ModelSpec model = ModelSpec::lwr_linear();
  ModelParams truth;
  std::size_t n_cars = 5;
  double spacing = 20.0;
  double duration = 10.0;
  double sample_dt = 0.05;
  std::size_t substeps = 100;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path output = "data.csv";
  bool overwrite = true;
};

GenerateConfig parse_generate_config(const std::string& text, const std::filesystem::path& base_dir = {});
GenerateConfig load_generate_config(const std::filesystem::path& path);
Trajectory generate(const GenerateConfig& config);

struct CurvePoint {
  double headway;
  double velocity;
};

std::vector<CurvePoint> force_curve(const ModelSpec& model, std::span<const double> u, const ForceRange& range);

/// What result.json stores about a finished calibration.
struct StoredResult {
  std::string model_label;
  ModelSpec model = ModelSpec::lwr_linear();
  ParamVector best;
  double final_cost = 0.0;
  double initial_mean_cost = 0.0;
  std::uint64_t seed = 0;
};

StoredResult read_result(const std::filesystem::path& path);

/// Writes result.json, trace.csv, force_curve.csv, simulated.csv and
/// config.json into config.out.
void write_results(const RunConfig& config, const Trajectory& data, const CalibrationResult& result);

std::string format_trace(const std::vector<StepRecord>& trace);
std::string format_force_curve(const std::vector<CurvePoint>& curve);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

}  // namespace cbocal
