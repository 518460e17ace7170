#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cbocal/cbocal.hpp"

namespace cbocal::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeError = 3 };

/// Runs `body`, mapping exceptions to exit codes and printing them to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

struct CalibrateOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct ExperimentOptions {
  std::vector<std::string> models;       // short names (lin, log, nn4, ...) or config paths
  std::vector<std::string> data;         // paths or glob patterns
  std::filesystem::path out = "experiment";
  std::optional<std::filesystem::path> base_config;
  std::optional<std::uint64_t> seed;
};

struct ForceCurveOptions {
  std::filesystem::path result;
  double min = 0.0;
  double max = 0.0;
  std::size_t samples = 100;
  std::optional<std::filesystem::path> out;
};

struct GenerateOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct Cell {
  std::string model;
  std::string dataset;
  bool ok = false;
  std::string error;
  double cost = 0.0;
  ModelParams params;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

struct ExperimentSummary {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::vector<Cell> cells;  // model-major

  const Cell& cell(std::size_t model, std::size_t dataset) const { return cells[model * datasets.size() + dataset]; }
  /// Mean cost over the model's successful cells; NaN when none succeeded.
  double average_cost(std::size_t model) const;
  /// Index of the model with the lowest cost on the dataset, if any succeeded.
  std::optional<std::size_t> column_min(std::size_t dataset) const;
};

std::string format_cost_table(const ExperimentSummary& s);
std::string format_car_length_table(const ExperimentSummary& s);
std::string format_cells(const ExperimentSummary& s);

/// Expands glob patterns; literal paths pass through. Sorted, de-duplicated.
std::vector<std::filesystem::path> expand_data(const std::vector<std::string>& patterns);

int cmd_calibrate(const CalibrateOptions& opts, std::ostream& out);
ExperimentSummary run_experiment(const ExperimentOptions& opts, std::ostream& log);
int cmd_experiment(const ExperimentOptions& opts, std::ostream& out);
int cmd_force_curve(const ForceCurveOptions& opts, std::ostream& out);
int cmd_generate(const GenerateOptions& opts, std::ostream& out);

}  // namespace cbocal::cli
