#include "commands.hpp"

#include <glob.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cbocal::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string describe(const ModelParams& p) {
  std::ostringstream ss;
  ss << "v_max=" << format_number(p.v_max);
  if (p.car_length) ss << " L=" << format_number(*p.car_length);
  if (!p.theta.empty()) {
    ss << " theta=[";
    for (std::size_t i = 0; i < p.theta.size(); ++i) ss << (i ? "," : "") << format_number(p.theta[i]);
    ss << "]";
  }
  return ss.str();
}

RunConfig config_for_model(const std::string& model, const json& base, const fs::path& base_dir) {
  if (model.size() > 5 && model.ends_with(".json")) return load_run_config(model);
  json j = base;
  j["model"] = model;
  for (const char* key : {"hidden", "label", "layout"}) j.erase(key);
  if (j.contains("init_theta")) {
    const auto& box = j["init_theta"];
    const bool pair = box.is_array() && box.size() == 2 && box[0].is_number() && box[1].is_number();
    if (!pair) j.erase("init_theta");
  }
  return parse_run_config(j.dump(), base_dir);
}

}  // namespace

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

double ExperimentSummary::average_cost(std::size_t model) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& c = cell(model, d);
    if (!c.ok) continue;
    sum += c.cost;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : std::nan("");
}

std::optional<std::size_t> ExperimentSummary::column_min(std::size_t dataset) const {
  std::optional<std::size_t> best;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto& c = cell(m, dataset);
    if (c.ok && (!best || c.cost < cell(*best, dataset).cost)) best = m;
  }
  return best;
}

std::string format_cost_table(const ExperimentSummary& s) {
  // '*' marks the lowest cost in each column, averages included.
  std::string out = "model";
  for (const auto& d : s.datasets) out += "," + d;
  out += ",average\n";
  std::optional<std::size_t> best_avg;
  for (std::size_t m = 0; m < s.models.size(); ++m) {
    const double a = s.average_cost(m);
    if (std::isfinite(a) && (!best_avg || a < s.average_cost(*best_avg))) best_avg = m;
  }
  for (std::size_t m = 0; m < s.models.size(); ++m) {
    out += s.models[m];
    for (std::size_t d = 0; d < s.datasets.size(); ++d) {
      const auto& c = s.cell(m, d);
      out += ',';
      if (!c.ok) {
        out += "failed";
        continue;
      }
      out += format_number(c.cost);
      if (s.column_min(d) == m) out += '*';
    }
    const double a = s.average_cost(m);
    out += ',' + (std::isfinite(a) ? format_number(a) : std::string("nan"));
    if (best_avg == m) out += '*';
    out += '\n';
  }
  return out;
}

std::string format_car_length_table(const ExperimentSummary& s) {
  std::string out = "model";
  for (const auto& d : s.datasets) out += "," + d;
  out += ",average\n";
  for (std::size_t m = 0; m < s.models.size(); ++m) {
    bool has_length = false;
    for (std::size_t d = 0; d < s.datasets.size(); ++d) has_length |= s.cell(m, d).ok && s.cell(m, d).params.car_length;
    if (!has_length) continue;
    out += s.models[m];
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t d = 0; d < s.datasets.size(); ++d) {
      const auto& c = s.cell(m, d);
      out += ',';
      if (!c.ok || !c.params.car_length) {
        out += "failed";
        continue;
      }
      out += format_number(*c.params.car_length);
      sum += *c.params.car_length;
      ++n;
    }
    out += ',' + (n ? format_number(sum / static_cast<double>(n)) : std::string("nan")) + '\n';
  }
  return out;
}

std::string format_cells(const ExperimentSummary& s) {
  std::string out = "model,dataset,status,cost,column_min,v_max,L,seed\n";
  for (std::size_t m = 0; m < s.models.size(); ++m)
    for (std::size_t d = 0; d < s.datasets.size(); ++d) {
      const auto& c = s.cell(m, d);
      out += c.model + ',' + c.dataset + ',' + (c.ok ? "ok" : "failed") + ',';
      out += c.ok ? format_number(c.cost) : "";
      out += ',' + std::string(c.ok && s.column_min(d) == m ? "1" : "0") + ',';
      out += c.ok ? format_number(c.params.v_max) : "";
      out += ',';
      out += c.ok && c.params.car_length ? format_number(*c.params.car_length) : "";
      out += ',' + std::to_string(c.seed) + '\n';
    }
  return out;
}

std::vector<fs::path> expand_data(const std::vector<std::string>& patterns) {
  std::set<fs::path> found;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) found.insert(g.gl_pathv[i]);
    } else if (pattern.find_first_of("*?[") == std::string::npos) {
      found.insert(pattern);  // literal path; read errors surface per cell
    }
    globfree(&g);
  }
  return {found.begin(), found.end()};
}

int cmd_calibrate(const CalibrateOptions& opts, std::ostream& out) {
  return guarded(
      [&] {
        auto config = load_run_config(opts.config);
        if (opts.seed) config.cbo.seed = *opts.seed;
        if (opts.out) config.out = *opts.out;
        if (config.data.empty()) throw ConfigError("config has no data path");

        const auto data = read_trajectory(config.data);
        CalibrationProblem problem{config.model, data, config.cost, config.init_box, config.substeps};
        problem.validate();
        const auto result = run(problem, config.cbo);
        write_results(config, data, result);

        out << "model " << config.model_label << " seed " << config.cbo.seed << '\n';
        out << "best cost " << format_number(result.best_cost) << " (initial mean "
            << format_number(result.initial_mean_cost) << ")\n";
        out << describe(unpack(config.model.layout(), result.best)) << '\n';
        out << "results written to " << config.out.string() << '\n';
        return int{kOk};
      },
      std::cerr);
}

ExperimentSummary run_experiment(const ExperimentOptions& opts, std::ostream& log) {
  if (opts.models.empty()) throw ConfigError("no models given");
  const auto datasets = expand_data(opts.data);
  if (datasets.empty()) throw ConfigError("no datasets matched");

  json base = json::object();
  fs::path base_dir;
  if (opts.base_config) {
    std::ifstream in(*opts.base_config);
    if (!in) throw ConfigError("cannot open " + opts.base_config->string());
    try {
      base = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("base config is not valid JSON: ") + e.what());
    }
    base_dir = opts.base_config->parent_path();
  }

  std::vector<RunConfig> configs;
  ExperimentSummary summary;
  for (const auto& m : opts.models) {
    configs.push_back(config_for_model(m, base, base_dir));
    if (opts.seed) configs.back().cbo.seed = *opts.seed;
    summary.models.push_back(configs.back().model_label);
  }
  for (const auto& d : datasets) summary.datasets.push_back(d.stem().string());
  {
    std::set<std::string> unique(summary.models.begin(), summary.models.end());
    if (unique.size() != summary.models.size()) throw ConfigError("model labels must be distinct");
  }

  for (std::size_t m = 0; m < configs.size(); ++m) {
    for (std::size_t d = 0; d < datasets.size(); ++d) {
      Cell cell;
      cell.model = summary.models[m];
      cell.dataset = summary.datasets[d];
      auto config = configs[m];
      config.data = datasets[d];
      config.out = opts.out / cell.model / cell.dataset;
      cell.seed = config.cbo.seed;
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto data = read_trajectory(config.data);
        CalibrationProblem problem{config.model, data, config.cost, config.init_box, config.substeps};
        problem.validate();
        const auto result = run(problem, config.cbo);
        write_results(config, data, result);
        cell.ok = true;
        cell.cost = result.best_cost;
        cell.params = unpack(config.model.layout(), result.best);
      } catch (const std::exception& e) {
        cell.error = e.what();
        log << "cell " << cell.model << "/" << cell.dataset << " failed: " << e.what() << '\n';
      }
      cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      summary.cells.push_back(std::move(cell));
    }
  }
  return summary;
}

int cmd_experiment(const ExperimentOptions& opts, std::ostream& out) {
  return guarded(
      [&] {
        const auto summary = run_experiment(opts, std::cerr);
        write_text(opts.out / "summary_cost.csv", format_cost_table(summary));
        write_text(opts.out / "summary_car_length.csv", format_car_length_table(summary));
        write_text(opts.out / "cells.csv", format_cells(summary));

        std::string timings = "model,dataset,seconds\n";
        for (const auto& c : summary.cells) timings += c.model + ',' + c.dataset + ',' + format_number(c.seconds) + '\n';
        write_text(opts.out / "timings.csv", timings);

        out << format_cost_table(summary);
        const bool all_ok = std::all_of(summary.cells.begin(), summary.cells.end(), [](const Cell& c) { return c.ok; });
        return int{all_ok ? kOk : kRuntimeError};
      },
      std::cerr);
}

int cmd_force_curve(const ForceCurveOptions& opts, std::ostream& out) {
  return guarded(
      [&] {
        if (!fs::exists(opts.result)) throw DataError("result file " + opts.result.string() + " not found");
        const auto stored = read_result(opts.result);
        const auto curve = force_curve(stored.model, stored.best, {opts.min, opts.max, opts.samples});
        const auto text = format_force_curve(curve);
        if (opts.out) write_text(*opts.out, text);
        else out << text;
        return int{kOk};
      },
      std::cerr);
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out) {
  return guarded(
      [&] {
        auto config = load_generate_config(opts.config);
        if (opts.seed) config.seed = *opts.seed;
        if (opts.out) config.output = *opts.out;
        const auto data = generate(config);
        write_trajectory(data, config.output, config.overwrite);
        out << "wrote " << data.n_times() << " samples of " << data.n_vehicles() << " vehicles to "
            << config.output.string() << '\n';
        return int{kOk};
      },
      std::cerr);
}

}  // namespace cbocal::cli
