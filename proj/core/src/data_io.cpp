#include "cbocal/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cbocal/errors.hpp"

namespace cbocal {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_file(const fs::path& path, bool config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    const std::string msg = "cannot open " + path.string();
    if (config) throw ConfigError(msg);
    throw DataError(msg);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::string at_line(const std::string& origin, std::size_t line) {
  return origin + ":" + std::to_string(line) + ": ";
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

// --- JSON helpers -----------------------------------------------------------

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::pair<double, double> interval(const json& j, const char* key, std::pair<double, double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(std::string("config key '") + key + "' must be a [lower, upper] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<std::size_t> hidden_of(const json& j) {
  return get_or<std::vector<std::size_t>>(j, "hidden", {4});
}

std::string default_label(const ModelSpec& model) {
  switch (model.kind()) {
    case ModelKind::LwrLinear: return "lin";
    case ModelKind::LwrLog: return "log";
    case ModelKind::NnVelocity: {
      const auto& sizes = model.network().layer_sizes();
      if (sizes.size() == 3) return "nn" + std::to_string(sizes[1]);
      return "nn_velocity";
    }
    case ModelKind::GeneralNn: return "general_nn";
  }
  return "model";
}

void reject_unknown(const json& j, const std::set<std::string>& known) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
}

json layout_json(const ParamLayout& layout) {
  json slots = json::array();
  for (const auto& s : layout.slots()) slots.push_back({{"name", s.name}, {"offset", s.offset}, {"size", s.size}});
  return slots;
}

json params_json(const ModelParams& p) {
  json j = json::object();
  j["v_max"] = p.v_max;
  if (p.car_length) j["L"] = *p.car_length;
  if (!p.theta.empty()) j["theta"] = p.theta;
  return j;
}

ModelSpec model_from_json(const json& j) {
  const auto name = get_or<std::string>(j, "model", "lwr_linear");
  try {
    return model_from_name(name, hidden_of(j));
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Trajectory parse_trajectory(const std::string& text, const std::string& origin) {
  std::vector<double> times;
  std::vector<double> positions;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  bool header_seen = false;

  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto cells = split_commas(line);
    if (!header_seen) {
      if (cells.size() < 2 || cells[0] != "t")
        throw DataError(at_line(origin, line_no) + "expected header 't,x1,...,xN'");
      columns = cells.size();
      header_seen = true;
      continue;
    }
    if (cells.size() != columns)
      throw DataError(at_line(origin, line_no) + "ragged row: " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(columns));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = cells[c];
      if (cell.empty()) throw DataError(at_line(origin, line_no) + "ragged row: empty cell in column " + std::to_string(c + 1));
      double value = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(value))
        throw DataError(at_line(origin, line_no) + "cannot parse number '" + std::string(cell) + "'");
      if (c == 0) {
        if (!times.empty() && !(value > times.back()))
          throw DataError(at_line(origin, line_no) + "time " + std::string(cell) + " is not after the previous row");
        times.push_back(value);
      } else {
        positions.push_back(value);
      }
    }
  }
  if (!header_seen) throw DataError(origin + ": missing header");
  if (times.empty()) throw DataError(origin + ": no data rows");
  return Trajectory(std::move(times), columns - 1, std::move(positions));
}

Trajectory read_trajectory(const fs::path& path) {
  return parse_trajectory(read_file(path, false), path.string());
}

std::string format_trajectory(const Trajectory& t) {
  if (t.n_vehicles() == 0 || t.n_times() == 0) throw DataError("refusing to write an empty trajectory");
  std::string out = "t";
  for (std::size_t i = 0; i < t.n_vehicles(); ++i) out += ",x" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t k = 0; k < t.n_times(); ++k) {
    out += format_number(t.times()[k]);
    for (double x : t.row(k)) {
      out += ',';
      out += format_number(x);
    }
    out += '\n';
  }
  return out;
}

void write_trajectory(const Trajectory& t, const fs::path& path, bool overwrite) {
  const auto text = format_trajectory(t);
  if (!overwrite && fs::exists(path)) throw DataError(path.string() + " exists and overwrite is off");
  write_file(path, text);
}

std::vector<double> uniform_grid(double t0, double duration, double dt) {
  if (!(dt > 0.0) || !(duration >= 0.0)) throw ConfigError("grid needs dt > 0 and duration >= 0");
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = t0 + static_cast<double>(k) * dt;
  return grid;
}

std::pair<double, double> headway_range(const Trajectory& t) {
  if (t.n_vehicles() < 2) throw DataError("headways need at least two vehicles");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < t.n_times(); ++k)
    for (std::size_t i = 0; i + 1 < t.n_vehicles(); ++i) {
      const double h = t.at(k, i + 1) - t.at(k, i);
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
  return {lo, hi};
}

Trajectory generate_synthetic(const ModelSpec& model, std::span<const double> u_true, std::span<const double> z0,
                              std::span<const double> grid, double noise_std, std::uint64_t seed,
                              std::size_t substeps) {
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be non-negative");
  auto clean = integrate_euler(model, u_true, z0, grid, substeps);
  if (noise_std == 0.0) return clean;

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6e6f6973u};
  Rng rng(seq);
  std::normal_distribution<double> noise(0.0, noise_std);
  std::vector<double> noisy = clean.positions();
  for (auto& x : noisy) x += noise(rng);
  return Trajectory(clean.times(), clean.n_vehicles(), std::move(noisy));
}

ModelSpec model_from_name(const std::string& name, const std::vector<std::size_t>& hidden) {
  if (name == "lin" || name == "lwr_linear") return ModelSpec::lwr_linear();
  if (name == "log" || name == "lwr_log") return ModelSpec::lwr_log();
  if (name == "nn_velocity") return ModelSpec::nn_velocity(NetworkSpec::scalar(hidden));
  if (name == "general_nn") return ModelSpec::general_nn(NetworkSpec::scalar(hidden));
  if (name.size() > 2 && name.rfind("nn", 0) == 0) {
    std::size_t width = 0;
    const auto res = std::from_chars(name.data() + 2, name.data() + name.size(), width);
    if (res.ec == std::errc() && res.ptr == name.data() + name.size() && width > 0)
      return ModelSpec::nn_velocity(NetworkSpec::scalar({width}));
  }
  throw ConfigError("unknown model '" + name + "'");
}

InitBox default_init_box(const ModelSpec& model) {
  std::vector<std::pair<double, double>> intervals;
  for (const auto& slot : model.layout().slots()) {
    if (slot.name == "v_max") intervals.emplace_back(20.0, 40.0);
    else if (slot.name == "L") intervals.emplace_back(0.0, 10.0);
    else intervals.emplace_back(-0.5, 0.5);
  }
  return InitBox::per_slot(model.layout(), intervals);
}

void RunConfig::validate() const {
  cbo.validate();
  const std::size_t d = model.layout().dimension();
  cost.validate(d);
  if (init_box.dimension() != d)
    throw ConfigError("initialization box has dimension " + std::to_string(init_box.dimension()) + ", model expects " +
                      std::to_string(d));
  if (substeps == 0) throw ConfigError("substeps must be at least 1");
  if (force) {
    if (!(force->max > force->min) || force->samples < 2)
      throw ConfigError("force curve needs max > min and at least 2 samples");
  }
}

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"model", "hidden", "label", "data", "out", "seed", "n_agents", "batch_size", "lambda", "sigma",
                     "alpha", "dt", "max_steps", "sigma_decay", "nonfinite_penalty", "threads", "substeps", "delta",
                     "u_ref", "blowup_penalty", "init_v_max", "init_L", "init_theta", "force_min", "force_max",
                     "force_samples", "layout"});

  RunConfig rc;
  rc.model = model_from_json(j);
  rc.model_label = get_or<std::string>(j, "label", default_label(rc.model));
  rc.data = resolve(get_or<std::string>(j, "data", ""), base_dir);
  rc.out = resolve(get_or<std::string>(j, "out", "results"), base_dir);

  auto& c = rc.cbo;
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.n_agents = get_or<std::size_t>(j, "n_agents", c.n_agents);
  c.batch_size = get_or<std::size_t>(j, "batch_size", c.batch_size);
  c.lambda = get_or<double>(j, "lambda", c.lambda);
  c.sigma = get_or<double>(j, "sigma", c.sigma);
  c.alpha = get_or<double>(j, "alpha", c.alpha);
  c.dt = get_or<double>(j, "dt", c.dt);
  c.max_steps = get_or<std::size_t>(j, "max_steps", c.max_steps);
  c.sigma_decay = get_or<double>(j, "sigma_decay", c.sigma_decay);
  c.nonfinite_penalty = get_or<double>(j, "nonfinite_penalty", c.nonfinite_penalty);
  c.threads = get_or<std::size_t>(j, "threads", c.threads);

  rc.substeps = get_or<std::size_t>(j, "substeps", rc.substeps);
  rc.cost.delta = get_or<double>(j, "delta", rc.cost.delta);
  rc.cost.blowup_penalty = get_or<double>(j, "blowup_penalty", rc.cost.blowup_penalty);
  if (j.contains("u_ref") && !j.at("u_ref").is_null()) rc.cost.u_ref = get_or<std::vector<double>>(j, "u_ref", {});

  const auto& layout = rc.model.layout();
  std::vector<double> lo;
  std::vector<double> hi;
  for (const auto& slot : layout.slots()) {
    if (slot.name == "v_max" || slot.name == "L") {
      const auto [a, b] = interval(j, slot.name == "v_max" ? "init_v_max" : "init_L",
                                   slot.name == "v_max" ? std::pair{20.0, 40.0} : std::pair{0.0, 10.0});
      lo.push_back(a);
      hi.push_back(b);
      continue;
    }
    if (!j.contains("init_theta")) {
      lo.insert(lo.end(), slot.size, -0.5);
      hi.insert(hi.end(), slot.size, 0.5);
      continue;
    }
    const auto& box = j.at("init_theta");
    if (box.is_array() && box.size() == 2 && box[0].is_number() && box[1].is_number()) {
      lo.insert(lo.end(), slot.size, box[0].get<double>());
      hi.insert(hi.end(), slot.size, box[1].get<double>());
    } else if (box.is_array() && std::all_of(box.begin(), box.end(), [](const json& e) {
                 return e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number();
               })) {
      if (box.size() != slot.size)
        throw ConfigError("init_theta lists " + std::to_string(box.size()) + " intervals, the network has " +
                          std::to_string(slot.size) + " weights");
      for (const auto& e : box) {
        lo.push_back(e[0].get<double>());
        hi.push_back(e[1].get<double>());
      }
    } else {
      throw ConfigError("init_theta must be a [lower, upper] pair or a list of such pairs");
    }
  }
  rc.init_box = InitBox(std::move(lo), std::move(hi));

  if (j.contains("force_min") || j.contains("force_max")) {
    ForceRange fr;
    fr.min = get_or<double>(j, "force_min", 0.0);
    fr.max = get_or<double>(j, "force_max", 0.0);
    fr.samples = get_or<std::size_t>(j, "force_samples", 200);
    rc.force = fr;
  }

  if (j.contains("layout")) {
    ParamLayout given;
    std::vector<std::pair<std::string, std::size_t>> slots;
    for (const auto& s : j.at("layout")) slots.emplace_back(s.at("name").get<std::string>(), s.at("size").get<std::size_t>());
    try {
      given = ParamLayout::from_sizes(slots);
    } catch (const DimensionError& e) {
      throw ConfigError(std::string("bad layout: ") + e.what());
    }
    if (!(given == layout)) throw ConfigError("layout in config does not match the model");
  }

  rc.validate();
  return rc;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_file(path, true), path.parent_path());
}

std::string dump_run_config(const RunConfig& rc) {
  const auto& c = rc.cbo;
  json j;
  j["model"] = to_string(rc.model.kind());
  if (!rc.model.is_lwr()) {
    const auto& sizes = rc.model.network().layer_sizes();
    j["hidden"] = std::vector<std::size_t>(sizes.begin() + 1, sizes.end() - 1);
  }
  j["label"] = rc.model_label;
  j["data"] = rc.data.string();
  j["out"] = rc.out.string();
  j["seed"] = c.seed;
  j["n_agents"] = c.n_agents;
  j["batch_size"] = c.batch_size;
  j["lambda"] = c.lambda;
  j["sigma"] = c.sigma;
  j["alpha"] = c.alpha;
  j["dt"] = c.dt;
  j["max_steps"] = c.max_steps;
  j["sigma_decay"] = c.sigma_decay;
  j["nonfinite_penalty"] = c.nonfinite_penalty;
  j["threads"] = c.threads;
  j["substeps"] = rc.substeps;
  j["delta"] = rc.cost.delta;
  j["blowup_penalty"] = rc.cost.blowup_penalty;
  if (rc.cost.u_ref) j["u_ref"] = *rc.cost.u_ref;
  for (const auto& slot : rc.model.layout().slots()) {
    const auto& lo = rc.init_box.lower();
    const auto& hi = rc.init_box.upper();
    if (slot.name == "v_max") j["init_v_max"] = {lo[slot.offset], hi[slot.offset]};
    else if (slot.name == "L") j["init_L"] = {lo[slot.offset], hi[slot.offset]};
    else {
      json box = json::array();
      for (std::size_t i = slot.offset; i < slot.offset + slot.size; ++i) box.push_back({lo[i], hi[i]});
      j["init_theta"] = box;
    }
  }
  if (rc.force) {
    j["force_min"] = rc.force->min;
    j["force_max"] = rc.force->max;
    j["force_samples"] = rc.force->samples;
  }
  j["layout"] = layout_json(rc.model.layout());
  return j.dump(2) + "\n";
}

GenerateConfig parse_generate_config(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"model", "hidden", "label", "v_max", "L", "theta", "n_cars", "spacing", "duration", "sample_dt",
                     "substeps", "noise_std", "seed", "output", "overwrite"});
  GenerateConfig g;
  g.model = model_from_json(j);
  g.model_label = get_or<std::string>(j, "label", default_label(g.model));
  g.truth.v_max = get_or<double>(j, "v_max", 30.0);
  if (g.model.layout().has("L")) g.truth.car_length = get_or<double>(j, "L", 5.0);
  if (const auto* slot = g.model.layout().find("theta")) {
    g.truth.theta = get_or<std::vector<double>>(j, "theta", std::vector<double>(slot->size, 0.0));
    if (g.truth.theta.size() != slot->size)
      throw ConfigError("theta has " + std::to_string(g.truth.theta.size()) + " entries, the network has " +
                        std::to_string(slot->size) + " weights");
  }
  g.n_cars = get_or<std::size_t>(j, "n_cars", g.n_cars);
  g.spacing = get_or<double>(j, "spacing", g.spacing);
  g.duration = get_or<double>(j, "duration", g.duration);
  g.sample_dt = get_or<double>(j, "sample_dt", g.sample_dt);
  g.substeps = get_or<std::size_t>(j, "substeps", g.substeps);
  g.noise_std = get_or<double>(j, "noise_std", g.noise_std);
  g.seed = get_or<std::uint64_t>(j, "seed", g.seed);
  g.output = resolve(get_or<std::string>(j, "output", "data.csv"), base_dir);
  g.overwrite = get_or<bool>(j, "overwrite", g.overwrite);
  if (g.n_cars < 2) throw ConfigError("n_cars must be at least 2");
  if (!(g.spacing > 0.0)) throw ConfigError("spacing must be positive");
  if (g.substeps == 0) throw ConfigError("substeps must be at least 1");
  if (!(g.noise_std >= 0.0)) throw ConfigError("noise_std must be non-negative");
  return g;
}

GenerateConfig load_generate_config(const fs::path& path) {
  return parse_generate_config(read_file(path, true), path.parent_path());
}

Trajectory generate(const GenerateConfig& g) {
  const auto grid = uniform_grid(0.0, g.duration, g.sample_dt);
  std::vector<double> z0(g.n_cars);
  for (std::size_t i = 0; i < g.n_cars; ++i) z0[i] = static_cast<double>(i) * g.spacing;
  const auto u = pack(g.model.layout(), g.truth);
  return generate_synthetic(g.model, u, z0, grid, g.noise_std, g.seed, g.substeps);
}

std::vector<CurvePoint> force_curve(const ModelSpec& model, std::span<const double> u, const ForceRange& range) {
  if (range.samples < 2 || !(range.max > range.min))
    throw ConfigError("force curve needs max > min and at least 2 samples");
  const auto params = unpack(model.layout(), u);
  std::vector<CurvePoint> curve(range.samples);
  const double step = (range.max - range.min) / static_cast<double>(range.samples - 1);
  for (std::size_t s = 0; s < range.samples; ++s) {
    const double h = s + 1 == range.samples ? range.max : range.min + static_cast<double>(s) * step;
    curve[s] = {h, model.interaction(params, h)};
  }
  return curve;
}

std::string format_trace(const std::vector<StepRecord>& trace) {
  std::string out = "step,batch_min,batch_mean,best_cost,nonfinite\n";
  for (const auto& r : trace) {
    out += std::to_string(r.step) + ',' + format_number(r.batch_min) + ',' + format_number(r.batch_mean) + ',' +
           format_number(r.best_cost) + ',' + std::to_string(r.nonfinite) + '\n';
  }
  return out;
}

std::string format_force_curve(const std::vector<CurvePoint>& curve) {
  std::string out = "headway,velocity\n";
  for (const auto& p : curve) out += format_number(p.headway) + ',' + format_number(p.velocity) + '\n';
  return out;
}

StoredResult read_result(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path, false));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  try {
    StoredResult r;
    const auto kind = parse_model_kind(j.at("model").get<std::string>());
    const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    switch (kind) {
      case ModelKind::LwrLinear: r.model = ModelSpec::lwr_linear(); break;
      case ModelKind::LwrLog: r.model = ModelSpec::lwr_log(); break;
      case ModelKind::NnVelocity: r.model = ModelSpec::nn_velocity(NetworkSpec(sizes)); break;
      case ModelKind::GeneralNn: r.model = ModelSpec::general_nn(NetworkSpec(sizes)); break;
    }
    r.model_label = j.at("label").get<std::string>();
    r.best = j.at("best_u").get<std::vector<double>>();
    r.final_cost = j.at("final_cost").get<double>();
    r.initial_mean_cost = j.at("initial_mean_cost").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (r.best.size() != r.model.layout().dimension()) throw DataError(path.string() + ": best_u does not fit the model");
    return r;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed result: " + e.what());
  } catch (const ConfigError& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_results(const RunConfig& config, const Trajectory& data, const CalibrationResult& result) {
  const auto& model = config.model;
  json j;
  j["model"] = to_string(model.kind());
  j["label"] = config.model_label;
  j["layer_sizes"] = model.is_lwr() ? std::vector<std::size_t>{} : model.network().layer_sizes();
  j["layout"] = layout_json(model.layout());
  j["best_u"] = result.best;
  j["params"] = params_json(unpack(model.layout(), result.best));
  j["final_cost"] = result.best_cost;
  j["initial_mean_cost"] = result.initial_mean_cost;
  j["final_consensus"] = result.final_consensus;
  j["seed"] = config.cbo.seed;
  j["steps"] = result.trace.empty() ? 0 : result.trace.size() - 1;
  j["evaluations"] = result.evaluations;

  fs::create_directories(config.out);
  write_file(config.out / "result.json", j.dump(2) + "\n");
  write_file(config.out / "trace.csv", format_trace(result.trace));
  write_file(config.out / "config.json", dump_run_config(config));

  ForceRange range;
  if (config.force) {
    range = *config.force;
  } else if (data.n_vehicles() >= 2) {
    const auto [lo, hi] = headway_range(data);
    range = {lo, hi > lo ? hi : lo + 1.0, 200};
  }
  if (range.samples >= 2) write_file(config.out / "force_curve.csv", format_force_curve(force_curve(model, result.best, range)));

  const auto sim = simulate(model, result.best, data.row(0), data.times(), config.substeps);
  write_file(config.out / "simulated.csv", format_trajectory(sim.trajectory));
}

}  // namespace cbocal
