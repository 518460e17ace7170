#include "cbocal/cbo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "cbocal/errors.hpp"

namespace cbocal {

namespace {

constexpr std::uint32_t kBatchStreamTag = 0x62617463;  // "batc"
constexpr std::uint32_t kNoiseStreamTag = 0x6e6f6973;  // "nois"

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

// Independent stream per (seed, step, agent) so the noise an agent receives
// does not depend on evaluation order or thread count.
Rng noise_stream(std::uint64_t seed, std::size_t step, std::size_t agent) {
  std::seed_seq seq{lo32(seed), hi32(seed), kNoiseStreamTag, lo32(step), hi32(step), lo32(agent), hi32(agent)};
  return Rng(seq);
}

Rng batch_stream(std::uint64_t seed) {
  std::seed_seq seq{lo32(seed), hi32(seed), kBatchStreamTag};
  return Rng(seq);
}

}  // namespace

void CboConfig::validate() const {
  if (n_agents == 0) throw ConfigError("n_agents must be at least 1");
  if (batch_size == 0 || batch_size > n_agents) throw ConfigError("batch_size must lie in [1, n_agents]");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be non-negative");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(sigma_decay > 0.0) || sigma_decay > 1.0) throw ConfigError("sigma_decay must lie in (0, 1]");
  if (!(nonfinite_penalty > 0.0) || !std::isfinite(nonfinite_penalty))
    throw ConfigError("nonfinite_penalty must be positive and finite");
  if (threads == 0) throw ConfigError("threads must be at least 1");
}

ParamVector consensus_point(std::span<const ParamVector> agents, std::span<const double> costs, double alpha) {
  if (agents.empty()) throw DimensionError("consensus point of an empty ensemble");
  if (agents.size() != costs.size()) throw DimensionError("agents and costs differ in length");
  const std::size_t d = agents.front().size();
  for (const auto& a : agents)
    if (a.size() != d) throw DimensionError("agents differ in dimension");

  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (costs[a] != costs[b]) return costs[a] < costs[b];
    return agents[a] < agents[b];
  });

  const double j_min = costs[order.front()];
  std::vector<double> weights(order.size());
  double total = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    weights[r] = std::exp(-alpha * (costs[order[r]] - j_min));
    total += weights[r];
  }

  ParamVector v(d, 0.0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const double p = weights[r] / total;
    if (p == 0.0) continue;
    const auto& a = agents[order[r]];
    for (std::size_t c = 0; c < d; ++c) v[c] += p * a[c];
  }

  // round-off can push the weighted sum a few ulps outside the hull
  for (std::size_t c = 0; c < d; ++c) {
    double lo = agents.front()[c];
    double hi = lo;
    for (const auto& a : agents) {
      lo = std::min(lo, a[c]);
      hi = std::max(hi, a[c]);
    }
    v[c] = std::clamp(v[c], lo, hi);
  }
  return v;
}

CboState make_state(const InitBox& box, const CboConfig& config) {
  config.validate();
  CboState state;
  state.rng = batch_stream(config.seed);
  state.agents = sample_initial(box, config.n_agents, state.rng);
  return state;
}

std::vector<double> evaluate_agents(CboState& state, std::span<const std::size_t> indices,
                                    const Objective& objective, const CboConfig& config,
                                    std::size_t* nonfinite) {
  std::vector<double> costs(indices.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) costs[b] = objective(state.agents[indices[b]]);
  };

  const std::size_t workers = std::min(config.threads, indices.size());
  if (workers <= 1) {
    work(0, indices.size());
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (indices.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(indices.size(), begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          try {
            work(begin, end);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::size_t bad = 0;
  for (std::size_t b = 0; b < indices.size(); ++b) {
    if (!std::isfinite(costs[b])) {
      costs[b] = config.nonfinite_penalty;
      ++bad;
    }
    if (costs[b] < state.best_cost) {
      state.best_cost = costs[b];
      state.best = state.agents[indices[b]];
    }
  }
  if (nonfinite) *nonfinite = bad;
  return costs;
}

std::vector<std::size_t> draw_batch(CboState& state, const CboConfig& config) {
  const std::size_t n = state.agents.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t b = std::min(config.batch_size, n);
  for (std::size_t i = 0; i < b; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(state.rng)]);
  }
  idx.resize(b);
  return idx;
}

StepRecord cbo_step(CboState& state, std::span<const std::size_t> batch, const Objective& objective,
                    const CboConfig& config) {
  if (batch.empty()) throw DimensionError("empty batch");
  {
    std::vector<std::size_t> sorted(batch.begin(), batch.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DimensionError("batch indices must be distinct");
    if (sorted.back() >= state.agents.size()) throw DimensionError("batch index out of range");
  }

  StepRecord record;
  const auto costs = evaluate_agents(state, batch, objective, config, &record.nonfinite);

  std::vector<ParamVector> members;
  members.reserve(batch.size());
  for (auto i : batch) members.push_back(state.agents[i]);
  record.consensus = consensus_point(members, costs, config.alpha);

  const double sigma = config.sigma * std::pow(config.sigma_decay, static_cast<double>(state.step));
  const double drift = config.lambda * config.dt;
  const double diffusion = sigma * std::sqrt(config.dt);
  const auto& v = record.consensus;
  for (auto i : batch) {
    auto& u = state.agents[i];
    auto rng = noise_stream(config.seed, state.step, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t c = 0; c < u.size(); ++c) {
      const double gap = u[c] - v[c];
      const double xi = normal(rng);
      u[c] = u[c] - drift * gap + diffusion * gap * xi;
    }
  }
  ++state.step;

  record.step = state.step;
  record.batch_min = *std::min_element(costs.begin(), costs.end());
  record.batch_mean = std::accumulate(costs.begin(), costs.end(), 0.0) / static_cast<double>(costs.size());
  record.best_cost = state.best_cost;
  return record;
}

CalibrationResult minimize(const Objective& objective, const InitBox& box, const CboConfig& config) {
  auto state = make_state(box, config);
  CalibrationResult result;

  std::vector<std::size_t> everyone(state.agents.size());
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});
  StepRecord initial;
  const auto costs = evaluate_agents(state, everyone, objective, config, &initial.nonfinite);
  initial.step = 0;
  initial.batch_min = *std::min_element(costs.begin(), costs.end());
  initial.batch_mean = std::accumulate(costs.begin(), costs.end(), 0.0) / static_cast<double>(costs.size());
  initial.best_cost = state.best_cost;
  initial.consensus = consensus_point(state.agents, costs, config.alpha);
  result.initial_mean_cost = initial.batch_mean;
  result.evaluations = costs.size();
  result.trace.push_back(std::move(initial));

  for (std::size_t k = 0; k < config.max_steps; ++k) {
    const auto batch = draw_batch(state, config);
    result.trace.push_back(cbo_step(state, batch, objective, config));
    result.evaluations += batch.size();
  }

  result.best = state.best;
  result.best_cost = state.best_cost;
  result.final_consensus = result.trace.back().consensus;
  return result;
}

CalibrationResult run(const CalibrationProblem& problem, const CboConfig& config) {
  problem.validate();
  config.validate();
  return minimize([&problem](std::span<const double> u) { return evaluate(problem, u); }, problem.init_box,
                  config);
}

}  // namespace cbocal
