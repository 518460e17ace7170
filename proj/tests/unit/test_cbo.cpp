#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cbocal/cbo.hpp"
#include "cbocal/errors.hpp"

using namespace cbocal;

namespace {

std::vector<ParamVector> random_agents(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 3.0);
  std::vector<ParamVector> a(n, ParamVector(d));
  for (auto& u : a)
    for (auto& x : u) x = g(rng);
  return a;
}

// Brute-force Gibbs mean without the minimum shift, in long double.
ParamVector gibbs_mean(const std::vector<ParamVector>& agents, const std::vector<double>& costs, double alpha) {
  const std::size_t d = agents[0].size();
  std::vector<long double> num(d, 0.0L);
  long double den = 0.0L;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const long double w = std::exp(-static_cast<long double>(alpha) * costs[i]);
    den += w;
    for (std::size_t c = 0; c < d; ++c) num[c] += w * agents[i][c];
  }
  ParamVector v(d);
  for (std::size_t c = 0; c < d; ++c) v[c] = static_cast<double>(num[c] / den);
  return v;
}

double sq_norm_to(std::span<const double> u, const ParamVector& target) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - target[i]) * (u[i] - target[i]);
  return s;
}

}  // namespace

TEST_CASE("consensus of a single agent is that agent") {
  const std::vector<ParamVector> a{{1.5, -2.0, 7.0}};
  for (double cost : {0.0, 1e9, -3.0}) CHECK(consensus_point(a, std::vector<double>{cost}, 30.0) == a[0]);
}

TEST_CASE("equal costs give the arithmetic mean") {
  const std::vector<ParamVector> a{{0.0, 1.0}, {2.0, 3.0}, {4.0, -4.0}, {6.0, 0.0}};
  const auto v = consensus_point(a, std::vector<double>(4, 12.5), 30.0);
  CHECK(v[0] == doctest::Approx(3.0));
  CHECK(v[1] == doctest::Approx(0.0));
}

TEST_CASE("large alpha concentrates on the best agent") {
  const std::vector<ParamVector> a{{1.0, 2.0}, {5.0, -5.0}, {-3.0, 8.0}};
  const std::vector<double> costs{0.0, 10.0, 10.0};
  const auto v = consensus_point(a, costs, 100.0);
  const auto oracle = gibbs_mean(std::vector<ParamVector>(a.begin(), a.end()), costs, 100.0);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(std::abs(v[c] - a[0][c]) < 1e-4);
    CHECK(v[c] == doctest::Approx(oracle[c]).epsilon(1e-12));
  }
}

TEST_CASE("consensus matches the unshifted Gibbs mean") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cost(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_agents(20, 5, rng);
    std::vector<double> costs(20);
    for (auto& c : costs) c = cost(rng);
    const auto v = consensus_point(a, costs, 3.0);
    const auto oracle = gibbs_mean(a, costs, 3.0);
    for (std::size_t c = 0; c < 5; ++c) CHECK(v[c] == doctest::Approx(oracle[c]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("consensus survives costs that would underflow unshifted") {
  const std::vector<ParamVector> a{{1.0}, {3.0}};
  const auto v = consensus_point(a, std::vector<double>{1e6, 1e6}, 30.0);
  CHECK(v[0] == doctest::Approx(2.0));
}

TEST_CASE("consensus input validation") {
  CHECK_THROWS_AS(consensus_point(std::vector<ParamVector>{}, std::vector<double>{}, 1.0), DimensionError);
  CHECK_THROWS_AS(consensus_point(std::vector<ParamVector>{{1.0}}, std::vector<double>{1.0, 2.0}, 1.0), DimensionError);
  CHECK_THROWS_AS(consensus_point(std::vector<ParamVector>{{1.0}, {1.0, 2.0}}, std::vector<double>{1.0, 2.0}, 1.0),
                  DimensionError);
}

TEST_CASE("sigma zero step moves lambda dt toward the consensus") {
  CboConfig config;
  config.n_agents = 6;
  config.batch_size = 6;
  config.sigma = 0.0;
  config.lambda = 1.0;
  config.dt = 0.05;
  CboState state = make_state(InitBox({-1.0, -1.0}, {1.0, 1.0}), config);
  const auto before = state.agents;
  const Objective f = [](std::span<const double> u) { return u[0] * u[0] + u[1] * u[1]; };
  const std::vector<std::size_t> batch{0, 1, 2, 3, 4, 5};
  const auto record = cbo_step(state, batch, f, config);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = before[i][c] + 0.05 * (record.consensus[c] - before[i][c]);
      CHECK(state.agents[i][c] == doctest::Approx(expected).epsilon(1e-14));
    }
  CHECK(state.step == 1);
  CHECK(record.step == 1);
}

TEST_CASE("a one-agent batch is a fixed point and others stay put") {
  CboConfig config;
  config.n_agents = 5;
  config.batch_size = 1;
  CboState state = make_state(InitBox({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}), config);
  const auto before = state.agents;
  const Objective f = [](std::span<const double> u) { return std::abs(u[0]); };
  const std::vector<std::size_t> batch{3};
  cbo_step(state, batch, f, config);
  CHECK(state.agents == before);
  CHECK(state.best == before[3]);
}

TEST_CASE("coordinates already at the consensus receive no noise") {
  CboConfig config;
  config.n_agents = 3;
  config.batch_size = 3;
  config.sigma = 5.0;
  CboState state = make_state(InitBox({0.0, 0.0}, {1.0, 1.0}), config);
  // all agents share coordinate 1, so consensus matches it exactly
  state.agents = {{0.1, 0.25}, {0.6, 0.25}, {0.9, 0.25}};
  const Objective f = [](std::span<const double> u) { return u[0]; };
  const std::vector<std::size_t> batch{0, 1, 2};
  cbo_step(state, batch, f, config);
  for (const auto& u : state.agents) CHECK(u[1] == 0.25);
  CHECK(state.agents[2][0] != 0.9);
}

TEST_CASE("batch agents only are updated") {
  CboConfig config;
  config.n_agents = 10;
  config.batch_size = 4;
  CboState state = make_state(InitBox(std::vector<double>(3, -1.0), std::vector<double>(3, 1.0)), config);
  const auto before = state.agents;
  const Objective f = [](std::span<const double> u) { return u[0] * u[0] + u[1] * u[1] + u[2] * u[2]; };
  const auto batch = draw_batch(state, config);
  REQUIRE(batch.size() == 4);
  cbo_step(state, batch, f, config);
  for (std::size_t i = 0; i < 10; ++i) {
    const bool in_batch = std::find(batch.begin(), batch.end(), i) != batch.end();
    if (!in_batch) CHECK(state.agents[i] == before[i]);
    else CHECK(state.agents[i] != before[i]);
  }
}

TEST_CASE("cbo_step rejects bad batches") {
  CboConfig config;
  config.n_agents = 4;
  config.batch_size = 2;
  CboState state = make_state(InitBox({0.0}, {1.0}), config);
  const Objective f = [](std::span<const double> u) { return u[0]; };
  CHECK_THROWS_AS(cbo_step(state, std::vector<std::size_t>{1, 1}, f, config), DimensionError);
  CHECK_THROWS_AS(cbo_step(state, std::vector<std::size_t>{0, 9}, f, config), DimensionError);
  CHECK_THROWS_AS(cbo_step(state, std::vector<std::size_t>{}, f, config), DimensionError);
}

TEST_CASE("non-finite objective values become the penalty") {
  CboConfig config;
  config.n_agents = 4;
  config.batch_size = 4;
  config.nonfinite_penalty = 123.0;
  CboState state = make_state(InitBox({0.0}, {1.0}), config);
  const Objective f = [](std::span<const double> u) { return u[0] > 0.5 ? std::nan("") : u[0]; };
  const auto record = cbo_step(state, std::vector<std::size_t>{0, 1, 2, 3}, f, config);
  CHECK(std::isfinite(record.batch_mean));
  CHECK(record.batch_mean <= 123.0);
  CHECK(std::isfinite(state.best_cost));
}

TEST_CASE("noiseless full-batch steps do not grow the ensemble") {
  CboConfig config;
  config.n_agents = 30;
  config.batch_size = 30;
  config.sigma = 0.0;
  config.dt = 0.5;
  CboState state = make_state(InitBox(std::vector<double>(4, -2.0), std::vector<double>(4, 2.0)), config);
  const Objective f = [](std::span<const double> u) { return std::cos(3.0 * u[0]) + u[1] * u[1] + std::abs(u[2] * u[3]); };
  std::vector<std::size_t> all(30);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto diameter = [&] {
    double m = 0.0;
    for (const auto& a : state.agents)
      for (const auto& b : state.agents) m = std::max(m, sq_norm_to(a, b));
    return std::sqrt(m);
  };
  double prev = diameter();
  for (int k = 0; k < 20; ++k) {
    cbo_step(state, all, f, config);
    const double now = diameter();
    CHECK(now <= prev * (1.0 + 1e-12));
    prev = now;
  }
}

TEST_CASE("max_steps zero returns the best initial agent") {
  CboConfig config;
  config.max_steps = 0;
  config.n_agents = 40;
  config.batch_size = 10;
  config.seed = 5;
  const InitBox box(std::vector<double>(3, -1.0), std::vector<double>(3, 1.0));
  const Objective f = [](std::span<const double> u) { return u[0] * u[0] + u[1] * u[1] + u[2] * u[2]; };
  const auto result = minimize(f, box, config);
  const auto state = make_state(box, config);
  double best = 1e300;
  for (const auto& a : state.agents) best = std::min(best, f(a));
  CHECK(result.best_cost == best);
  CHECK(result.trace.size() == 1);
  CHECK(result.evaluations == 40);
}

TEST_CASE("minimize is reproducible and thread-count independent") {
  CboConfig config;
  config.seed = 1234;
  config.max_steps = 30;
  const InitBox box(std::vector<double>(6, -1.0), std::vector<double>(6, 1.0));
  const Objective f = [](std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s += x * x - std::cos(4.0 * x);
    return s;
  };
  const auto a = minimize(f, box, config);
  const auto b = minimize(f, box, config);
  config.threads = 4;
  const auto c = minimize(f, box, config);
  for (const auto* r : {&b, &c}) {
    CHECK(r->best == a.best);
    CHECK(r->best_cost == a.best_cost);
    CHECK(r->final_consensus == a.final_consensus);
    REQUIRE(r->trace.size() == a.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      CHECK(r->trace[k].batch_mean == a.trace[k].batch_mean);
      CHECK(r->trace[k].consensus == a.trace[k].consensus);
    }
  }
  config.threads = 1;
  config.seed = 1235;
  CHECK(minimize(f, box, config).best != a.best);
}

TEST_CASE("best seen never increases along the trace") {
  CboConfig config;
  config.seed = 3;
  const InitBox box(std::vector<double>(4, -3.0), std::vector<double>(4, 3.0));
  const Objective f = [](std::span<const double> u) { return std::abs(u[0] - 1.0) + std::abs(u[3]); };
  const auto r = minimize(f, box, config);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    CHECK(r.trace[k].best_cost <= r.trace[k - 1].best_cost);
    CHECK(r.trace[k].best_cost <= r.trace[k].batch_min);
  }
  CHECK(r.best_cost == r.trace.back().best_cost);
  CHECK(f(r.best) == r.best_cost);
}

TEST_CASE("sphere benchmark in 14 dimensions") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> d(-0.8, 0.8);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ParamVector target(14);
    for (auto& x : target) x = d(rng);
    // the paper's dt = 0.05, sigma = 1 collapses the ensemble ~0.5 away from the optimum here
    CboConfig config;
    config.seed = seed;
    config.batch_size = 100;
    config.dt = 0.2;
    config.sigma = 2.0;
    config.alpha = 1000.0;
    const Objective f = [&](std::span<const double> u) { return sq_norm_to(u, target); };
    const auto r = minimize(f, InitBox(std::vector<double>(14, -1.0), std::vector<double>(14, 1.0)), config);
    if (std::sqrt(sq_norm_to(r.best, target)) <= 0.1) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("config validation") {
  CboConfig c;
  CHECK_NOTHROW(c.validate());
  c.batch_size = 101;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.sigma_decay = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.threads = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sigma decay shrinks exploration") {
  const InitBox box(std::vector<double>(2, -1.0), std::vector<double>(2, 1.0));
  const Objective f = [](std::span<const double> u) { return u[0] * u[0] + u[1] * u[1]; };
  CboConfig steady;
  steady.seed = 8;
  CboConfig decaying = steady;
  decaying.sigma_decay = 0.9;
  const auto a = minimize(f, box, steady);
  const auto b = minimize(f, box, decaying);
  CHECK(a.trace[1].consensus == b.trace[1].consensus);
  CHECK(a.final_consensus != b.final_consensus);
}
