#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "cbocal/cbocal.hpp"

using namespace cbocal;

namespace {

const ParamVector kLin{30.0, 5.0};
const std::vector<double> kZ0{0.0, 20.0, 40.0, 60.0, 80.0};

ParamVector random_theta(const NetworkSpec& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-0.5, 0.5);
  ParamVector theta(net.weight_count());
  for (auto& x : theta) x = w(rng);
  return theta;
}

Trajectory five_car_data() {
  return generate_synthetic(ModelSpec::lwr_linear(), kLin, kZ0, uniform_grid(0.0, 10.0, 0.05), 0.0, 0, 100);
}

void BM_ForwardScalar(benchmark::State& state) {
  const auto net = NetworkSpec::scalar({static_cast<std::size_t>(state.range(0))});
  const auto theta = random_theta(net, 1);
  double x = 20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_scalar(net, theta, x));
    x += 1e-9;
  }
}
BENCHMARK(BM_ForwardScalar)->Arg(2)->Arg(4)->Arg(10);

void BM_IntegrateLwr(benchmark::State& state) {
  const auto grid = uniform_grid(0.0, 10.0, 0.05);
  const auto substeps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_euler(ModelSpec::lwr_linear(), kLin, kZ0, grid, substeps));
}
BENCHMARK(BM_IntegrateLwr)->Arg(1)->Arg(100);

void BM_EvaluateNn4(benchmark::State& state) {
  const auto model = ModelSpec::nn_velocity(NetworkSpec::scalar({4}));
  CalibrationProblem problem{model, five_car_data(), {}, default_init_box(model), 1};
  ParamVector u{30.0};
  const auto theta = random_theta(model.network(), 2);
  u.insert(u.end(), theta.begin(), theta.end());
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(problem, u));
}
BENCHMARK(BM_EvaluateNn4);

void BM_ConsensusPoint(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<ParamVector> agents(n, ParamVector(14));
  std::vector<double> costs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : agents[i]) x = g(rng);
    costs[i] = std::abs(g(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(consensus_point(agents, costs, 30.0));
}
BENCHMARK(BM_ConsensusPoint)->Arg(50)->Arg(100);

void BM_CalibrateLin(benchmark::State& state) {
  const auto model = ModelSpec::lwr_linear();
  CalibrationProblem problem{model, five_car_data(), {}, default_init_box(model), 1};
  CboConfig config;
  config.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run(problem, config).best_cost);
}
BENCHMARK(BM_CalibrateLin)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
