#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cbocal/cost.hpp"
#include "cbocal/data_io.hpp"
#include "cbocal/errors.hpp"

using namespace cbocal;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "cbocal_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string error_of(const std::string& text) {
  try {
    parse_trajectory(text, "f.csv");
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("trajectory file round trip") {
  const Trajectory t({0.0, 0.05, 0.1}, 2, {0.0, 20.0, 1.0 / 3.0, 21.5, 0.7071067811865476, 23.000000001});
  const auto path = scratch("round_trip.csv");
  write_trajectory(t, path);
  const auto back = read_trajectory(path);
  CHECK(back == t);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x1,x2");
}

TEST_CASE("formatted trajectories read back exactly") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> times{g(rng)};
    for (int k = 0; k < 10; ++k) times.push_back(times.back() + std::abs(g(rng)) + 1e-3);
    std::vector<double> pos(times.size() * 4);
    for (auto& x : pos) x = g(rng);
    const Trajectory t(times, 4, pos);
    CHECK(parse_trajectory(format_trajectory(t)) == t);
  }
}

TEST_CASE("trajectory format is fixed") {
  const Trajectory t({0.0, 0.5}, 2, {-1.25, 3.0, 2.0, 1e-7});
  CHECK(format_trajectory(t) == "t,x1,x2\n0,-1.25,3\n0.5,2,1e-07\n");
}

TEST_CASE("decreasing timestamps name the line") {
  const auto msg = error_of("t,x1\n0,1\n0.2,2\n0.1,3\n");
  CHECK(msg.find("f.csv:4") != std::string::npos);
}

TEST_CASE("blank cells and ragged rows are rejected") {
  CHECK(error_of("t,x1,x2\n0,1,\n").find("ragged") != std::string::npos);
  CHECK(error_of("t,x1,x2\n0,1\n").find("ragged") != std::string::npos);
  CHECK(error_of("t,x1,x2\n0,1,2,3\n").find("ragged") != std::string::npos);
  CHECK(error_of("t,x1\n0,abc\n").find("cannot parse") != std::string::npos);
  CHECK(error_of("time,x1\n0,1\n").find("header") != std::string::npos);
  CHECK(error_of("t,x1\n").find("no data") != std::string::npos);
  CHECK(error_of("").find("missing header") != std::string::npos);
  CHECK_THROWS_AS(read_trajectory(scratch("does_not_exist.csv")), DataError);
}

TEST_CASE("CRLF and blank lines are tolerated") {
  const auto t = parse_trajectory("t,x1,x2\r\n0,1,2\r\n\r\n1,3,4\r\n");
  CHECK(t.n_times() == 2);
  CHECK(t.at(1, 1) == 4.0);
}

TEST_CASE("write refuses empty trajectories and respects overwrite") {
  CHECK_THROWS_AS(write_trajectory(Trajectory{}, scratch("empty.csv")), DataError);
  const auto path = scratch("keep.csv");
  const Trajectory t({0.0}, 1, {1.0});
  write_trajectory(t, path, true);
  CHECK_THROWS_AS(write_trajectory(t, path, false), DataError);
  CHECK_NOTHROW(write_trajectory(t, path, true));
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(0.0, 10.0, 0.05);
  CHECK(g.size() == 201);
  CHECK(g.back() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(uniform_grid(2.0, 0.0, 0.1) == std::vector<double>{2.0});
}

TEST_CASE("synthetic LWR-linear data") {
  const auto grid = uniform_grid(0.0, 10.0, 0.05);
  const std::vector<double> z0{0.0, 20.0, 40.0, 60.0, 80.0};
  const auto m = ModelSpec::lwr_linear();
  const ParamVector truth{30.0, 5.0};
  const auto data = generate_synthetic(m, truth, z0, grid, 0.0, 0);
  CHECK(data.at(grid.size() - 1, 4) - data.at(0, 4) == doctest::Approx(300.0).epsilon(1e-12));

  CalibrationProblem p{m, data, {}, default_init_box(m), 100};
  CHECK(evaluate(p, truth) <= 1e-10);

  const auto a = generate_synthetic(m, truth, z0, grid, 0.2, 77);
  const auto b = generate_synthetic(m, truth, z0, grid, 0.2, 77);
  const auto c = generate_synthetic(m, truth, z0, grid, 0.2, 78);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK_FALSE(a == data);
}

TEST_CASE("synthetic generation refuses colliding ground truth") {
  const auto grid = uniform_grid(0.0, 10.0, 0.05);
  CHECK_THROWS_AS(generate_synthetic(ModelSpec::lwr_log(), std::vector<double>{30.0, 5.0}, std::vector<double>{0.0, 1e-7},
                                     grid, 0.0, 0),
                  NonPositiveHeadway);
}

TEST_CASE("model names") {
  CHECK(model_from_name("lin").kind() == ModelKind::LwrLinear);
  CHECK(model_from_name("lwr_log").kind() == ModelKind::LwrLog);
  CHECK(model_from_name("nn4").layout().dimension() == 14);
  CHECK(model_from_name("nn2").layout().dimension() == 8);
  CHECK(model_from_name("nn10").layout().dimension() == 32);
  CHECK(model_from_name("general_nn", {3}).layout().dimension() == 10);
  CHECK_THROWS_AS(model_from_name("nnx"), ConfigError);
  CHECK_THROWS_AS(model_from_name("idm"), ConfigError);
}

TEST_CASE("run config defaults") {
  const auto rc = parse_run_config(R"({"model": "nn4", "data": "d.csv"})", "/base");
  CHECK(rc.model_label == "nn4");
  CHECK(rc.data == fs::path("/base/d.csv"));
  CHECK(rc.cbo.n_agents == 100);
  CHECK(rc.cbo.batch_size == 50);
  CHECK(rc.cbo.lambda == 1.0);
  CHECK(rc.cbo.sigma == 1.0);
  CHECK(rc.cbo.alpha == 30.0);
  CHECK(rc.cbo.dt == 0.05);
  CHECK(rc.cbo.max_steps == 100);
  CHECK(rc.substeps == 1);
  CHECK(rc.cost.delta == 0.0);
  CHECK(rc.cost.blowup_penalty == 1e6);
  REQUIRE(rc.init_box.dimension() == 14);
  CHECK(rc.init_box.lower()[0] == 20.0);
  CHECK(rc.init_box.upper()[0] == 40.0);
  CHECK(rc.init_box.lower()[5] == -0.5);
  CHECK(rc.init_box.upper()[13] == 0.5);
}

TEST_CASE("run config survives a dump and re-parse") {
  const auto rc = parse_run_config(
      R"({"model": "lin", "data": "/d.csv", "seed": 7, "alpha": 50, "init_L": [1, 9], "delta": 0.5, "u_ref": [30, 5],
          "force_min": 5, "force_max": 50, "force_samples": 10})");
  const auto again = parse_run_config(dump_run_config(rc));
  CHECK(dump_run_config(again) == dump_run_config(rc));
  CHECK(again.cbo.seed == 7);
  CHECK(again.cbo.alpha == 50.0);
  CHECK(again.init_box.lower()[1] == 1.0);
  REQUIRE(again.cost.u_ref);
  CHECK(*again.cost.u_ref == ParamVector{30.0, 5.0});
  REQUIRE(again.force);
  CHECK(again.force->samples == 10);
}

TEST_CASE("run config validation") {
  // theta box with the wrong number of intervals
  CHECK_THROWS_AS(parse_run_config(R"({"model": "nn4", "init_theta": [[0, 1], [0, 1]]})"), ConfigError);
  CHECK_NOTHROW(parse_run_config(R"({"model": "nn2", "init_theta": [[0,1],[0,1],[0,1],[0,1],[0,1],[0,1],[0,1]]})"));
  CHECK_THROWS_AS(parse_run_config(R"({"model": "lin", "batch_size": 200})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"model": "lin", "alpah": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"model": "lin", "alpha": "high"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"model": "lin", "delta": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"model": "lin", "init_v_max": [40, 20]})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"model": "lin", "layout": [{"name": "v_max", "size": 1}]})"), ConfigError);
  CHECK_NOTHROW(parse_run_config(
      R"({"model": "lin", "layout": [{"name": "v_max", "size": 1}, {"name": "L", "size": 1}]})"));
  CHECK_THROWS_AS(load_run_config(scratch("missing.json")), ConfigError);
}

TEST_CASE("generate config") {
  const auto g = parse_generate_config(R"({"model": "lin", "v_max": 30, "L": 5, "output": "x.csv"})", "/tmp");
  CHECK(g.output == fs::path("/tmp/x.csv"));
  const auto data = generate(g);
  CHECK(data.n_vehicles() == 5);
  CHECK(data.n_times() == 201);
  CHECK(data.at(0, 4) == 80.0);
  CHECK_THROWS_AS(parse_generate_config(R"({"model": "nn4", "theta": [1, 2]})"), ConfigError);
  CHECK_THROWS_AS(parse_generate_config(R"({"model": "lin", "n_cars": 1})"), ConfigError);
}

TEST_CASE("force curve tabulation") {
  const auto lin = force_curve(ModelSpec::lwr_linear(), std::vector<double>{30.0, 5.0}, {5.0, 15.0, 3});
  REQUIRE(lin.size() == 3);
  CHECK(lin[0].velocity == doctest::Approx(0.0));
  CHECK(lin[1].headway == 10.0);
  CHECK(lin[1].velocity == doctest::Approx(15.0));
  CHECK(lin[2].headway == 15.0);

  const auto log = force_curve(ModelSpec::lwr_log(), std::vector<double>{30.0, 5.0}, {5.0, 15.0, 3});
  CHECK(log[0].velocity == 0.0);

  std::vector<double> u(14, 0.0);
  u[9] = 1.75;  // output bias of the [1,4,1] network sits after v_max and the 8 hidden weights
  const auto nn = force_curve(ModelSpec::nn_velocity(NetworkSpec::scalar({4})), u, {0.0, 100.0, 11});
  for (const auto& p : nn) CHECK(p.velocity == 1.75);

  CHECK_THROWS_AS(force_curve(ModelSpec::lwr_linear(), std::vector<double>{30.0, 5.0}, {5.0, 5.0, 3}), ConfigError);
}

TEST_CASE("headway range") {
  const Trajectory t({0.0, 1.0}, 3, {0.0, 10.0, 30.0, 1.0, 9.0, 40.0});
  const auto [lo, hi] = headway_range(t);
  CHECK(lo == 8.0);
  CHECK(hi == 31.0);
}
