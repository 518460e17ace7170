#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace cbocal::cli;

  CLI::App app{"Consensus-based calibration of follow-the-leader traffic models"};
  app.require_subcommand(1);

  CalibrateOptions calibrate;
  std::string calibrate_out;
  std::uint64_t calibrate_seed = 0;
  auto* cal = app.add_subcommand("calibrate", "Fit one model to one dataset");
  cal->add_option("--config", calibrate.config, "Run config (JSON)")->required();
  auto* cal_seed = cal->add_option("--seed", calibrate_seed, "Override the config seed");
  auto* cal_out = cal->add_option("--out", calibrate_out, "Override the results directory");

  ExperimentOptions experiment;
  std::string experiment_base;
  std::uint64_t experiment_seed = 0;
  auto* exp = app.add_subcommand("experiment", "Calibrate every model on every dataset and tabulate");
  exp->add_option("--models", experiment.models, "Models: lin, log, nn<k>, or config paths")
      ->required()
      ->delimiter(',');
  exp->add_option("--data", experiment.data, "Dataset paths or glob patterns")->required();
  exp->add_option("--out", experiment.out, "Output directory")->required();
  auto* exp_base = exp->add_option("--config", experiment_base, "Base run config for optimizer settings");
  auto* exp_seed = exp->add_option("--seed", experiment_seed, "Seed for every cell");

  ForceCurveOptions force;
  std::string force_out;
  auto* fc = app.add_subcommand("force-curve", "Tabulate a calibrated model's velocity against headway");
  fc->add_option("--result", force.result, "result.json from a calibration")->required();
  fc->add_option("--min", force.min, "Smallest headway (m)")->required();
  fc->add_option("--max", force.max, "Largest headway (m)")->required();
  fc->add_option("--samples", force.samples, "Number of headway samples")->required();
  auto* fc_out = fc->add_option("--out", force_out, "Write CSV here instead of stdout");

  GenerateOptions generate;
  std::string generate_out;
  std::uint64_t generate_seed = 0;
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset from known parameters");
  gen->add_option("--config", generate.config, "Generation config (JSON)")->required();
  auto* gen_seed = gen->add_option("--seed", generate_seed, "Override the noise seed");
  auto* gen_out = gen->add_option("--out", generate_out, "Override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (cal->parsed()) {
    if (*cal_seed) calibrate.seed = calibrate_seed;
    if (*cal_out) calibrate.out = calibrate_out;
    return cmd_calibrate(calibrate, std::cout);
  }
  if (exp->parsed()) {
    if (*exp_base) experiment.base_config = experiment_base;
    if (*exp_seed) experiment.seed = experiment_seed;
    return cmd_experiment(experiment, std::cout);
  }
  if (fc->parsed()) {
    if (*fc_out) force.out = force_out;
    return cmd_force_curve(force, std::cout);
  }
  if (gen->parsed()) {
    if (*gen_seed) generate.seed = generate_seed;
    if (*gen_out) generate.out = generate_out;
    return cmd_generate(generate, std::cout);
  }
  return kUsage;
}
