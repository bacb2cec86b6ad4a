#include "capcurv/harness/acceptance.hpp"
#include "capcurv/harness/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  using namespace capcurv::harness;

  CLI::App app{"capcurv: relative capacity of small concentric geodesic balls"};
  app.require_subcommand(1);

  int workers = 0;
  std::string out_dir;
  int resolution = -1;
  bool timing = false;
  app.add_option("--workers", workers, "Concurrent tasks (overrides the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--resolution", resolution, "Variational resolution level 0..5")
      ->check(CLI::Range(0, 5));
  app.add_flag("--timing", timing, "Write measured runtimes into the CSV");

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment file");
  run->add_option("config", config, "Experiment YAML file")->required();
  auto* scan = app.add_subcommand("scan-conjecture", "r^2 and r^4 scan on scalar-flat models");
  scan->add_option("config", config, "Experiment YAML file")->required();
  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run an acceptance suite (fast | full)");
  verify->add_option("suite", suite, "Suite name")->required();

  // flags are accepted before or after the subcommand
  for (auto* sub : {run, scan, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  RunOptions options;
  if (workers > 0) options.workers = workers;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (resolution >= 0) options.resolution_level = resolution;
  options.timing = timing;

  if (*run) return run_command(config, options, std::cout, std::cerr);
  if (*scan) return scan_conjecture_command(config, options, std::cout, std::cerr);
  return verify_command(suite, workers > 0 ? workers : 1, std::cout, std::cerr);
}
