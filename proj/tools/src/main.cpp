#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lhvlab_cli/run.hpp"

int main(int argc, char** argv) {
  using namespace lhvlab::cli;

  CLI::App app{"lhvlab: Bell locality and EPR steering decisions for finite scenarios"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the task described by a scene file");
  std::string scene_path;
  std::optional<std::string> out_path;
  ParamOverrides o;
  run->add_option("scene", scene_path, "Scene JSON file")->required();
  run->add_option("--out", out_path, "Write the report here instead of stdout");
  run->add_option("--threads", o.threads, "Worker threads for the steering solver")->check(CLI::PositiveNumber);
  run->add_option("--dist-tol", o.dist_tol, "Unsteerable when the LHS distance is at most this")
      ->check(CLI::PositiveNumber);
  run->add_option("--gap-tol", o.gap_tol, "Stop when the Frank-Wolfe gap is at most this")
      ->check(CLI::PositiveNumber);
  run->add_option("--feas-tol", o.feas_tol, "Local when the LP infeasibility is at most this")
      ->check(CLI::PositiveNumber);
  run->add_option("--max-iters", o.max_iters, "Iteration cap of the steering solver")->check(CLI::PositiveNumber);
  run->add_option("--seed", o.seed, "Seed echoed in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kInput;
  }
  return run_file(scene_path, out_path, o, std::cout, std::cerr);
}
