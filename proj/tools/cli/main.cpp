#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "vjm/error.hpp"

namespace {

using namespace vjm;
using namespace vjm::cli;

int run(int argc, char** argv) {
  CLI::App app{"Stiffness analysis of a compliant parallelogram linkage"};
  app.require_subcommand(1);

  std::string config_path;
  double q = 0.0;
  bool numeric = false;

  auto* stiffmat = app.add_subcommand("stiffmat", "Print the unloaded Cartesian stiffness matrix");
  stiffmat->add_option("--config", config_path, "Model configuration (JSON)")->required();
  stiffmat->add_option("--q", q, "Bar angle [rad]");
  stiffmat->add_flag("--numeric", numeric, "Use the equilibrium/tangent-system route instead of the closed form");

  std::vector<std::string> dir_tokens;
  double max_disp = 0.0;
  int steps = 50;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Displacement-controlled force-deflection sweep");
  sweep->add_option("--config", config_path, "Model configuration (JSON)")->required();
  sweep->add_option("--dir", dir_tokens, "x|y|z|rx|ry|rz (optionally negated) or six numbers")
      ->required()
      ->expected(1, 6)
      ->allow_extra_args(false);
  sweep->add_option("--max", max_disp, "Sweep length along the direction [mm or rad]")->required();
  sweep->add_option("--steps", steps, "Number of continuation steps")->check(CLI::Range(2, 1000000));
  sweep->add_option("--out", out_path, "CSV output file")->required();

  std::vector<std::string> offset_tokens;
  auto* equilibrium = app.add_subcommand("equilibrium", "Solve the loaded equilibrium for an end-point offset");
  equilibrium->add_option("--config", config_path, "Model configuration (JSON)")->required();
  equilibrium->add_option("--offset", offset_tokens, "Six offset components from the unloaded pose")
      ->required()
      ->expected(1, 6)
      ->allow_extra_args(false);

  auto* reduce = app.add_subcommand("reduce", "Pseudo-rigid reduction of the unloaded stiffness (JSON)");
  reduce->add_option("--config", config_path, "Model configuration (JSON)")->required();
  reduce->add_option("--q", q, "Bar angle [rad]");
  reduce->add_flag("--numeric", numeric, "Use the equilibrium/tangent-system route instead of the closed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json j{{"error", "usage"}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 2;
  }

  const StiffnessPath path = numeric ? StiffnessPath::Numeric : StiffnessPath::Analytic;

  if (*stiffmat) {
    print_stiffness(unloaded_stiffness(load_config(config_path), q, path), std::cout);
  } else if (*sweep) {
    const ParallelogramModel model = load_config(config_path);
    const Vector6 dir = parse_direction(dir_tokens);
    const auto records = force_deflection_sweep(model, dir, max_disp, steps);
    write_atomically(out_path, sweep_csv(records));
    print_sweep_summary(records, std::cout);
  } else if (*equilibrium) {
    const ParallelogramModel model = load_config(config_path);
    std::cout << equilibrium_report(model, parse_vector6(offset_tokens, "offset")).dump(2) << '\n';
  } else if (*reduce) {
    std::cout << reduce_report(load_config(config_path), q, path).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << vjm::cli::error_json(e).dump() << '\n';
    return 1;
  }
}
