// Command-line front end: run bundled or file-based scenarios, list the
// bundled ones, validate scenario files.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "uavtrust/errors.hpp"
#include "uavtrust/monte_carlo.hpp"
#include "uavtrust/outputs.hpp"
#include "uavtrust/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

int run(const std::string& scenario, std::optional<std::uint64_t> seed,
        std::optional<std::size_t> reps, const std::string& out_dir, int workers) {
  uavtrust::ScenarioSpec spec = uavtrust::resolve_scenario(scenario);
  if (seed) spec.base_seed = *seed;
  if (reps) spec.replications = *reps;
  spec.validate();

  const auto report = uavtrust::run_monte_carlo(spec, workers);

  std::vector<uavtrust::TelemetryRecord> telemetry;
  const auto representative = uavtrust::run_replication(
      spec, spec.base_seed, [&telemetry](const uavtrust::TelemetryRecord& r) { telemetry.push_back(r); });
  uavtrust::emit_outputs(out_dir, report, spec, representative, telemetry);

  fmt::print("scenario {}: {} replications from seed {}\n", spec.name, report.replications, report.base_seed);
  fmt::print("  detection_rate         {:.3f} ({}/{} attacked clusters)\n", report.detection_rate,
             report.detected_units, report.attacked_units);
  fmt::print("  false_alarm_rate       {:.3f} ({}/{} clean clusters)\n", report.false_alarm_rate,
             report.false_alarm_units, report.clean_units);
  fmt::print("  environmental_accuracy {:.3f} ({}/{} windy clean clusters)\n",
             report.environmental_accuracy, report.environmental_units, report.wind_units);
  std::size_t ambiguous = 0;
  for (const auto& o : report.outcomes) {
    for (const auto& c : o.clusters) {
      for (const auto& e : c.evaluations) ambiguous += e.verdict.ambiguous ? 1 : 0;
    }
  }
  if (ambiguous > 0) {
    fmt::print("  warning: {} interval(s) had separated scores no single UAV explains\n", ambiguous);
  }
  fmt::print("  outputs written to {}\n", out_dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV fleet trust monitoring simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out_dir = "out";
  int workers = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario's Monte Carlo replications");
  run_cmd->add_option("scenario", scenario, "Scenario file or bundled scenario name")->required();
  run_cmd->add_option("--seed", seed, "Base seed (replication r uses seed + r)");
  run_cmd->add_option("--reps", reps, "Number of replications")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--workers", workers, "Replication threads (0 = all available)")
      ->check(CLI::NonNegativeNumber);

  auto* list_cmd = app.add_subcommand("list-scenarios", "List bundled scenarios");

  std::string to_validate;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate_cmd->add_option("scenario", to_validate, "Scenario file or bundled scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run_cmd) return run(scenario, seed, reps, out_dir, workers);
    if (*list_cmd) {
      for (const auto& b : uavtrust::bundled_scenarios()) {
        const auto spec = uavtrust::parse_scenario(b.json);
        fmt::print("{:<16} {}\n", b.name, spec.description);
      }
      return kExitOk;
    }
    if (*validate_cmd) {
      const auto spec = uavtrust::resolve_scenario(to_validate);
      fmt::print("{}: ok ({} UAVs, {} cluster(s), {} attack(s))\n", spec.name, spec.sim.uav_count,
                 spec.resolved_clusters().size(), spec.attacks.size());
      return kExitOk;
    }
  } catch (const uavtrust::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const uavtrust::ScenarioParseError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}
