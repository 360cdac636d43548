#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uavtrust/attack.hpp"
#include "uavtrust/detector.hpp"
#include "uavtrust/fleet.hpp"

namespace uavtrust {

struct PlanSpec {
  // Pattern kinds a replication draws from; ignored when explicit plans are
  // given.
  std::vector<TaskKind> kinds{TaskKind::kSurvey, TaskKind::kDelivery, TaskKind::kPatrol};
  PlanShape shape{};
  std::vector<MissionPlan> explicit_plans;  // indexed by UAV id
};

struct PositioningSpec {
  bool enabled = false;
  std::vector<DistanceStation> stations;
  double range_noise_std = 0.0;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  SimConfig sim;
  PlanSpec plans;
  WindField wind;
  std::vector<AttackSchedule> attacks;
  // Empty means consecutive groups of three.
  std::vector<std::vector<UavId>> clusters;
  DetectorConfig detector;
  PositioningSpec positioning;
  std::size_t replications = 200;
  std::uint64_t base_seed = 1;

  /// Cluster layout after defaults are applied.
  std::vector<std::vector<UavId>> resolved_clusters() const;
  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Parses and validates. Throws ScenarioParseError (with line/column or the
/// offending field path) or ValidationError.
ScenarioSpec parse_scenario(std::string_view json_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Field-for-field JSON image of a spec; parse_scenario accepts it back.
nlohmann::ordered_json to_json(const ScenarioSpec& spec);

struct BundledScenario {
  std::string_view name;
  std::string_view json;
};

std::span<const BundledScenario> bundled_scenarios() noexcept;

/// A path to an existing file, otherwise the name of a bundled scenario
/// (with or without a .json suffix).
ScenarioSpec resolve_scenario(std::string_view path_or_name);

/// Concrete mission for one replication: area side, plans, spoof headings
/// and station layout are all drawn from `seed`.
MissionSetup instantiate(const ScenarioSpec& spec, std::uint64_t seed);

}  // namespace uavtrust
