#pragma once

// Discrete-time point-mass fleet simulation. Each UAV follows a timetabled
// waypoint plan; a disturbance-free "ghost" of the same plan, stepped in
// lockstep, defines the expected position at every time slot.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "uavtrust/attack.hpp"
#include "uavtrust/detector.hpp"
#include "uavtrust/geometry.hpp"
#include "uavtrust/positioning.hpp"
#include "uavtrust/random.hpp"
#include "uavtrust/trust.hpp"

namespace uavtrust {

struct SimConfig {
  std::optional<double> area_side;  // m; drawn from [1500, 2500] when unset
  std::size_t uav_count = 3;
  double timestep = 1.0;            // s
  double mission_duration = 1200.0; // s
  double cruise_speed = 12.0;       // m/s, planned ground speed
  double max_airspeed = 18.0;       // m/s, used to fight wind and catch up
  double base_power = 100.0;        // W
  double move_power_per_speed = 10.0;  // W per m/s
  double task_energy = 200.0;       // J per performed task
  double task_success_prob = 0.95;
  double obs_uncertainty_prob = 0.1;
  double capture_radius = 5.0;      // m
  double task_dwell = 5.0;          // s spent at a task waypoint
  std::uint64_t rng_seed = 1;

  void validate() const;
};

inline constexpr double kMinAreaSide = 1500.0;
inline constexpr double kMaxAreaSide = 2500.0;

enum class TaskKind { kSurvey, kDelivery, kPatrol };

std::string_view to_string(TaskKind kind) noexcept;
std::optional<TaskKind> parse_task_kind(std::string_view name) noexcept;

struct PlannedTask {
  std::size_t waypoint = 0;
  TaskKind kind = TaskKind::kSurvey;
};

struct MissionPlan {
  std::vector<Vec3> waypoints;
  std::vector<PlannedTask> tasks;

  std::optional<std::size_t> task_at(std::size_t waypoint) const noexcept;
  /// Throws ValidationError when empty, out of [0, area_side]^2 horizontally,
  /// or a task references a missing waypoint.
  void validate(double area_side) const;
};

struct WindField {
  Vec3 mean = Vec3::Zero();  // m/s
  double gust_std = 0.0;     // m/s per axis
  double energy_factor = 1.0;

  bool calm() const noexcept { return mean.isZero(0.0) && gust_std == 0.0 && energy_factor == 1.0; }
  void validate() const;
};

enum class FlightPhase { kTransit, kDwell, kHover };

struct UavState {
  UavId id = 0;
  Vec3 true_position = Vec3::Zero();
  Vec3 reported_position = Vec3::Zero();
  double energy_consumed = 0.0;
  EvidenceCounts evidence{};
  std::size_t plan_cursor = 0;
  FlightPhase phase = FlightPhase::kTransit;
  double dwell_elapsed = 0.0;
  // true minus navigated position while a spoofer is active
  Vec3 nav_offset = Vec3::Zero();
  // autopilot's low-pass estimate of the wind it is flying in
  Vec3 wind_estimate = Vec3::Zero();
  ChannelDeltas attack{};
};

/// Places a UAV at the first waypoint of its plan.
UavState initial_state(UavId id, const MissionPlan& plan);

struct FlightParams {
  double timestep = 1.0;
  double cruise_speed = 12.0;
  double max_airspeed = 18.0;
  double capture_radius = 5.0;
  double task_dwell = 5.0;
  double wind_filter_gain = 0.2;

  static FlightParams from(const SimConfig& config) noexcept;
};

struct StepEvents {
  double commanded_speed = 0.0;  // m/s flown under own power, drift included
  std::optional<std::size_t> task_reached;  // task index reached this step
};

inline constexpr std::size_t kNoRelease = std::numeric_limits<std::size_t>::max();

/// Timetable information from the expected-path ghost.
struct ScheduleGate {
  // The UAV may leave task waypoint k only once release > k.
  std::size_t release = kNoRelease;
  // The ghost has already left the waypoint this UAV is flying to.
  bool behind = false;
};

/// Advances one time slot. The UAV steers from its navigated position toward
/// the current waypoint at cruise speed (max airspeed while behind
/// schedule), subtracting its wind estimate within the airspeed limit, and
/// is then displaced by `wind_velocity` and any attack drift. A waypoint
/// within the capture radius is reached; task waypoints hold the UAV for the
/// dwell time and until the gate releases them. With no waypoints left the UAV hovers without
/// correction.
UavState step_kinematics(const UavState& state, const MissionPlan& plan, const Vec3& wind_velocity,
                         const FlightParams& params, ScheduleGate gate = {},
                         StepEvents* events = nullptr);

/// Mean wind plus a Gaussian gust; always consumes three normal draws.
Vec3 draw_wind(const WindField& wind, Rng& rng);

/// Energy for one step: ((base + k*speed)*wind_factor*dt + task_energy*tasks)
/// scaled by the attack's energy factor, plus attack extra power * dt.
double consume_energy(const SimConfig& config, double speed, const WindField& wind,
                      std::size_t tasks_done, double dt, const ChannelDeltas& attack = {});

enum class TaskOutcome { kSuccess, kFail };

/// Success with probability `success_prob`; one uniform draw.
TaskOutcome execute_task(double success_prob, Rng& rng);

/// What the audit unit records: uncertain with probability `uncertain_prob`,
/// otherwise the true outcome. One uniform draw.
TrustMonitor::Observation audit_observe(TaskOutcome outcome, double uncertain_prob, Rng& rng);

struct TaskAttempt {
  TaskOutcome outcome = TaskOutcome::kFail;
  bool performed = false;  // false when a hijacked UAV skipped it
};

/// Task execution with attack effects applied. Always consumes three draws
/// (skip, success, drop).
TaskAttempt attempt_task(double success_prob, const ChannelDeltas& attack, Rng& rng);

struct TaskEvent {
  std::size_t task_index = 0;
  TaskOutcome outcome = TaskOutcome::kFail;
  bool performed = false;
};

struct TelemetryRecord {
  double time = 0.0;
  UavId uav = 0;
  Vec3 expected = Vec3::Zero();
  Vec3 reported = Vec3::Zero();
  Vec3 actual = Vec3::Zero();
  double interval_energy = 0.0;  // J consumed during this step
  std::vector<TaskEvent> tasks;
};

struct PositioningSetup {
  std::vector<DistanceStation> stations;
  double range_noise_std = 0.0;  // m
};

/// Everything one mission needs, already resolved for a single replication.
struct MissionSetup {
  SimConfig sim;                              // area_side must be set
  std::vector<MissionPlan> plans;             // indexed by UAV id
  WindField wind;
  std::vector<AttackSchedule> attacks;        // spoof headings resolved
  std::vector<std::vector<UavId>> clusters;
  DetectorConfig detector;
  std::optional<PositioningSetup> positioning;

  void validate() const;
};

struct ClusterTimeline {
  std::vector<UavId> members;
  std::optional<UavId> attacked;
  std::optional<AttackSchedule> attack;
  std::vector<TrustMonitor::Evaluation> evaluations;

  bool operator==(const ClusterTimeline& other) const;
};

struct MissionResult {
  std::vector<ClusterTimeline> clusters;
  std::vector<UavState> final_states;
};

using TelemetrySink = std::function<void(const TelemetryRecord&)>;

/// Steps the world at dt, feeds each cluster's audit unit, evaluates every
/// evaluation_interval and resets trust state when the mission ends.
/// Deterministic in setup.sim.rng_seed.
MissionResult run_mission(const MissionSetup& setup, const TelemetrySink& sink = {});

struct PlanShape {
  double leg_length = 100.0;  // m
  double altitude = 100.0;    // m
};

/// One flight pattern of `kind`, long enough to fill the mission, translated to a
/// random offset inside the area for every member.
std::vector<MissionPlan> generate_cluster_plans(TaskKind kind, std::size_t members,
                                                double area_side, const SimConfig& config,
                                                const PlanShape& shape, Rng& rng);

}  // namespace uavtrust
