#include "uavtrust/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Geometry>

#include "uavtrust/errors.hpp"

namespace uavtrust {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ValidationError(std::string(name) + " > 0", std::to_string(v));
}

void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " in [0, 1]", std::to_string(v));
}

bool is_multiple(double value, double step) {
  const double ratio = value / step;
  return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio);
}

}  // namespace

void SimConfig::validate() const {
  if (area_side) require_positive(*area_side, "area_side");
  if (uav_count == 0) throw ValidationError("uav_count >= 1", "got 0");
  require_positive(timestep, "timestep");
  require_positive(mission_duration, "mission_duration");
  require_positive(cruise_speed, "cruise_speed");
  if (!(max_airspeed >= cruise_speed)) {
    throw ValidationError("max_airspeed >= cruise_speed", std::to_string(max_airspeed));
  }
  require_positive(base_power, "base_power");
  require_positive(move_power_per_speed, "move_power_per_speed");
  if (!(task_energy >= 0.0)) throw ValidationError("task_energy >= 0", std::to_string(task_energy));
  require_probability(task_success_prob, "task_success_prob");
  require_probability(obs_uncertainty_prob, "obs_uncertainty_prob");
  require_positive(capture_radius, "capture_radius");
  if (!(task_dwell >= 0.0)) throw ValidationError("task_dwell >= 0", std::to_string(task_dwell));
  if (!is_multiple(mission_duration, timestep)) {
    throw ValidationError("mission_duration is a multiple of timestep", std::to_string(mission_duration));
  }
}

std::string_view to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::kSurvey: return "survey";
    case TaskKind::kDelivery: return "delivery";
    case TaskKind::kPatrol: return "patrol";
  }
  return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) noexcept {
  if (name == "survey") return TaskKind::kSurvey;
  if (name == "delivery") return TaskKind::kDelivery;
  if (name == "patrol") return TaskKind::kPatrol;
  return std::nullopt;
}

std::optional<std::size_t> MissionPlan::task_at(std::size_t waypoint) const noexcept {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].waypoint == waypoint) return i;
  }
  return std::nullopt;
}

void MissionPlan::validate(double area_side) const {
  if (waypoints.empty()) throw ValidationError("non-empty mission plan", "no waypoints");
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const Vec3& w = waypoints[i];
    if (!(w.x() >= 0.0 && w.x() <= area_side && w.y() >= 0.0 && w.y() <= area_side && w.z() >= 0.0)) {
      throw ValidationError("waypoints within area bounds",
                            "waypoint " + std::to_string(i) + " outside [0, " +
                                std::to_string(area_side) + "]^2");
    }
  }
  std::set<std::size_t> seen;
  for (const auto& t : tasks) {
    if (t.waypoint >= waypoints.size()) {
      throw ValidationError("tasks reference valid waypoints",
                            "task at waypoint " + std::to_string(t.waypoint) + " of " +
                                std::to_string(waypoints.size()));
    }
    if (!seen.insert(t.waypoint).second) {
      throw ValidationError("one task per waypoint", "waypoint " + std::to_string(t.waypoint));
    }
  }
}

void WindField::validate() const {
  if (!(gust_std >= 0.0)) throw ValidationError("gust_std >= 0", std::to_string(gust_std));
  if (!(energy_factor >= 1.0)) throw ValidationError("wind energy_factor >= 1", std::to_string(energy_factor));
}

UavState initial_state(UavId id, const MissionPlan& plan) {
  UavState s;
  s.id = id;
  s.true_position = plan.waypoints.front();
  s.reported_position = s.true_position;
  return s;
}

FlightParams FlightParams::from(const SimConfig& config) noexcept {
  FlightParams p;
  p.timestep = config.timestep;
  p.cruise_speed = config.cruise_speed;
  p.max_airspeed = config.max_airspeed;
  p.capture_radius = config.capture_radius;
  p.task_dwell = config.task_dwell;
  return p;
}

UavState step_kinematics(const UavState& state, const MissionPlan& plan, const Vec3& wind_velocity,
                         const FlightParams& params, ScheduleGate gate, StepEvents* events) {
  UavState next = state;
  StepEvents ev;
  const double dt = params.timestep;
  const std::size_t n = plan.waypoints.size();
  if (next.plan_cursor >= n) next.phase = FlightPhase::kHover;

  const Vec3 navigated = state.true_position - state.nav_offset;
  Vec3 command = Vec3::Zero();  // air-relative
  if (next.phase != FlightPhase::kHover) {
    const double speed = gate.behind ? params.max_airspeed : params.cruise_speed;
    const Vec3 to_target = plan.waypoints[next.plan_cursor] - navigated;
    const double dist = to_target.norm();
    Vec3 ground = Vec3::Zero();
    if (dist > 0.0) ground = to_target / dist * std::min(speed, dist / dt);
    command = ground - state.wind_estimate;
    const double airspeed = command.norm();
    if (airspeed > params.max_airspeed) command *= params.max_airspeed / airspeed;
  }

  const Vec3& drift = state.attack.drift_velocity;
  next.true_position += (command + wind_velocity + drift) * dt;
  next.nav_offset += drift * dt;
  ev.commanded_speed = command.norm() + drift.norm();

  const Vec3 now_navigated = next.true_position - next.nav_offset;
  if (next.phase != FlightPhase::kHover) {
    // Navigated track minus own command is the wind the UAV experienced.
    const Vec3 observed = (now_navigated - navigated) / dt - command;
    next.wind_estimate += params.wind_filter_gain * (observed - state.wind_estimate);
  }
  auto advance = [&] {
    ++next.plan_cursor;
    next.phase = next.plan_cursor < n ? FlightPhase::kTransit : FlightPhase::kHover;
    next.dwell_elapsed = 0.0;
  };
  switch (next.phase) {
    case FlightPhase::kTransit:
      if ((plan.waypoints[next.plan_cursor] - now_navigated).norm() <= params.capture_radius) {
        if (auto task = plan.task_at(next.plan_cursor)) {
          next.phase = FlightPhase::kDwell;
          next.dwell_elapsed = 0.0;
          ev.task_reached = task;
        } else {
          advance();
        }
      }
      break;
    case FlightPhase::kDwell:
      next.dwell_elapsed += dt;
      if (next.dwell_elapsed >= params.task_dwell - 1e-9 && gate.release > next.plan_cursor) {
        advance();
      }
      break;
    case FlightPhase::kHover:
      break;
  }
  if (events != nullptr) *events = ev;
  return next;
}

Vec3 draw_wind(const WindField& wind, Rng& rng) {
  const double gx = standard_normal(rng);
  const double gy = standard_normal(rng);
  const double gz = standard_normal(rng);
  return wind.mean + wind.gust_std * Vec3(gx, gy, gz);
}

double consume_energy(const SimConfig& config, double speed, const WindField& wind,
                      std::size_t tasks_done, double dt, const ChannelDeltas& attack) {
  const double flight = (config.base_power + config.move_power_per_speed * speed) * wind.energy_factor * dt;
  const double tasks = config.task_energy * static_cast<double>(tasks_done);
  return (flight + tasks) * attack.energy_factor + attack.extra_power * dt;
}

TaskOutcome execute_task(double success_prob, Rng& rng) {
  return uniform01(rng) < success_prob ? TaskOutcome::kSuccess : TaskOutcome::kFail;
}

TrustMonitor::Observation audit_observe(TaskOutcome outcome, double uncertain_prob, Rng& rng) {
  if (uniform01(rng) < uncertain_prob) return TrustMonitor::Observation::kUncertain;
  return outcome == TaskOutcome::kSuccess ? TrustMonitor::Observation::kSuccess
                                          : TrustMonitor::Observation::kFail;
}

TaskAttempt attempt_task(double success_prob, const ChannelDeltas& attack, Rng& rng) {
  const double skip = uniform01(rng);
  const TaskOutcome outcome = execute_task(success_prob, rng);
  const double drop = uniform01(rng);
  if (skip < attack.task_skip_prob) return {TaskOutcome::kFail, false};
  if (drop < attack.task_drop_prob) return {TaskOutcome::kFail, true};
  return {outcome, true};
}

void MissionSetup::validate() const {
  sim.validate();
  if (!sim.area_side) throw ValidationError("area_side resolved", "mission setup has no area side");
  if (plans.size() != sim.uav_count) {
    throw ValidationError("one plan per UAV", std::to_string(plans.size()) + " plans for " +
                                                  std::to_string(sim.uav_count) + " UAVs");
  }
  for (const auto& p : plans) p.validate(*sim.area_side);
  wind.validate();
  detector.validate();
  if (!is_multiple(detector.evaluation_interval, sim.timestep)) {
    throw ValidationError("evaluation_interval is a multiple of timestep",
                          std::to_string(detector.evaluation_interval));
  }
  if (clusters.empty()) throw ValidationError("at least one cluster", "none given");
  std::set<UavId> assigned;
  for (const auto& c : clusters) {
    if (c.size() < 3) {
      throw ValidationError("clusters have K >= 3", "cluster of " + std::to_string(c.size()));
    }
    for (UavId id : c) {
      if (id >= sim.uav_count) {
        throw ValidationError("cluster members exist", "UAV " + std::to_string(id));
      }
      if (!assigned.insert(id).second) {
        throw ValidationError("each UAV in one cluster", "UAV " + std::to_string(id));
      }
    }
  }
  validate_schedule(attacks, clusters);
  for (const auto& a : attacks) {
    if (a.start < 0.0 || a.end > sim.mission_duration) {
      throw ValidationError("attack window within mission",
                            "[" + std::to_string(a.start) + ", " + std::to_string(a.end) + "]");
    }
  }
  if (positioning && positioning->stations.size() < 4) {
    throw ValidationError("at least 4 distance stations", std::to_string(positioning->stations.size()));
  }
}

bool ClusterTimeline::operator==(const ClusterTimeline& other) const {
  auto same_attack = [](const std::optional<AttackSchedule>& a, const std::optional<AttackSchedule>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->target == b->target && a->kind == b->kind && a->start == b->start && a->end == b->end;
  };
  return members == other.members && attacked == other.attacked && same_attack(attack, other.attack) &&
         evaluations == other.evaluations;
}

MissionResult run_mission(const MissionSetup& setup, const TelemetrySink& sink) {
  setup.validate();
  const SimConfig& sim = setup.sim;
  const FlightParams params = FlightParams::from(sim);
  const std::size_t n = sim.uav_count;
  const double dt = sim.timestep;

  std::vector<UavState> states;
  std::vector<UavState> ghosts;
  std::vector<Rng> wind_rng, task_rng, audit_rng, ranging_rng;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<UavId>(i);
    states.push_back(initial_state(id, setup.plans[i]));
    ghosts.push_back(states.back());
    wind_rng.push_back(make_stream(sim.rng_seed, {1, i}));
    task_rng.push_back(make_stream(sim.rng_seed, {2, i}));
    audit_rng.push_back(make_stream(sim.rng_seed, {3, i}));
    ranging_rng.push_back(make_stream(sim.rng_seed, {4, i}));
  }

  std::vector<std::vector<const AttackSchedule*>> schedules_for(n);
  for (const auto& a : setup.attacks) schedules_for[a.target].push_back(&a);

  std::vector<TrustMonitor> monitors;
  std::vector<std::size_t> cluster_of(n, setup.clusters.size());
  MissionResult result;
  for (std::size_t c = 0; c < setup.clusters.size(); ++c) {
    monitors.emplace_back(setup.clusters[c], setup.detector);
    ClusterTimeline timeline;
    timeline.members = setup.clusters[c];
    for (UavId id : setup.clusters[c]) {
      cluster_of[id] = c;
      if (!schedules_for[id].empty() && !timeline.attacked) {
        timeline.attacked = id;
        timeline.attack = *schedules_for[id].front();
      }
    }
    result.clusters.push_back(std::move(timeline));
  }

  const auto steps = static_cast<std::size_t>(std::llround(sim.mission_duration / dt));
  const auto steps_per_interval =
      static_cast<std::size_t>(std::llround(setup.detector.evaluation_interval / dt));

  for (std::size_t step = 0; step < steps; ++step) {
    const double t_mid = (static_cast<double>(step) + 0.5) * dt;
    const double t_end = static_cast<double>(step + 1) * dt;
    for (std::size_t i = 0; i < n; ++i) {
      const auto id = static_cast<UavId>(i);
      const MissionPlan& plan = setup.plans[i];
      UavState& uav = states[i];

      ChannelDeltas deltas;
      for (const auto* schedule : schedules_for[i]) {
        if (schedule->active_at(t_mid)) deltas = apply_attack_effects(id, *schedule, t_mid);
      }
      uav.attack = deltas;
      // Navigation is exact again as soon as the spoofer stops.
      if (deltas.drift_velocity.isZero(0.0)) uav.nav_offset.setZero();

      ScheduleGate gate;
      gate.behind = ghosts[i].plan_cursor > uav.plan_cursor;
      ghosts[i] = step_kinematics(ghosts[i], plan, Vec3::Zero(), params);
      gate.release = ghosts[i].plan_cursor;
      StepEvents events;
      const Vec3 wind = draw_wind(setup.wind, wind_rng[i]);
      uav = step_kinematics(uav, plan, wind, params, gate, &events);

      TelemetryRecord record;
      record.time = t_end;
      record.uav = id;
      std::size_t performed = 0;
      TrustMonitor* monitor = cluster_of[i] < monitors.size() ? &monitors[cluster_of[i]] : nullptr;
      if (events.task_reached) {
        const TaskAttempt attempt = attempt_task(sim.task_success_prob, deltas, task_rng[i]);
        const auto observed = audit_observe(attempt.outcome, sim.obs_uncertainty_prob, audit_rng[i]);
        switch (observed) {
          case TrustMonitor::Observation::kSuccess: ++uav.evidence.successful; break;
          case TrustMonitor::Observation::kFail: ++uav.evidence.failed; break;
          case TrustMonitor::Observation::kUncertain: ++uav.evidence.uncertain; break;
        }
        if (monitor != nullptr) monitor->record_task(id, observed);
        if (attempt.performed) ++performed;
        record.tasks.push_back({*events.task_reached, attempt.outcome, attempt.performed});
      }

      const double joules = consume_energy(sim, events.commanded_speed, setup.wind, performed, dt, deltas);
      uav.energy_consumed += joules;

      if (setup.positioning) {
        const auto& ds = setup.positioning->stations;
        const auto times = synthesize_receive_times(ds, uav.true_position, 0.0,
                                                    setup.positioning->range_noise_std, &ranging_rng[i]);
        try {
          uav.reported_position = solve_position(ds, times).position;
        } catch (const PositioningError&) {
          // keep the last fix
        }
      } else if (deltas.falsify_reported) {
        uav.reported_position = uav.true_position - uav.nav_offset;
      } else {
        uav.reported_position = uav.true_position;
      }

      if (monitor != nullptr) {
        monitor->record_energy(id, joules);
        monitor->record_position(id, {t_end, ghosts[i].true_position, uav.reported_position});
      }
      if (sink) {
        record.expected = ghosts[i].true_position;
        record.reported = uav.reported_position;
        record.actual = uav.true_position;
        record.interval_energy = joules;
        sink(record);
      }
    }

    if ((step + 1) % steps_per_interval == 0) {
      for (std::size_t c = 0; c < monitors.size(); ++c) {
        result.clusters[c].evaluations.push_back(monitors[c].evaluate());
      }
    }
  }

  for (auto& m : monitors) m.mission_reset();
  result.final_states = std::move(states);
  return result;
}

namespace {

std::vector<Vec3> survey_pattern(double leg) {
  // Serpentine over a 6x6 grid, then back again.
  constexpr int kSide = 6;
  std::vector<Vec3> pass;
  for (int row = 0; row < kSide; ++row) {
    for (int k = 0; k < kSide; ++k) {
      const int col = row % 2 == 0 ? k : kSide - 1 - k;
      pass.emplace_back(col * leg, row * leg, 0.0);
    }
  }
  return pass;
}

std::vector<Vec3> patrol_pattern(double leg) {
  constexpr int kPerSide = 4;
  std::vector<Vec3> loop;
  const double side = kPerSide * leg;
  for (int k = 0; k < kPerSide; ++k) loop.emplace_back(k * leg, 0.0, 0.0);
  for (int k = 0; k < kPerSide; ++k) loop.emplace_back(side, k * leg, 0.0);
  for (int k = 0; k < kPerSide; ++k) loop.emplace_back(side - k * leg, side, 0.0);
  for (int k = 0; k < kPerSide; ++k) loop.emplace_back(0.0, side - k * leg, 0.0);
  return loop;
}

std::vector<Vec3> delivery_drops(double leg) {
  // Drop points around a central depot at the origin.
  constexpr int kDrops = 5;
  std::vector<Vec3> drops;
  for (int k = 0; k < kDrops; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kDrops;
    const double r = (k % 2 == 0 ? 2.0 : 1.5) * leg;
    drops.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
  }
  return drops;
}

}  // namespace

std::vector<MissionPlan> generate_cluster_plans(TaskKind kind, std::size_t members,
                                                double area_side, const SimConfig& config,
                                                const PlanShape& shape, Rng& rng) {
  // Enough waypoints that nobody runs out before the mission ends.
  const double per_leg = shape.leg_length / config.cruise_speed + config.task_dwell + 2.0 * config.timestep;
  const auto needed = static_cast<std::size_t>(std::ceil(1.25 * config.mission_duration / per_leg)) + 2;

  MissionPlan base;
  switch (kind) {
    case TaskKind::kSurvey: {
      auto pass = survey_pattern(shape.leg_length);
      std::vector<Vec3> cycle = pass;
      cycle.insert(cycle.end(), pass.rbegin() + 1, pass.rend() - 1);
      for (std::size_t i = 0; base.waypoints.size() < needed; ++i) {
        base.waypoints.push_back(cycle[i % cycle.size()]);
        base.tasks.push_back({base.waypoints.size() - 1, kind});
      }
      break;
    }
    case TaskKind::kPatrol: {
      const auto loop = patrol_pattern(shape.leg_length);
      for (std::size_t i = 0; base.waypoints.size() < needed; ++i) {
        base.waypoints.push_back(loop[i % loop.size()]);
        base.tasks.push_back({base.waypoints.size() - 1, kind});
      }
      break;
    }
    case TaskKind::kDelivery: {
      const auto drops = delivery_drops(shape.leg_length);
      base.waypoints.push_back(Vec3::Zero());
      for (std::size_t i = 0; base.waypoints.size() < needed; ++i) {
        base.waypoints.push_back(drops[i % drops.size()]);
        base.tasks.push_back({base.waypoints.size() - 1, kind});
        base.waypoints.push_back(Vec3::Zero());
      }
      break;
    }
  }

  const double angle = 2.0 * std::numbers::pi * uniform01(rng);
  const Eigen::Matrix3d rotation = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (auto& w : base.waypoints) {
    w = rotation * w;
    lo = lo.cwiseMin(w);
    hi = hi.cwiseMax(w);
  }
  const Vec3 extent = hi - lo;
  if (extent.x() > area_side || extent.y() > area_side) {
    throw ValidationError("flight pattern fits the area",
                          "pattern extent " + std::to_string(extent.x()) + " x " +
                              std::to_string(extent.y()) + " m exceeds area side " +
                              std::to_string(area_side));
  }

  std::vector<MissionPlan> plans;
  for (std::size_t m = 0; m < members; ++m) {
    const Vec3 offset(uniform01(rng) * (area_side - extent.x()) - lo.x(),
                      uniform01(rng) * (area_side - extent.y()) - lo.y(), shape.altitude);
    MissionPlan plan = base;
    for (auto& w : plan.waypoints) {
      w += offset;
      // Rounding in the rotation can push boundary points a hair outside.
      w.x() = std::clamp(w.x(), 0.0, area_side);
      w.y() = std::clamp(w.y(), 0.0, area_side);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace uavtrust
