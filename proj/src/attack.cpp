#include "uavtrust/attack.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "uavtrust/errors.hpp"

namespace uavtrust {

std::string_view to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::kDdosFlooding: return "ddos";
    case AttackKind::kGpsSpoofing: return "gps-spoofing";
    case AttackKind::kManInTheMiddle: return "mitm";
    case AttackKind::kSelfishHijack: return "selfish";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) noexcept {
  if (name == "ddos") return AttackKind::kDdosFlooding;
  if (name == "gps-spoofing") return AttackKind::kGpsSpoofing;
  if (name == "mitm") return AttackKind::kManInTheMiddle;
  if (name == "selfish") return AttackKind::kSelfishHijack;
  return std::nullopt;
}

Vec3 spoof_direction(double heading_deg) noexcept {
  const double rad = heading_deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad), 0.0};
}

ChannelDeltas apply_attack_effects(UavId uav, const AttackSchedule& schedule, double t,
                                   double heading_deg) noexcept {
  ChannelDeltas d;
  if (uav != schedule.target || !schedule.active_at(t)) return d;
  const auto& p = schedule.params;
  switch (schedule.kind) {
    case AttackKind::kDdosFlooding:
      d.extra_power = p.flood_power;
      break;
    case AttackKind::kGpsSpoofing:
      d.drift_velocity =
          p.spoof_offset_rate * spoof_direction(p.spoof_heading_deg.value_or(heading_deg));
      d.falsify_reported = p.falsify_reported_position;
      break;
    case AttackKind::kManInTheMiddle:
      d.task_drop_prob = p.task_drop_prob;
      break;
    case AttackKind::kSelfishHijack:
      d.task_skip_prob = p.selfish_skip_prob;
      d.energy_factor = p.selfish_energy_factor;
      break;
  }
  return d;
}

namespace {

bool overlaps(const AttackSchedule& a, const AttackSchedule& b) {
  return a.start <= b.end && b.start <= a.end;
}

void check_parameters(const AttackSchedule& s) {
  const auto& p = s.params;
  auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " in [0, 1]", std::to_string(v));
  };
  switch (s.kind) {
    case AttackKind::kDdosFlooding:
      if (!(p.flood_power >= 0.0)) throw ValidationError("flood_power >= 0", std::to_string(p.flood_power));
      break;
    case AttackKind::kGpsSpoofing:
      if (!(p.spoof_offset_rate > 0.0)) {
        throw ValidationError("spoof_offset_rate > 0", std::to_string(p.spoof_offset_rate));
      }
      break;
    case AttackKind::kManInTheMiddle:
      prob(p.task_drop_prob, "task_drop_prob");
      break;
    case AttackKind::kSelfishHijack:
      prob(p.selfish_skip_prob, "selfish_skip_prob");
      if (!(p.selfish_energy_factor > 0.0 && p.selfish_energy_factor <= 1.0)) {
        throw ValidationError("selfish_energy_factor in (0, 1]", std::to_string(p.selfish_energy_factor));
      }
      break;
  }
}

}  // namespace

void validate_schedule(std::span<const AttackSchedule> schedules,
                       std::span<const std::vector<UavId>> clusters) {
  std::vector<std::optional<std::size_t>> cluster_of(schedules.size());
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    const auto& s = schedules[i];
    if (!(s.start < s.end)) {
      throw ValidationError("attack start < end",
                            "attack " + std::to_string(i) + " window [" + std::to_string(s.start) +
                                ", " + std::to_string(s.end) + "]");
    }
    check_parameters(s);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (UavId id : clusters[c]) {
        if (id == s.target) cluster_of[i] = c;
      }
    }
    if (!cluster_of[i]) {
      throw ValidationError("attack target exists",
                            "UAV " + std::to_string(s.target) + " is not in any cluster");
    }
  }
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    for (std::size_t j = i + 1; j < schedules.size(); ++j) {
      if (cluster_of[i] == cluster_of[j] && overlaps(schedules[i], schedules[j])) {
        throw ValidationError("at most one attacker per cluster",
                              "attacks " + std::to_string(i) + " and " + std::to_string(j) +
                                  " overlap in cluster " + std::to_string(*cluster_of[i]));
      }
    }
  }
}

}  // namespace uavtrust
