#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uavtrust/geometry.hpp"

namespace uavtrust {

enum class AttackKind { kDdosFlooding, kGpsSpoofing, kManInTheMiddle, kSelfishHijack };

std::string_view to_string(AttackKind kind) noexcept;
std::optional<AttackKind> parse_attack_kind(std::string_view name) noexcept;

struct AttackParameters {
  double flood_power = 200.0;        // W
  double spoof_offset_rate = 2.0;    // m/s
  // Horizontal heading of the false target, degrees from +x. Drawn per
  // replication when unset.
  std::optional<double> spoof_heading_deg;
  bool falsify_reported_position = false;
  double task_drop_prob = 0.6;
  double selfish_skip_prob = 0.7;
  double selfish_energy_factor = 0.5;
};

struct AttackSchedule {
  UavId target = 0;
  AttackKind kind = AttackKind::kDdosFlooding;
  double start = 0.0;  // s
  double end = 0.0;    // s
  AttackParameters params{};

  bool active_at(double t) const noexcept { return t >= start && t <= end; }
};

/// What an attack does to each behavioural channel during one step. The
/// default value is the identity on every channel.
struct ChannelDeltas {
  double extra_power = 0.0;     // W, added after all multipliers
  double energy_factor = 1.0;   // multiplies the whole step's energy
  Vec3 drift_velocity = Vec3::Zero();  // m/s, physical drift toward the false target
  bool falsify_reported = false;
  double task_drop_prob = 0.0;
  double task_skip_prob = 0.0;

  bool is_identity() const noexcept {
    return extra_power == 0.0 && energy_factor == 1.0 && drift_velocity.isZero(0.0) &&
           !falsify_reported && task_drop_prob == 0.0 && task_skip_prob == 0.0;
  }
};

/// Unit horizontal vector toward the spoofer's false target.
Vec3 spoof_direction(double heading_deg) noexcept;

/// Effects of `schedule` on `uav` at time `t`; identity when the UAV is not
/// the target or `t` is outside [start, end]. `heading_deg` resolves an unset
/// spoof heading.
ChannelDeltas apply_attack_effects(UavId uav, const AttackSchedule& schedule, double t,
                                   double heading_deg = 0.0) noexcept;

/// Throws ValidationError if two attacks with overlapping windows hit the
/// same cluster, a target is not a cluster member, or a window is empty.
void validate_schedule(std::span<const AttackSchedule> schedules,
                       std::span<const std::vector<UavId>> clusters);

}  // namespace uavtrust
