#include "uavtrust/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "uavtrust/errors.hpp"

namespace uavtrust {

namespace {

using json = nlohmann::json;

// Walks one JSON object, remembering the field path for error messages and
// rejecting keys nobody asked for.
class Fields {
 public:
  Fields(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ScenarioParseError((path.empty() ? std::string("<root>") : path) + ": " + what);
  }

  std::string path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    used_.insert(std::string(key));
    auto it = object_.find(std::string(key));
    return it == object_.end() ? nullptr : &*it;
  }

  void number(std::string_view key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, path(key));
  }

  void optional_number(std::string_view key, std::optional<double>& out) {
    if (const json* v = find(key); v != nullptr && !v->is_null()) out = as_number(*v, path(key));
  }

  template <typename Int>
  void count(std::string_view key, Int& out) {
    if (const json* v = find(key)) out = static_cast<Int>(as_count(*v, path(key)));
  }

  void boolean(std::string_view key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(std::string_view key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void vec3(std::string_view key, Vec3& out) {
    if (const json* v = find(key)) out = as_vec3(*v, path(key));
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!used_.contains(key)) fail(path(key), "unknown field");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  static std::uint64_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  static Vec3 as_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected [x, y, z]");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"), as_number(v[2], path + "[2]")};
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> used_;
};

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require_array(const json* v, const std::string& path) {
  if (!v->is_array()) Fields::fail(path, "expected an array");
  return *v;
}

void parse_sim(Fields f, SimConfig& sim) {
  f.optional_number("area_side", sim.area_side);
  f.count("uav_count", sim.uav_count);
  f.number("timestep", sim.timestep);
  f.number("mission_duration", sim.mission_duration);
  f.number("cruise_speed", sim.cruise_speed);
  f.number("max_airspeed", sim.max_airspeed);
  f.number("base_power", sim.base_power);
  f.number("move_power_per_speed", sim.move_power_per_speed);
  f.number("task_energy", sim.task_energy);
  f.number("task_success_prob", sim.task_success_prob);
  f.number("obs_uncertainty_prob", sim.obs_uncertainty_prob);
  f.number("capture_radius", sim.capture_radius);
  f.number("task_dwell", sim.task_dwell);
  f.finish();
}

TaskKind parse_kind(const json& v, const std::string& path) {
  if (!v.is_string()) Fields::fail(path, "expected a task kind string");
  auto kind = parse_task_kind(v.get<std::string>());
  if (!kind) Fields::fail(path, "unknown task kind '" + v.get<std::string>() + "' (survey, delivery, patrol)");
  return *kind;
}

void parse_plans(Fields f, PlanSpec& plans) {
  if (const json* kinds = f.find("kinds")) {
    const auto& arr = require_array(kinds, f.path("kinds"));
    plans.kinds.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) plans.kinds.push_back(parse_kind(arr[i], index_path(f.path("kinds"), i)));
  }
  f.number("leg_length", plans.shape.leg_length);
  f.number("altitude", plans.shape.altitude);
  if (const json* expl = f.find("explicit")) {
    const std::string base = f.path("explicit");
    const auto& arr = require_array(expl, base);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Fields p(arr[i], index_path(base, i));
      MissionPlan plan;
      if (const json* wps = p.find("waypoints")) {
        const auto& wa = require_array(wps, p.path("waypoints"));
        for (std::size_t k = 0; k < wa.size(); ++k) plan.waypoints.push_back(Fields::as_vec3(wa[k], index_path(p.path("waypoints"), k)));
      }
      if (const json* tasks = p.find("tasks")) {
        const auto& ta = require_array(tasks, p.path("tasks"));
        for (std::size_t k = 0; k < ta.size(); ++k) {
          Fields t(ta[k], index_path(p.path("tasks"), k));
          PlannedTask task;
          t.count("waypoint", task.waypoint);
          if (const json* kind = t.find("kind")) task.kind = parse_kind(*kind, t.path("kind"));
          t.finish();
          plan.tasks.push_back(task);
        }
      }
      p.finish();
      plans.explicit_plans.push_back(std::move(plan));
    }
  }
  f.finish();
}

void parse_wind(Fields f, WindField& wind) {
  f.vec3("mean", wind.mean);
  f.number("gust_std", wind.gust_std);
  f.number("energy_factor", wind.energy_factor);
  f.finish();
}

AttackSchedule parse_attack(Fields f) {
  AttackSchedule a;
  f.count("target", a.target);
  if (const json* kind = f.find("kind")) {
    if (!kind->is_string()) Fields::fail(f.path("kind"), "expected an attack kind string");
    auto k = parse_attack_kind(kind->get<std::string>());
    if (!k) Fields::fail(f.path("kind"), "unknown attack kind '" + kind->get<std::string>() + "' (ddos, gps-spoofing, mitm, selfish)");
    a.kind = *k;
  } else {
    Fields::fail(f.path("kind"), "missing");
  }
  f.number("start", a.start);
  f.number("end", a.end);
  auto& p = a.params;
  f.number("flood_power", p.flood_power);
  f.number("spoof_offset_rate", p.spoof_offset_rate);
  f.optional_number("spoof_heading_deg", p.spoof_heading_deg);
  f.boolean("falsify_reported_position", p.falsify_reported_position);
  f.number("task_drop_prob", p.task_drop_prob);
  f.number("selfish_skip_prob", p.selfish_skip_prob);
  f.number("selfish_energy_factor", p.selfish_energy_factor);
  f.finish();
  return a;
}

void parse_detector(Fields f, DetectorConfig& d) {
  f.number("evaluation_interval", d.evaluation_interval);
  f.number("range_threshold", d.range_threshold);
  f.count("alpha", d.alpha);
  f.count("persistence", d.persistence);
  f.number("environmental_deviation", d.environmental_deviation);
  if (const json* w = f.find("weights")) {
    Fields wf(*w, f.path("weights"));
    wf.number("task", d.weights.task);
    wf.number("energy", d.weights.energy);
    wf.number("deviation", d.weights.deviation);
    wf.number("deviation_scale", d.weights.deviation_scale);
    wf.finish();
  }
  f.finish();
}

void parse_positioning(Fields f, PositioningSpec& p) {
  f.boolean("enabled", p.enabled);
  f.number("range_noise_std", p.range_noise_std);
  if (const json* st = f.find("stations")) {
    const auto& arr = require_array(st, f.path("stations"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Fields s(arr[i], index_path(f.path("stations"), i));
      DistanceStation ds;
      ds.id = static_cast<std::uint32_t>(i);
      s.count("id", ds.id);
      s.vec3("position", ds.position);
      s.number("transmit_time", ds.transmit_time);
      s.finish();
      p.stations.push_back(ds);
    }
  }
  f.finish();
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::vector<std::vector<UavId>> ScenarioSpec::resolved_clusters() const {
  if (!clusters.empty()) return clusters;
  std::vector<std::vector<UavId>> out;
  for (std::size_t i = 0; i < sim.uav_count; ++i) {
    if (out.empty() || (i % 3 == 0 && sim.uav_count - i >= 3)) out.emplace_back();
    out.back().push_back(static_cast<UavId>(i));
  }
  return out;
}

void ScenarioSpec::validate() const {
  if (replications < 1) throw ValidationError("replications >= 1", "got 0");
  if (sim.uav_count < 3) throw ValidationError("clusters have K >= 3", std::to_string(sim.uav_count) + " UAVs");
  detector.validate();
  if (plans.explicit_plans.empty()) {
    if (plans.kinds.empty()) throw ValidationError("at least one task kind", "plans.kinds is empty");
    if (!(plans.shape.leg_length > 0.0)) throw ValidationError("leg_length > 0", std::to_string(plans.shape.leg_length));
    if (!(plans.shape.altitude >= 0.0)) throw ValidationError("altitude >= 0", std::to_string(plans.shape.altitude));
  } else {
    if (plans.explicit_plans.size() != sim.uav_count) {
      throw ValidationError("one plan per UAV", std::to_string(plans.explicit_plans.size()) +
                                                    " plans for " + std::to_string(sim.uav_count) + " UAVs");
    }
    if (!sim.area_side) throw ValidationError("explicit plans need area_side", "sim.area_side is unset");
  }
  const auto groups = resolved_clusters();
  std::size_t covered = 0;
  for (const auto& g : groups) covered += g.size();
  if (covered != sim.uav_count) {
    throw ValidationError("every UAV belongs to a cluster",
                          std::to_string(covered) + " of " + std::to_string(sim.uav_count) + " assigned");
  }
  instantiate(*this, base_seed).validate();
}

ScenarioSpec parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioParseError("JSON syntax error at " + line_column(json_text, e.byte) + ": " + e.what());
  }

  ScenarioSpec spec;
  Fields f(root, "");
  f.string("name", spec.name);
  f.string("description", spec.description);
  f.count("replications", spec.replications);
  f.count("base_seed", spec.base_seed);
  if (const json* v = f.find("sim")) parse_sim(Fields(*v, "sim"), spec.sim);
  if (const json* v = f.find("plans")) parse_plans(Fields(*v, "plans"), spec.plans);
  if (const json* v = f.find("wind")) parse_wind(Fields(*v, "wind"), spec.wind);
  if (const json* v = f.find("attacks")) {
    const auto& arr = require_array(v, "attacks");
    for (std::size_t i = 0; i < arr.size(); ++i) spec.attacks.push_back(parse_attack(Fields(arr[i], index_path("attacks", i))));
  }
  if (const json* v = f.find("clusters")) {
    const auto& arr = require_array(v, "clusters");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& members = require_array(&arr[i], index_path("clusters", i));
      std::vector<UavId> c;
      for (std::size_t k = 0; k < members.size(); ++k) {
        c.push_back(static_cast<UavId>(Fields::as_count(members[k], index_path(index_path("clusters", i), k))));
      }
      spec.clusters.push_back(std::move(c));
    }
  }
  if (const json* v = f.find("detector")) parse_detector(Fields(*v, "detector"), spec.detector);
  if (const json* v = f.find("positioning")) parse_positioning(Fields(*v, "positioning"), spec.positioning);
  f.finish();
  if (spec.name.empty()) Fields::fail("name", "missing or empty");

  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioParseError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioParseError& e) {
    throw ScenarioParseError(path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json to_json(const ScenarioSpec& spec) {
  using ojson = nlohmann::ordered_json;
  auto vec = [](const Vec3& v) { return ojson::array({v.x(), v.y(), v.z()}); };
  ojson j;
  j["name"] = spec.name;
  if (!spec.description.empty()) j["description"] = spec.description;
  j["replications"] = spec.replications;
  j["base_seed"] = spec.base_seed;
  const auto& s = spec.sim;
  j["sim"] = {{"area_side", s.area_side ? ojson(*s.area_side) : ojson(nullptr)},
              {"uav_count", s.uav_count},
              {"timestep", s.timestep},
              {"mission_duration", s.mission_duration},
              {"cruise_speed", s.cruise_speed},
              {"max_airspeed", s.max_airspeed},
              {"base_power", s.base_power},
              {"move_power_per_speed", s.move_power_per_speed},
              {"task_energy", s.task_energy},
              {"task_success_prob", s.task_success_prob},
              {"obs_uncertainty_prob", s.obs_uncertainty_prob},
              {"capture_radius", s.capture_radius},
              {"task_dwell", s.task_dwell}};
  ojson kinds = ojson::array();
  for (auto k : spec.plans.kinds) kinds.push_back(std::string(to_string(k)));
  j["plans"] = {{"kinds", kinds}, {"leg_length", spec.plans.shape.leg_length}, {"altitude", spec.plans.shape.altitude}};
  if (!spec.plans.explicit_plans.empty()) {
    ojson plans = ojson::array();
    for (const auto& p : spec.plans.explicit_plans) {
      ojson wps = ojson::array();
      for (const auto& w : p.waypoints) wps.push_back(vec(w));
      ojson tasks = ojson::array();
      for (const auto& t : p.tasks) tasks.push_back({{"waypoint", t.waypoint}, {"kind", std::string(to_string(t.kind))}});
      plans.push_back({{"waypoints", wps}, {"tasks", tasks}});
    }
    j["plans"]["explicit"] = plans;
  }
  j["clusters"] = spec.resolved_clusters();
  j["wind"] = {{"mean", vec(spec.wind.mean)}, {"gust_std", spec.wind.gust_std}, {"energy_factor", spec.wind.energy_factor}};
  ojson attacks = ojson::array();
  for (const auto& a : spec.attacks) {
    const auto& p = a.params;
    attacks.push_back({{"target", a.target},
                       {"kind", std::string(to_string(a.kind))},
                       {"start", a.start},
                       {"end", a.end},
                       {"flood_power", p.flood_power},
                       {"spoof_offset_rate", p.spoof_offset_rate},
                       {"spoof_heading_deg", p.spoof_heading_deg ? ojson(*p.spoof_heading_deg) : ojson(nullptr)},
                       {"falsify_reported_position", p.falsify_reported_position},
                       {"task_drop_prob", p.task_drop_prob},
                       {"selfish_skip_prob", p.selfish_skip_prob},
                       {"selfish_energy_factor", p.selfish_energy_factor}});
  }
  j["attacks"] = attacks;
  const auto& d = spec.detector;
  j["detector"] = {{"evaluation_interval", d.evaluation_interval},
                   {"range_threshold", d.range_threshold},
                   {"alpha", d.alpha},
                   {"persistence", d.persistence},
                   {"environmental_deviation", d.environmental_deviation},
                   {"weights",
                    {{"task", d.weights.task},
                     {"energy", d.weights.energy},
                     {"deviation", d.weights.deviation},
                     {"deviation_scale", d.weights.deviation_scale}}}};
  ojson stations = ojson::array();
  for (const auto& st : spec.positioning.stations) {
    stations.push_back({{"id", st.id}, {"position", vec(st.position)}, {"transmit_time", st.transmit_time}});
  }
  j["positioning"] = {{"enabled", spec.positioning.enabled},
                      {"range_noise_std", spec.positioning.range_noise_std},
                      {"stations", stations}};
  return j;
}

ScenarioSpec resolve_scenario(std::string_view path_or_name) {
  const std::filesystem::path path(path_or_name);
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) return load_scenario(path);

  std::string_view name = path_or_name;
  if (name.ends_with(".json")) name.remove_suffix(5);
  for (const auto& b : bundled_scenarios()) {
    if (b.name == name) return parse_scenario(b.json);
  }
  throw ScenarioParseError(std::string(path_or_name) + ": no such file or bundled scenario");
}

namespace {

std::vector<DistanceStation> default_stations(double area_side) {
  // Four ground stations at the corners and two masts inside the area.
  const double s = area_side;
  const std::vector<Vec3> positions{{0, 0, 0},          {s, 0, 20},           {s, s, 0},
                                    {0, s, 20},         {0.3 * s, 0.5 * s, 400}, {0.7 * s, 0.5 * s, 300}};
  std::vector<DistanceStation> out;
  for (std::size_t i = 0; i < positions.size(); ++i) out.push_back({static_cast<std::uint32_t>(i), positions[i], 0.0});
  return out;
}

}  // namespace

MissionSetup instantiate(const ScenarioSpec& spec, std::uint64_t seed) {
  Rng rng = make_stream(seed, {0});
  MissionSetup setup;
  setup.sim = spec.sim;
  setup.sim.rng_seed = seed;
  const double drawn_side = kMinAreaSide + uniform01(rng) * (kMaxAreaSide - kMinAreaSide);
  setup.sim.area_side = spec.sim.area_side.value_or(drawn_side);
  setup.clusters = spec.resolved_clusters();

  if (!spec.plans.explicit_plans.empty()) {
    setup.plans = spec.plans.explicit_plans;
  } else {
    setup.plans.resize(spec.sim.uav_count);
    for (const auto& cluster : setup.clusters) {
      const auto pick = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(spec.plans.kinds.size()));
      const TaskKind kind = spec.plans.kinds[std::min(pick, spec.plans.kinds.size() - 1)];
      auto plans = generate_cluster_plans(kind, cluster.size(), *setup.sim.area_side, spec.sim, spec.plans.shape, rng);
      for (std::size_t m = 0; m < cluster.size(); ++m) {
        if (cluster[m] < setup.plans.size()) setup.plans[cluster[m]] = std::move(plans[m]);
      }
    }
  }

  setup.wind = spec.wind;
  setup.attacks = spec.attacks;
  for (auto& a : setup.attacks) {
    const double heading = 360.0 * uniform01(rng);
    if (!a.params.spoof_heading_deg) a.params.spoof_heading_deg = heading;
  }
  setup.detector = spec.detector;
  if (spec.positioning.enabled) {
    PositioningSetup p;
    p.stations = spec.positioning.stations.empty() ? default_stations(*setup.sim.area_side)
                                                   : spec.positioning.stations;
    p.range_noise_std = spec.positioning.range_noise_std;
    setup.positioning = std::move(p);
  }
  return setup;
}

}  // namespace uavtrust
