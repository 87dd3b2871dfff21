// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/engine/config.hpp"

#include "v2gsim/common/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace v2g {

using nlohmann::json;

std::string to_string(Problem p) {
  return p == Problem::Pst ? "pst" : "profit";
}

Problem problem_from_string(const std::string &s) {
  if (s == "pst")
    return Problem::Pst;
  if (s == "profit")
    return Problem::Profit;
  throw ConfigError("simulation.problem", "expected pst or profit");
}

int SimConfig::total_evse() const {
  int n = 0;
  for (const auto &c : chargers)
    n += c.evse_count;
  return n;
}

void SimConfig::validate() const {
  if (timescale_minutes < 1)
    throw ConfigError("simulation.timescale_minutes", "must be >= 1");
  if (sim_length < 1)
    throw ConfigError("simulation.sim_length", "must be >= 1");
  if (forecast_sigma < 0.0)
    throw ConfigError("simulation.forecast_sigma", "must be >= 0");
  if (forecast_horizon < 1)
    throw ConfigError("simulation.forecast_horizon", "must be >= 1");
  if (discharge_price_factor < 0.0)
    throw ConfigError("simulation.discharge_price_factor", "must be >= 0");
  if (setpoint_multiplier < 0.0)
    throw ConfigError("simulation.setpoint_multiplier", "must be >= 0");
  if (setpoint_samples < 1)
    throw ConfigError("simulation.setpoint_samples", "must be >= 1");
  if (scenario == behavior::Scenario::Custom && behavior_dir.empty())
    throw ConfigError("simulation.behavior_dir",
                      "required for the custom scenario");
  if (ev_spec_source != "registry" && ev_spec_source != "custom")
    throw ConfigError("ev.spec_source", "expected registry or custom");
  if (ev_spec_source == "custom" && custom_specs.empty())
    throw ConfigError("ev.specs", "custom spec source needs at least one spec");
  for (const auto &s : custom_specs)
    s.validate();
  if (!(desired_soc > 0.0 && desired_soc <= 1.0))
    throw ConfigError("ev.desired_soc", "must lie in (0, 1]");
  if (!(battery_age_days > 0.0))
    throw ConfigError("ev.battery_age_days", "must be positive");
  if (!(spec_defaults.min_capacity_fraction >= 0.0 &&
        spec_defaults.min_capacity_fraction < 1.0))
    throw ConfigError("ev.min_capacity_fraction", "must lie in [0, 1)");
  if (!(spec_defaults.transition_soc > 0.0 && spec_defaults.transition_soc <= 1.0))
    throw ConfigError("ev.transition_soc", "must lie in (0, 1]");
  if (transformers.empty())
    throw ConfigError("transformer", "at least one transformer is required");
  for (std::size_t w = 0; w < transformers.size(); ++w)
    transformers[w].validate("transformer[" + std::to_string(w) + "]");
  if (chargers.empty())
    throw ConfigError("charging_station", "at least one charger is required");
  for (std::size_t c = 0; c < chargers.size(); ++c) {
    const std::string field = "charging_station.chargers[" + std::to_string(c) + "]";
    chargers[c].validate(field);
    if (chargers[c].transformer < 0 ||
        chargers[c].transformer >= static_cast<int>(transformers.size()))
      throw ConfigError(field + ".transformer",
                        "references a transformer that does not exist");
  }
}

std::vector<station::ChargerSpec>
uniform_chargers(int count, const station::ChargerSpec &proto,
                 int transformer_count) {
  std::vector<station::ChargerSpec> out;
  for (int i = 0; i < count; ++i) {
    auto c = proto;
    c.id = "cs" + std::to_string(i);
    c.transformer = transformer_count > 0 ? i % transformer_count : 0;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Tracks consumed keys of one JSON object so leftovers can be rejected.
class Reader {
public:
  Reader(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_, "expected a mapping");
  }

  bool has(const char *key) const { return j_.contains(key); }

  const json &raw(const char *key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string field(const char *key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T> void get(const char *key, T &out) {
    if (!j_.contains(key))
      return;
    used_.insert(key);
    const json &v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean())
          throw ConfigError(field(key), "expected true or false");
        out = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer())
          throw ConfigError(field(key), "expected an integer");
        out = v.get<T>();
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number())
          throw ConfigError(field(key), "expected a number");
        out = v.get<T>();
      } else {
        if (!v.is_string())
          throw ConfigError(field(key), "expected a string");
        out = v.get<std::string>();
      }
    } catch (const json::exception &e) {
      throw ConfigError(field(key), e.what());
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw ConfigError(field(it.key().c_str()), "unknown key");
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> used_;
};

grid::TransformerSpec make_transformer(std::string id) {
  grid::TransformerSpec t;
  t.id = std::move(id);
  return t;
}

const char *type_name(ev::ChargeMode m) {
  return m == ev::ChargeMode::AC ? "AC" : "DC";
}

ev::ChargeMode type_from(const std::string &s, const std::string &field) {
  if (s == "AC" || s == "ac")
    return ev::ChargeMode::AC;
  if (s == "DC" || s == "dc")
    return ev::ChargeMode::DC;
  throw ConfigError(field, "expected AC or DC");
}

void read_charger_fields(Reader &r, station::ChargerSpec &c) {
  r.get("id", c.id);
  r.get("transformer", c.transformer);
  r.get("evse_count", c.evse_count);
  if (r.has("type")) {
    std::string t;
    r.get("type", t);
    c.type = type_from(t, r.field("type"));
  }
  r.get("voltage", c.voltage);
  r.get("phases", c.phases);
  r.get("min_station_current", c.min_station_current);
  r.get("max_station_current", c.max_station_current);
  r.get("min_charge_current", c.min_charge_current);
  r.get("max_charge_current", c.max_charge_current);
  r.get("min_discharge_current", c.min_discharge_current);
  r.get("max_discharge_current", c.max_discharge_current);
}

json charger_json(const station::ChargerSpec &c) {
  return {{"id", c.id},
          {"transformer", c.transformer},
          {"evse_count", c.evse_count},
          {"type", type_name(c.type)},
          {"voltage", c.voltage},
          {"phases", c.phases},
          {"min_station_current", c.min_station_current},
          {"max_station_current", c.max_station_current},
          {"min_charge_current", c.min_charge_current},
          {"max_charge_current", c.max_charge_current},
          {"min_discharge_current", c.min_discharge_current},
          {"max_discharge_current", c.max_discharge_current}};
}

grid::TransformerSpec read_transformer(const json &j, const std::string &path) {
  Reader r(j, path);
  grid::TransformerSpec t;
  r.get("id", t.id);
  r.get("min_power_kw", t.min_power_kw);
  r.get("max_power_kw", t.max_power_kw);
  r.get("load_peak_kw", t.load_peak_kw);
  r.get("pv_peak_kw", t.pv_peak_kw);
  r.get("load_source", t.load_csv);
  r.get("pv_source", t.pv_csv);
  if (t.load_csv == "builtin")
    t.load_csv.clear();
  if (t.pv_csv == "builtin")
    t.pv_csv.clear();
  r.get("dr_notice_steps", t.dr_notice_steps);
  if (r.has("dr") && !r.raw("dr").is_null()) {
    Reader d(j.at("dr"), r.field("dr"));
    grid::DrEvent e;
    d.get("start_step", e.start_step);
    d.get("duration_steps", e.duration_steps);
    d.get("reduction_kw", e.reduction_kw);
    d.finish();
    t.dr = e;
  }
  r.finish();
  return t;
}

json transformer_json(const grid::TransformerSpec &t) {
  json j = {{"id", t.id},
            {"min_power_kw", t.min_power_kw},
            {"max_power_kw", t.max_power_kw},
            {"load_peak_kw", t.load_peak_kw},
            {"pv_peak_kw", t.pv_peak_kw},
            {"load_source", t.load_csv.empty() ? "builtin" : t.load_csv},
            {"pv_source", t.pv_csv.empty() ? "builtin" : t.pv_csv},
            {"dr_notice_steps", t.dr_notice_steps},
            {"dr", nullptr}};
  if (t.dr)
    j["dr"] = {{"start_step", t.dr->start_step},
               {"duration_steps", t.dr->duration_steps},
               {"reduction_kw", t.dr->reduction_kw}};
  return j;
}

ev::EvSpec read_spec(const json &j, const std::string &path,
                     const ev::SpecDefaults &d) {
  Reader r(j, path);
  ev::EvSpec s;
  r.get("model_name", s.model_name);
  r.get("max_capacity_kwh", s.max_capacity_kwh);
  s.min_capacity_kwh = d.min_capacity_fraction * s.max_capacity_kwh;
  s.transition_soc = d.transition_soc;
  s.charge_efficiency = d.charge_efficiency;
  s.discharge_efficiency = d.discharge_efficiency;
  r.get("min_capacity_kwh", s.min_capacity_kwh);
  r.get("max_ac_charge_kw", s.max_ac_charge_kw);
  r.get("min_ac_charge_kw", s.min_ac_charge_kw);
  r.get("max_dc_charge_kw", s.max_dc_charge_kw);
  r.get("min_dc_charge_kw", s.min_dc_charge_kw);
  r.get("max_discharge_kw", s.max_discharge_kw);
  r.get("min_discharge_kw", s.min_discharge_kw);
  r.get("charge_efficiency", s.charge_efficiency);
  r.get("discharge_efficiency", s.discharge_efficiency);
  r.get("transition_soc", s.transition_soc);
  r.get("sales_weight", s.sales_weight);
  r.finish();
  return s;
}

} // namespace

json spec_to_json(const ev::EvSpec &s) {
  return {{"model_name", s.model_name},
          {"max_capacity_kwh", s.max_capacity_kwh},
          {"min_capacity_kwh", s.min_capacity_kwh},
          {"max_ac_charge_kw", s.max_ac_charge_kw},
          {"min_ac_charge_kw", s.min_ac_charge_kw},
          {"max_dc_charge_kw", s.max_dc_charge_kw},
          {"min_dc_charge_kw", s.min_dc_charge_kw},
          {"max_discharge_kw", s.max_discharge_kw},
          {"min_discharge_kw", s.min_discharge_kw},
          {"charge_efficiency", s.charge_efficiency},
          {"discharge_efficiency", s.discharge_efficiency},
          {"transition_soc", s.transition_soc},
          {"sales_weight", s.sales_weight}};
}

ev::EvSpec spec_from_json(const json &j, const std::string &path) {
  ev::SpecDefaults d;
  return read_spec(j, path, d);
}

nlohmann::json config_to_json(const SimConfig &c) {
  json sim = {{"timescale_minutes", c.timescale_minutes},
              {"sim_length", c.sim_length},
              {"start_datetime", c.start.to_string()},
              {"scenario", behavior::to_string(c.scenario)},
              {"problem", to_string(c.problem)},
              {"seed", c.seed},
              {"v2g_enabled", c.v2g_enabled},
              {"forecast_sigma", c.forecast_sigma},
              {"forecast_horizon", c.forecast_horizon},
              {"price_source", c.price_source},
              {"discharge_price_factor", c.discharge_price_factor},
              {"setpoint_multiplier", c.setpoint_multiplier},
              {"setpoint_samples", c.setpoint_samples},
              {"behavior_dir", c.behavior_dir}};
  json specs = json::array();
  for (const auto &s : c.custom_specs)
    specs.push_back(spec_to_json(s));
  const auto &g = c.degradation;
  json ev = {{"spec_source", c.ev_spec_source},
             {"registry_csv", c.registry_csv},
             {"specs", specs},
             {"min_capacity_fraction", c.spec_defaults.min_capacity_fraction},
             {"transition_soc", c.spec_defaults.transition_soc},
             {"charge_efficiency", c.spec_defaults.charge_efficiency},
             {"discharge_efficiency", c.spec_defaults.discharge_efficiency},
             {"desired_soc", c.desired_soc},
             {"battery_age_days", c.battery_age_days},
             {"degradation",
              {{"e0", g.e0},
               {"e1", g.e1},
               {"e2", g.e2},
               {"temperature_c", g.temperature_c},
               {"z0", g.z0},
               {"z1", g.z1},
               {"lifetime_throughput_kwh", g.lifetime_throughput_kwh}}}};
  json chargers = json::array();
  for (const auto &ch : c.chargers)
    chargers.push_back(charger_json(ch));
  json trs = json::array();
  for (const auto &t : c.transformers)
    trs.push_back(transformer_json(t));
  return {{"simulation", sim},
          {"ev", ev},
          {"charging_station", {{"chargers", chargers}}},
          {"transformer", trs}};
}

SimConfig config_from_json(const nlohmann::json &j) {
  SimConfig c;
  Reader root(j, "");
  if (root.has("simulation")) {
    Reader r(root.raw("simulation"), "simulation");
    r.get("timescale_minutes", c.timescale_minutes);
    r.get("sim_length", c.sim_length);
    if (r.has("start_datetime")) {
      std::string s;
      r.get("start_datetime", s);
      try {
        c.start = CalendarTime::parse(s);
      } catch (const std::exception &e) {
        throw ConfigError("simulation.start_datetime", e.what());
      }
    }
    if (r.has("scenario")) {
      std::string s;
      r.get("scenario", s);
      c.scenario = behavior::scenario_from_string(s);
    }
    if (r.has("problem")) {
      std::string s;
      r.get("problem", s);
      c.problem = problem_from_string(s);
    }
    r.get("seed", c.seed);
    r.get("v2g_enabled", c.v2g_enabled);
    r.get("forecast_sigma", c.forecast_sigma);
    r.get("forecast_horizon", c.forecast_horizon);
    r.get("price_source", c.price_source);
    r.get("discharge_price_factor", c.discharge_price_factor);
    r.get("setpoint_multiplier", c.setpoint_multiplier);
    r.get("setpoint_samples", c.setpoint_samples);
    r.get("behavior_dir", c.behavior_dir);
    r.finish();
  }
  if (root.has("ev")) {
    Reader r(root.raw("ev"), "ev");
    r.get("spec_source", c.ev_spec_source);
    r.get("registry_csv", c.registry_csv);
    r.get("min_capacity_fraction", c.spec_defaults.min_capacity_fraction);
    r.get("transition_soc", c.spec_defaults.transition_soc);
    r.get("charge_efficiency", c.spec_defaults.charge_efficiency);
    r.get("discharge_efficiency", c.spec_defaults.discharge_efficiency);
    r.get("desired_soc", c.desired_soc);
    r.get("battery_age_days", c.battery_age_days);
    if (r.has("specs")) {
      const json &arr = r.raw("specs");
      if (!arr.is_array())
        throw ConfigError("ev.specs", "expected a list");
      for (std::size_t i = 0; i < arr.size(); ++i)
        c.custom_specs.push_back(read_spec(
            arr[i], "ev.specs[" + std::to_string(i) + "]", c.spec_defaults));
    }
    if (r.has("degradation")) {
      Reader d(r.raw("degradation"), "ev.degradation");
      auto &g = c.degradation;
      d.get("e0", g.e0);
      d.get("e1", g.e1);
      d.get("e2", g.e2);
      d.get("temperature_c", g.temperature_c);
      d.get("z0", g.z0);
      d.get("z1", g.z1);
      d.get("lifetime_throughput_kwh", g.lifetime_throughput_kwh);
      d.finish();
    }
    r.finish();
  }
  if (root.has("transformer")) {
    const json &t = root.raw("transformer");
    if (t.is_array()) {
      for (std::size_t i = 0; i < t.size(); ++i)
        c.transformers.push_back(
            read_transformer(t[i], "transformer[" + std::to_string(i) + "]"));
    } else {
      c.transformers.push_back(read_transformer(t, "transformer"));
    }
    for (std::size_t i = 0; i < c.transformers.size(); ++i)
      if (c.transformers[i].id.empty())
        c.transformers[i].id = "tr" + std::to_string(i);
  } else {
    c.transformers.push_back(make_transformer("tr0"));
  }
  if (root.has("charging_station")) {
    Reader r(root.raw("charging_station"), "charging_station");
    station::ChargerSpec proto;
    read_charger_fields(r, proto);
    int count = 0;
    r.get("count", count);
    if (r.has("chargers")) {
      const json &arr = r.raw("chargers");
      if (!arr.is_array())
        throw ConfigError("charging_station.chargers", "expected a list");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Reader e(arr[i], "charging_station.chargers[" + std::to_string(i) + "]");
        auto ch = proto;
        ch.id = "cs" + std::to_string(i);
        read_charger_fields(e, ch);
        e.finish();
        c.chargers.push_back(std::move(ch));
      }
    } else {
      if (count < 0)
        throw ConfigError("charging_station.count", "must be >= 0");
      c.chargers = uniform_chargers(count, proto,
                                    static_cast<int>(c.transformers.size()));
    }
    r.finish();
  }
  root.finish();
  c.validate();
  return c;
}

namespace {

json yaml_to_json(const YAML::Node &n) {
  switch (n.Type()) {
  case YAML::NodeType::Null:
  case YAML::NodeType::Undefined:
    return nullptr;
  case YAML::NodeType::Sequence: {
    json a = json::array();
    for (const auto &e : n)
      a.push_back(yaml_to_json(e));
    return a;
  }
  case YAML::NodeType::Map: {
    json o = json::object();
    for (const auto &kv : n)
      o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
    return o;
  }
  case YAML::NodeType::Scalar:
    break;
  }
  const std::string s = n.Scalar();
  if (n.Tag() == "!")
    return s; // quoted
  if (s == "true" || s == "True" || s == "yes")
    return true;
  if (s == "false" || s == "False" || s == "no")
    return false;
  if (s == "~" || s == "null")
    return nullptr;
  {
    long long v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size())
      return v;
    unsigned long long u;
    auto [pu, ecu] = std::from_chars(s.data(), s.data() + s.size(), u);
    if (ecu == std::errc() && pu == s.data() + s.size())
      return u;
  }
  try {
    std::size_t used = 0;
    double d = std::stod(s, &used);
    if (used == s.size())
      return d;
  } catch (const std::exception &) {
  }
  return s;
}

} // namespace

SimConfig parse_config_yaml(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw ConfigError("<document>", e.what());
  }
  if (!root.IsMap())
    throw ConfigError("<document>", "expected a mapping at the top level");
  return config_from_json(yaml_to_json(root));
}

SimConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config_yaml(ss.str());
  // Relative data paths resolve against the config's directory.
  auto base = path.parent_path();
  auto fix = [&](std::string &p) {
    if (!p.empty() && p != "builtin" && std::filesystem::path(p).is_relative())
      p = (base / p).string();
  };
  fix(cfg.price_source);
  fix(cfg.behavior_dir);
  fix(cfg.registry_csv);
  for (auto &t : cfg.transformers) {
    fix(t.load_csv);
    fix(t.pv_csv);
  }
  return cfg;
}

namespace {

void emit(YAML::Emitter &out, const json &j) {
  if (j.is_object()) {
    out << YAML::BeginMap;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out << YAML::Key << it.key() << YAML::Value;
      emit(out, it.value());
    }
    out << YAML::EndMap;
  } else if (j.is_array()) {
    out << YAML::BeginSeq;
    for (const auto &e : j)
      emit(out, e);
    out << YAML::EndSeq;
  } else if (j.is_string()) {
    out << YAML::DoubleQuoted << j.get<std::string>();
  } else if (j.is_boolean()) {
    out << j.get<bool>();
  } else if (j.is_number_unsigned()) {
    out << j.get<std::uint64_t>();
  } else if (j.is_number_integer()) {
    out << j.get<long long>();
  } else if (j.is_number()) {
    out << YAML::Precision(17) << j.get<double>();
  } else {
    out << YAML::Null;
  }
}

} // namespace

std::string config_to_yaml(const SimConfig &cfg) {
  YAML::Emitter out;
  emit(out, config_to_json(cfg));
  return std::string(out.c_str()) + "\n";
}

SimConfig default_config() {
  SimConfig c;
  c.transformers.push_back(make_transformer("tr0"));
  c.chargers = uniform_chargers(10, station::ChargerSpec{}, 1);
  return c;
}

std::vector<ev::EvSpec> resolve_registry(const SimConfig &cfg) {
  if (cfg.ev_spec_source == "custom")
    return cfg.custom_specs;
  if (!cfg.registry_csv.empty())
    return ev::load_registry_csv(cfg.registry_csv, cfg.spec_defaults);
  return ev::default_registry(cfg.spec_defaults);
}

behavior::BehaviorModel resolve_behavior(const SimConfig &cfg) {
  behavior::BehaviorModel m;
  if (!cfg.behavior_dir.empty())
    m = behavior::load_behavior_csv(cfg.behavior_dir, cfg.scenario);
  else
    m = behavior::default_behavior(cfg.scenario);
  m.desired_soc = cfg.desired_soc;
  return m;
}

} // namespace v2g
