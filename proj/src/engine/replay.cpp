// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/engine/replay.hpp"

#include "v2gsim/common/errors.hpp"

#include <fstream>
#include <sstream>

namespace v2g {

using nlohmann::json;

nlohmann::json replay_to_json(const Replay &r) {
  json sessions = json::array();
  for (const auto &s : r.sessions) {
    const auto &e = s.session;
    sessions.push_back({{"id", e.id},
                        {"slot", s.slot},
                        {"t_arr", e.arrival_step},
                        {"t_dep", e.departure_step},
                        {"E_arr", e.arrival_energy_kwh},
                        {"E_target", e.target_energy_kwh},
                        {"battery_age_days", e.battery_age_days},
                        {"spec", spec_to_json(e.spec)}});
  }
  json trs = json::array();
  for (const auto &t : r.series.transformers)
    trs.push_back({{"load", t.load}, {"pv", t.pv}, {"dr", t.dr}});
  return {{"format_version", r.format_version},
          {"rng_seed", r.seed},
          {"config", config_to_json(r.config)},
          {"sessions", sessions},
          {"series",
           {{"charge_price", r.series.charge_price},
            {"discharge_price", r.series.discharge_price},
            {"setpoint", r.series.setpoint},
            {"transformers", trs}}},
          {"dropped_arrivals", r.dropped}};
}

Replay replay_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("format_version"))
    throw ReplayError("replay: missing format_version");
  Replay r;
  try {
    r.format_version = j.at("format_version").get<int>();
    if (r.format_version != kReplayFormatVersion)
      throw ReplayError("replay: unsupported format_version " +
                        std::to_string(r.format_version) + " (expected " +
                        std::to_string(kReplayFormatVersion) + ")");
    r.seed = j.at("rng_seed").get<std::uint64_t>();
    r.config = config_from_json(j.at("config"));
    for (const auto &s : j.at("sessions")) {
      ScheduledSession ss;
      ss.slot = s.at("slot").get<int>();
      auto &e = ss.session;
      e.id = s.at("id").get<int>();
      e.arrival_step = s.at("t_arr").get<int>();
      e.departure_step = s.at("t_dep").get<int>();
      e.arrival_energy_kwh = s.at("E_arr").get<double>();
      e.energy_kwh = e.arrival_energy_kwh;
      e.target_energy_kwh = s.at("E_target").get<double>();
      e.battery_age_days = s.at("battery_age_days").get<double>();
      e.spec = spec_from_json(s.at("spec"), "sessions.spec");
      r.sessions.push_back(std::move(ss));
    }
    const auto &ser = j.at("series");
    r.series.charge_price = ser.at("charge_price").get<std::vector<double>>();
    r.series.discharge_price =
        ser.at("discharge_price").get<std::vector<double>>();
    r.series.setpoint = ser.at("setpoint").get<std::vector<double>>();
    for (const auto &t : ser.at("transformers")) {
      grid::TransformerSeries ts;
      ts.load = t.at("load").get<std::vector<double>>();
      ts.pv = t.at("pv").get<std::vector<double>>();
      ts.dr = t.at("dr").get<std::vector<double>>();
      r.series.transformers.push_back(std::move(ts));
    }
    r.dropped = j.at("dropped_arrivals").get<std::vector<int>>();
  } catch (const json::exception &e) {
    throw ReplayError(std::string("replay: ") + e.what());
  } catch (const ConfigError &e) {
    throw ReplayError(std::string("replay: config: ") + e.what());
  }
  const int T = r.config.sim_length;
  if (static_cast<int>(r.series.charge_price.size()) < T ||
      static_cast<int>(r.series.discharge_price.size()) < T ||
      static_cast<int>(r.series.setpoint.size()) < T ||
      r.series.transformers.size() != r.config.transformers.size())
    throw ReplayError("replay: series shorter than the simulation");
  return r;
}

std::string dump_replay(const Replay &r) {
  return replay_to_json(r).dump(1) + "\n";
}

Replay parse_replay(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ReplayError(std::string("replay: truncated or malformed: ") +
                      e.what());
  }
  return replay_from_json(j);
}

void save_replay(const std::filesystem::path &path, const Replay &r) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw ReplayError("cannot write replay " + path.string());
  out << dump_replay(r);
}

Replay load_replay(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ReplayError("cannot read replay " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_replay(ss.str());
}

} // namespace v2g
