// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/ev/registry.hpp"

#include "v2gsim/common/csv.hpp"
#include "v2gsim/common/errors.hpp"

#include <cmath>

namespace v2g::ev {

namespace {

struct Row {
  const char *name;
  std::int64_t sales;
  double capacity;
  double ac;
  double dc;
  double dis;
};

constexpr Row kRegistry[] = {
    {"Tesla Model 3", 45545, 57.5, 11.0, 170.0, 0.0},
    {"Kia Niro", 23105, 64.8, 11.0, 80.0, 0.0},
    {"Volkswagen ID.3", 19950, 58.0, 11.0, 120.0, 0.0},
    {"Hyundai Kona", 17752, 64.0, 11.0, 77.0, 0.0},
    {"Tesla Model Y", 16186, 57.5, 11.0, 170.0, 0.0},
    {"Skoda Enyaq", 16165, 58.0, 11.0, 124.0, 0.0},
    {"Peugeot 208", 14017, 46.3, 7.4, 101.0, 0.0},
    {"Renault Zoe", 14008, 52.0, 22.0, 46.0, 0.0},
    {"Volkswagen ID.4", 13283, 77.0, 11.0, 135.0, 10.0},
    {"Volvo XC40", 12520, 66.0, 11.0, 135.0, 0.0},
    {"Nissan Leaf", 11977, 39.0, 3.6, 46.0, 7.0},
    {"Tesla Model S", 10899, 75.0, 11.0, 250.0, 0.0},
};

EvSpec make_spec(const std::string &name, std::int64_t sales, double capacity,
                 double ac, double dc, double dis, const SpecDefaults &d) {
  EvSpec s;
  s.model_name = name;
  s.sales_weight = sales;
  s.max_capacity_kwh = capacity;
  s.min_capacity_kwh = d.min_capacity_fraction * capacity;
  s.max_ac_charge_kw = ac;
  s.max_dc_charge_kw = dc;
  s.max_discharge_kw = dis;
  s.charge_efficiency = d.charge_efficiency;
  s.discharge_efficiency = d.discharge_efficiency;
  s.transition_soc = d.transition_soc;
  return s;
}

} // namespace

std::vector<EvSpec> default_registry(const SpecDefaults &defaults) {
  std::vector<EvSpec> out;
  for (const auto &r : kRegistry)
    out.push_back(
        make_spec(r.name, r.sales, r.capacity, r.ac, r.dc, r.dis, defaults));
  return out;
}

std::vector<EvSpec> load_registry_csv(const std::filesystem::path &path,
                                      const SpecDefaults &defaults) {
  auto table = csv::read(path);
  if (table.header.size() != 6)
    throw DataError(path.string() + ": expected 6 columns "
                                    "(name,sales,capacity_kwh,ac_max_kw,"
                                    "dc_max_kw,discharge_max_kw)");
  std::vector<EvSpec> out;
  const auto origin = path.string();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &r = table.rows[i];
    int line = table.line_numbers[i];
    double sales = csv::to_double(r[1], origin, line, 2);
    if (sales < 0 || std::floor(sales) != sales)
      throw DataError(origin + ":" + std::to_string(line) +
                      ": column 2: sales must be a nonnegative integer");
    double dis = (r[5].empty() || r[5] == "-")
                     ? 0.0
                     : csv::to_double(r[5], origin, line, 6);
    auto spec = make_spec(r[0], static_cast<std::int64_t>(sales),
                          csv::to_double(r[2], origin, line, 3),
                          csv::to_double(r[3], origin, line, 4),
                          csv::to_double(r[4], origin, line, 5), dis, defaults);
    try {
      spec.validate();
    } catch (const ConfigError &e) {
      throw DataError(origin + ":" + std::to_string(line) + ": " + e.what());
    }
    out.push_back(std::move(spec));
  }
  return out;
}

void save_registry_csv(const std::filesystem::path &path,
                       const std::vector<EvSpec> &registry) {
  csv::Table t;
  t.header = {"name",      "sales",     "capacity_kwh",
              "ac_max_kw", "dc_max_kw", "discharge_max_kw"};
  for (const auto &s : registry) {
    t.rows.push_back({s.model_name, std::to_string(s.sales_weight),
                      csv::format_exact(s.max_capacity_kwh),
                      csv::format_exact(s.max_ac_charge_kw),
                      csv::format_exact(s.max_dc_charge_kw),
                      s.can_discharge() ? csv::format_exact(s.max_discharge_kw)
                                        : std::string("-")});
  }
  csv::write(path, t);
}

} // namespace v2g::ev
