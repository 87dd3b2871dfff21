// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/ev/ev_model.hpp"

#include <filesystem>
#include <vector>

namespace v2g::ev {

/// Fleet-wide defaults applied to registry rows, which only carry
/// capacity and power ratings.
struct SpecDefaults {
  double min_capacity_fraction = 0.1;
  double transition_soc = 0.8;
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  bool operator==(const SpecDefaults &) const = default;
};

/// 2023 Dutch registrations: twelve models with sales, capacity and
/// AC/DC/discharge power ratings.
std::vector<EvSpec> default_registry(const SpecDefaults &defaults = {});

/// Columns: name,sales,capacity_kwh,ac_max_kw,dc_max_kw,discharge_max_kw.
/// A discharge cell of "-" or empty means no V2G.
std::vector<EvSpec> load_registry_csv(const std::filesystem::path &path,
                                      const SpecDefaults &defaults = {});
void save_registry_csv(const std::filesystem::path &path,
                       const std::vector<EvSpec> &registry);

} // namespace v2g::ev
