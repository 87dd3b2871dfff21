// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/simulator.hpp"

#include <cstddef>
#include <vector>

namespace v2g::rl {

/// [t, P_set_t, P_tot_{t-1}] then per slot [d, E - E_arr, t - t_arr].
std::size_t pst_observation_size(int slots);
std::vector<double> encode_pst(const Simulator &sim);

/// [t, P_tot_{t-1}, c_ch over h] then per transformer [load + PV forecast
/// over h, visible DR over h] then per slot [SoC, t_dep - t].
std::size_t profit_observation_size(int horizon, int transformers, int slots);
std::vector<double> encode_profit(const Simulator &sim);

std::size_t observation_size(const Simulator &sim);
std::vector<double> encode(const Simulator &sim);

} // namespace v2g::rl
