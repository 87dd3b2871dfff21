// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/c_api.h"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/engine/replay.hpp"
#include "v2gsim/rl/env.hpp"

#include <cstring>
#include <memory>
#include <string>

struct v2g_env {
  std::unique_ptr<v2g::rl::Env> env;
  std::string error;
};

namespace {

void copy_message(const std::string &msg, char *err, size_t len) {
  if (!err || len == 0)
    return;
  std::strncpy(err, msg.c_str(), len - 1);
  err[len - 1] = '\0';
}

template <class F> int guarded(v2g_env *h, F &&f) {
  if (!h)
    return V2G_ERR_ARGUMENT;
  try {
    h->error.clear();
    return f();
  } catch (const v2g::SimulationError &e) {
    h->error = e.what();
    return V2G_ERR_STATE;
  } catch (const v2g::ReplayError &e) {
    h->error = e.what();
    return V2G_ERR_IO;
  } catch (const std::invalid_argument &e) {
    h->error = e.what();
    return V2G_ERR_ARGUMENT;
  } catch (const std::exception &e) {
    h->error = e.what();
    return V2G_ERR_INTERNAL;
  }
}

int copy_out(const std::vector<double> &v, double *out, size_t len) {
  if (!out || len != v.size())
    throw std::invalid_argument("observation buffer length " +
                                std::to_string(len) + " != " +
                                std::to_string(v.size()));
  std::memcpy(out, v.data(), v.size() * sizeof(double));
  return V2G_OK;
}

} // namespace

extern "C" {

v2g_env *v2g_env_create(const char *config_path, const char *problem,
                        char *err, size_t err_len) {
  if (!config_path) {
    copy_message("config_path is null", err, err_len);
    return nullptr;
  }
  try {
    auto cfg = v2g::load_config(config_path);
    if (problem)
      cfg.problem = v2g::problem_from_string(problem);
    auto h = std::make_unique<v2g_env>();
    h->env = std::make_unique<v2g::rl::Env>(std::move(cfg));
    return h.release();
  } catch (const std::exception &e) {
    copy_message(e.what(), err, err_len);
    return nullptr;
  }
}

void v2g_env_destroy(v2g_env *env) { delete env; }

size_t v2g_env_observation_size(const v2g_env *env) {
  return env ? env->env->observation_space().size : 0;
}

size_t v2g_env_action_size(const v2g_env *env) {
  return env ? env->env->action_space().size : 0;
}

void v2g_env_action_bounds(const v2g_env *env, double *low, double *high) {
  if (!env)
    return;
  auto box = env->env->action_space();
  if (low)
    *low = box.low;
  if (high)
    *high = box.high;
}

int v2g_env_reset(v2g_env *env, uint64_t seed, double *obs, size_t obs_len) {
  return guarded(env, [&] {
    if (obs_len != env->env->observation_space().size)
      throw std::invalid_argument("observation buffer has wrong length");
    return copy_out(env->env->reset(seed), obs, obs_len);
  });
}

int v2g_env_step(v2g_env *env, const double *action, size_t action_len,
                 double *obs, size_t obs_len, double *reward, int *done) {
  return guarded(env, [&] {
    if (!action || action_len != env->env->action_space().size)
      throw std::invalid_argument("action has wrong length");
    if (obs_len != env->env->observation_space().size)
      throw std::invalid_argument("observation buffer has wrong length");
    auto r = env->env->step(std::span<const double>(action, action_len));
    if (reward)
      *reward = r.reward;
    if (done)
      *done = r.done ? 1 : 0;
    return copy_out(r.observation, obs, obs_len);
  });
}

size_t v2g_metric_count(void) { return v2g::metrics::metric_columns().size(); }

const char *v2g_metric_name(size_t index) {
  const auto &cols = v2g::metrics::metric_columns();
  return index < cols.size() ? cols[index].c_str() : nullptr;
}

int v2g_env_metrics(const v2g_env *env, double *out, size_t len) {
  return guarded(const_cast<v2g_env *>(env), [&] {
    auto v = v2g::metrics::metric_values(env->env->metrics());
    if (!out || len != v.size())
      throw std::invalid_argument("metrics buffer has wrong length");
    std::memcpy(out, v.data(), v.size() * sizeof(double));
    return V2G_OK;
  });
}

int v2g_env_save_replay(const v2g_env *env, const char *path) {
  return guarded(const_cast<v2g_env *>(env), [&] {
    if (!path)
      throw std::invalid_argument("path is null");
    v2g::save_replay(path, env->env->replay());
    return V2G_OK;
  });
}

const char *v2g_env_last_error(const v2g_env *env) {
  return env ? env->error.c_str() : "null handle";
}

} // extern "C"
