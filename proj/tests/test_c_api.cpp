// SPDX-License-Identifier: Apache-2.0
// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "v2gsim/c_api.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifndef V2GSIM_TEST_CONFIG
#error "V2GSIM_TEST_CONFIG must name a configuration file"
#endif

TEST_SUITE("c_api") {

TEST_CASE("episode through the C interface") {
  char err[256] = {0};
  v2g_env *env = v2g_env_create(V2GSIM_TEST_CONFIG, "profit", err, sizeof err);
  REQUIRE_MESSAGE(env != nullptr, err);

  const size_t n_obs = v2g_env_observation_size(env);
  const size_t n_act = v2g_env_action_size(env);
  CHECK(n_obs > 0);
  CHECK(n_act == 10);
  double lo = 0.0, hi = 0.0;
  v2g_env_action_bounds(env, &lo, &hi);
  CHECK(lo == -1.0);
  CHECK(hi == 1.0);

  std::vector<double> obs(n_obs), act(n_act, 0.5);
  double reward = 0.0;
  int done = 0;
  CHECK(v2g_env_step(env, act.data(), n_act, obs.data(), n_obs, &reward, &done) ==
        V2G_ERR_STATE);
  CHECK(std::string(v2g_env_last_error(env)).size() > 0);

  REQUIRE(v2g_env_reset(env, 3, obs.data(), n_obs) == V2G_OK);
  CHECK(std::string(v2g_env_last_error(env)).empty());
  int steps = 0;
  double ret = 0.0;
  while (!done) {
    REQUIRE(v2g_env_step(env, act.data(), n_act, obs.data(), n_obs, &reward,
                         &done) == V2G_OK);
    ret += reward;
    ++steps;
  }
  CHECK(steps == 85);
  CHECK(std::isfinite(ret));
  CHECK(v2g_env_step(env, act.data(), n_act, obs.data(), n_obs, &reward, &done) ==
        V2G_ERR_STATE);

  const size_t m = v2g_metric_count();
  std::vector<double> metrics(m);
  REQUIRE(v2g_env_metrics(env, metrics.data(), m) == V2G_OK);
  CHECK(std::string(v2g_metric_name(0)) == "energy_charged_kwh");
  CHECK(metrics[0] > 0.0);
  CHECK(v2g_env_metrics(env, metrics.data(), m - 1) == V2G_ERR_ARGUMENT);

  std::string path = std::string(V2GSIM_TEST_TMP) + "/c_api_replay.json";
  CHECK(v2g_env_save_replay(env, path.c_str()) == V2G_OK);
  std::FILE *f = std::fopen(path.c_str(), "r");
  CHECK(f != nullptr);
  if (f)
    std::fclose(f);
  std::remove(path.c_str());
  v2g_env_destroy(env);
}

TEST_CASE("argument errors") {
  char err[256] = {0};
  CHECK(v2g_env_create(nullptr, nullptr, err, sizeof err) == nullptr);
  CHECK(v2g_env_create("/nonexistent.yaml", nullptr, err, sizeof err) == nullptr);
  CHECK(std::string(err).size() > 0);
  CHECK(v2g_env_create(V2GSIM_TEST_CONFIG, "arbitrage", err, sizeof err) == nullptr);
  CHECK(v2g_env_reset(nullptr, 0, nullptr, 0) == V2G_ERR_ARGUMENT);

  v2g_env *env = v2g_env_create(V2GSIM_TEST_CONFIG, "pst", err, sizeof err);
  REQUIRE(env != nullptr);
  std::vector<double> obs(v2g_env_observation_size(env) + 1);
  CHECK(v2g_env_reset(env, 0, obs.data(), obs.size()) == V2G_ERR_ARGUMENT);
  double lo = 1.0, hi = 0.0;
  v2g_env_action_bounds(env, &lo, &hi);
  CHECK(lo == 0.0);
  v2g_env_destroy(env);
  v2g_env_destroy(nullptr);
}

}
