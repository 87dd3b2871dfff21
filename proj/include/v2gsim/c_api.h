/* SPDX-License-Identifier: Apache-2.0 */
#ifndef V2GSIM_C_API_H
#define V2GSIM_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes. */
#define V2G_OK 0
#define V2G_ERR_ARGUMENT -1 /* null handle, wrong buffer length */
#define V2G_ERR_STATE -2    /* step before reset or after done */
#define V2G_ERR_IO -3
#define V2G_ERR_INTERNAL -4

typedef struct v2g_env v2g_env;

/* problem may be NULL (keep the config's), "pst" or "profit".
 * Returns NULL on failure and writes a message into err. */
v2g_env *v2g_env_create(const char *config_path, const char *problem,
                        char *err, size_t err_len);
void v2g_env_destroy(v2g_env *env);

size_t v2g_env_observation_size(const v2g_env *env);
size_t v2g_env_action_size(const v2g_env *env);
void v2g_env_action_bounds(const v2g_env *env, double *low, double *high);

int v2g_env_reset(v2g_env *env, uint64_t seed, double *obs, size_t obs_len);
int v2g_env_step(v2g_env *env, const double *action, size_t action_len,
                 double *obs, size_t obs_len, double *reward, int *done);

size_t v2g_metric_count(void);
const char *v2g_metric_name(size_t index);
/* Undefined metrics are written as NaN. */
int v2g_env_metrics(const v2g_env *env, double *out, size_t len);

int v2g_env_save_replay(const v2g_env *env, const char *path);

/* Message of the last failed call on this handle ("" if none). */
const char *v2g_env_last_error(const v2g_env *env);

#ifdef __cplusplus
}
#endif

#endif
