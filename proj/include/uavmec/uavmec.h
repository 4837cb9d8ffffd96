#ifndef UAVMEC_UAVMEC_H
#define UAVMEC_UAVMEC_H

/* C interface to the UAV edge-computing simulator. Structured data crosses
   the boundary as JSON text. Every call returns a status; on failure the
   message is available from uavmec_last_error() on the same thread. Strings
   returned through `char** out` must be released with uavmec_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(UAVMEC_BUILDING_LIBRARY)
#define UAVMEC_API __attribute__((visibility("default")))
#else
#define UAVMEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavmec_status {
  UAVMEC_OK = 0,
  UAVMEC_ERR_CONFIG = 1,
  UAVMEC_ERR_DOMAIN = 2,
  UAVMEC_ERR_INFEASIBLE = 3,
  UAVMEC_ERR_INVALID_DECISION = 4,
  UAVMEC_ERR_NUMERIC = 5,
  UAVMEC_ERR_REFUSED = 6,
  UAVMEC_ERR_SHAPE = 7,
  UAVMEC_ERR_IO = 8,
  UAVMEC_ERR_NULL_ARGUMENT = 9,
  UAVMEC_ERR_INTERNAL = 10
} uavmec_status;

typedef enum uavmec_run_mode {
  UAVMEC_MODE_RUN = 0,
  UAVMEC_MODE_TRAIN = 1,
  UAVMEC_MODE_EVAL = 2
} uavmec_run_mode;

typedef struct uavmec_experiment uavmec_experiment;
typedef struct uavmec_scenario uavmec_scenario;

UAVMEC_API const char* uavmec_version(void);
UAVMEC_API const char* uavmec_last_error(void);
UAVMEC_API const char* uavmec_status_name(uavmec_status status);
UAVMEC_API void uavmec_string_free(char* s);

/* Experiments. `spec_json` may be NULL or "{}" for all defaults. */
UAVMEC_API uavmec_status uavmec_experiment_create(const char* spec_json, uavmec_experiment** out);
UAVMEC_API uavmec_status uavmec_experiment_load(const char* path, uavmec_experiment** out);
UAVMEC_API void uavmec_experiment_free(uavmec_experiment* exp);

/* Overrides; each revalidates the whole spec. */
UAVMEC_API uavmec_status uavmec_experiment_set_seeds(uavmec_experiment* exp, const uint64_t* seeds,
                                                     size_t count);
UAVMEC_API uavmec_status uavmec_experiment_set_output_dir(uavmec_experiment* exp, const char* dir);
UAVMEC_API uavmec_status uavmec_experiment_set_policy(uavmec_experiment* exp, const char* policy);
UAVMEC_API uavmec_status uavmec_experiment_set_checkpoint(uavmec_experiment* exp, const char* path);
UAVMEC_API uavmec_status uavmec_experiment_set_episodes(uavmec_experiment* exp, int episodes);
UAVMEC_API uavmec_status uavmec_experiment_set_sweep(uavmec_experiment* exp, const char* axis,
                                                     const double* values, size_t count);

/* Resolved spec as JSON. */
UAVMEC_API uavmec_status uavmec_experiment_spec(const uavmec_experiment* exp, char** out_json);

/* Runs every sweep point and seed, writing artifacts under the output
   directory. `out_json` (optional) receives the experiment summary. */
UAVMEC_API uavmec_status uavmec_experiment_run(const uavmec_experiment* exp, uavmec_run_mode mode,
                                               char** out_json);

/* First directory is the candidate. `out_dir` may be NULL to skip files. */
UAVMEC_API uavmec_status uavmec_compare(const char* const* run_dirs, size_t count,
                                        const char* out_dir, char** out_json);

/* Scenarios: `config_json` holds optional "scenario" and "channel" objects. */
UAVMEC_API uavmec_status uavmec_scenario_create(const char* config_json, uint64_t seed,
                                                uavmec_scenario** out);
UAVMEC_API uavmec_status uavmec_scenario_from_snapshot(const char* snapshot_json,
                                                       uavmec_scenario** out);
UAVMEC_API void uavmec_scenario_free(uavmec_scenario* scenario);
UAVMEC_API uavmec_status uavmec_scenario_snapshot(const uavmec_scenario* scenario, char** out_json);
UAVMEC_API uavmec_status uavmec_scenario_slot_context(const uavmec_scenario* scenario, int slot,
                                                      uint64_t stream, char** out_json);

/* Standalone per-slot allocator on a slot-context or snapshot document.
   With `with_oracle` the exhaustive optimum and CD's gap are attached. */
UAVMEC_API uavmec_status uavmec_allocate(const char* context_json, int with_oracle,
                                         char** out_json);

/* Closed-form shares against the numeric convex solver on random instances. */
UAVMEC_API uavmec_status uavmec_oracle_check(uint64_t seed, int instances, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
