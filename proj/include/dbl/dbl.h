/*
 * Copyright 2026 The dbl Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DBL_DBL_H
#define DBL_DBL_H

/*
 * C interface to the delayed-reward contextual bandit simulator.
 *
 * Objects are opaque handles created by *_load / *_parse / *_simulate and
 * released by the matching *_free. Every fallible call returns a dbl_status;
 * on failure dbl_last_error() describes the problem (the message is
 * thread-local and valid until the next call on the same thread).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(DBL_BUILDING_LIBRARY)
#define DBL_API __attribute__((visibility("default")))
#else
#define DBL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum dbl_status {
  DBL_OK = 0,
  DBL_ERR_VALIDATION = 2,
  DBL_ERR_IO = 3,
  DBL_ERR_STARVATION = 4,
  DBL_ERR_ARGUMENT = 5,
  DBL_ERR_INTERNAL = 6
} dbl_status;

typedef struct dbl_scenario dbl_scenario;
typedef struct dbl_run dbl_run;

/* One round of a simulation. Arms are 1-based. */
typedef struct dbl_trace_row {
  uint64_t n;
  uint32_t arm;
  uint32_t greedy_arm;
  uint32_t opt_arm;
  uint32_t m_per_axis;
  double inst_regret;
  double per_round_regret;
  double ratio_Rn;
  double pi_n;
  uint64_t observed;
  uint64_t pending;
  uint64_t never;
  int forced;
} dbl_trace_row;

DBL_API const char* dbl_version(void);
DBL_API const char* dbl_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

/* Honors the DBL_SEED environment variable. */
DBL_API dbl_status dbl_scenario_load(const char* path, dbl_scenario** out);
DBL_API dbl_status dbl_scenario_parse(const char* json_text, dbl_scenario** out);
DBL_API void dbl_scenario_free(dbl_scenario* scenario);

DBL_API const char* dbl_scenario_name(const dbl_scenario* scenario);
DBL_API size_t dbl_scenario_arms(const dbl_scenario* scenario);
DBL_API size_t dbl_scenario_dim(const dbl_scenario* scenario);
DBL_API uint64_t dbl_scenario_horizon(const dbl_scenario* scenario);
DBL_API uint64_t dbl_scenario_replications(const dbl_scenario* scenario);
DBL_API uint64_t dbl_scenario_master_seed(const dbl_scenario* scenario);
DBL_API uint64_t dbl_scenario_trace_thinning(const dbl_scenario* scenario);
DBL_API void dbl_scenario_set_master_seed(dbl_scenario* scenario, uint64_t seed);

/* Multi-line text report, one line per assumption. *all_pass may be NULL.
 * Release the text with dbl_string_free. */
DBL_API dbl_status dbl_check_assumptions(const dbl_scenario* scenario, char** report,
                                         int* all_pass);
DBL_API void dbl_string_free(char* text);

/* ---- single runs -------------------------------------------------------- */

DBL_API dbl_status dbl_run_simulate(const dbl_scenario* scenario, uint64_t replication,
                                    dbl_run** out);
DBL_API void dbl_run_free(dbl_run* run);
DBL_API size_t dbl_run_length(const dbl_run* run);
DBL_API int dbl_run_starved(const dbl_run* run);
/* index is 0-based; row index i holds round n = i + 1. */
DBL_API dbl_status dbl_run_row(const dbl_run* run, size_t index, dbl_trace_row* out);
/* R_n and r_n at round n (1-based). Either output may be NULL. */
DBL_API dbl_status dbl_run_metrics(const dbl_run* run, uint64_t n, double* ratio_Rn,
                                   double* per_round_regret);

/* ---- batch -------------------------------------------------------------- */

/* Runs every scenario listed in the manifest and writes trace, summary and
 * diagnostics CSVs under out_dir. Returns DBL_ERR_STARVATION (with all
 * outputs written) when at least one run starved. starved_runs may be NULL. */
DBL_API dbl_status dbl_run_grid(const char* manifest_path, const char* out_dir,
                                unsigned parallelism, size_t* starved_runs);

/* Runs the four Monte-Carlo tail experiments (trials >= 2000) and writes the
 * CSV report. all_pass may be NULL. */
DBL_API dbl_status dbl_bounds_report(const char* out_path, uint64_t seed, size_t trials,
                                     unsigned workers, int* all_pass);

/* ---- bound formulas ----------------------------------------------------- */

DBL_API dbl_status dbl_obs_count_tail_bound(double c_lower, double h, unsigned d,
                                            double partial_sum, double* out);
DBL_API dbl_status dbl_lemma1_bound(size_t cubes, double pi, uint64_t min_cube_count,
                                    double epsilon, double w, double v, double c, double* out);
DBL_API dbl_status dbl_bernoulli_sum_bound(double beta_sum, double* out);
DBL_API dbl_status dbl_weighted_noise_sum_bound(uint64_t n, double epsilon, double v, double c,
                                                double* out);

#ifdef __cplusplus
}
#endif

#endif /* DBL_DBL_H */
