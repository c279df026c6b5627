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

#include "dbl/dbl.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <exception>
#include <string>

#include "core/assumptions.hpp"
#include "core/bounds.hpp"
#include "core/errors.hpp"
#include "core/grid.hpp"
#include "core/scenario.hpp"
#include "core/simulator.hpp"

struct dbl_scenario {
  dbl::Scenario value;
};

struct dbl_run {
  dbl::RunResult value;
};

namespace {

thread_local std::string last_error;

dbl_status fail(dbl_status status, const char* message) {
  last_error = message;
  return status;
}

// Maps the core's exceptions onto status codes.
template <class Fn>
dbl_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const dbl::ValidationError& e) {
    return fail(DBL_ERR_VALIDATION, e.what());
  } catch (const dbl::IoError& e) {
    return fail(DBL_ERR_IO, e.what());
  } catch (const dbl::ArgumentError& e) {
    return fail(DBL_ERR_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(DBL_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(DBL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DBL_ERR_INTERNAL, "unknown error");
  }
}

dbl_status null_argument(const char* what) {
  return fail(DBL_ERR_ARGUMENT, (std::string(what) + " must not be NULL").c_str());
}

}  // namespace

extern "C" {

const char* dbl_version(void) { return "0.1.0"; }

const char* dbl_last_error(void) { return last_error.c_str(); }

dbl_status dbl_scenario_load(const char* path, dbl_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new dbl_scenario{dbl::load_scenario(path)};
    return DBL_OK;
  });
}

dbl_status dbl_scenario_parse(const char* json_text, dbl_scenario** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new dbl_scenario{dbl::parse_scenario(json_text)};
    return DBL_OK;
  });
}

void dbl_scenario_free(dbl_scenario* scenario) { delete scenario; }

const char* dbl_scenario_name(const dbl_scenario* s) { return s ? s->value.name.c_str() : ""; }
size_t dbl_scenario_arms(const dbl_scenario* s) { return s ? s->value.ell : 0; }
size_t dbl_scenario_dim(const dbl_scenario* s) { return s ? s->value.d : 0; }
uint64_t dbl_scenario_horizon(const dbl_scenario* s) { return s ? s->value.sim.horizon : 0; }
uint64_t dbl_scenario_replications(const dbl_scenario* s) { return s ? s->value.replications : 0; }
uint64_t dbl_scenario_master_seed(const dbl_scenario* s) { return s ? s->value.master_seed : 0; }
uint64_t dbl_scenario_trace_thinning(const dbl_scenario* s) {
  return s ? s->value.trace_thinning : 0;
}

void dbl_scenario_set_master_seed(dbl_scenario* s, uint64_t seed) {
  if (s) s->value.master_seed = seed;
}

dbl_status dbl_check_assumptions(const dbl_scenario* scenario, char** report, int* all_pass) {
  if (!scenario) return null_argument("scenario");
  if (!report) return null_argument("report");
  *report = nullptr;
  return guarded([&] {
    const auto r = dbl::check_assumptions(scenario->value);
    const std::string text = r.to_text();
    *report = static_cast<char*>(std::malloc(text.size() + 1));
    if (!*report) return fail(DBL_ERR_INTERNAL, "out of memory");
    std::memcpy(*report, text.c_str(), text.size() + 1);
    if (all_pass) *all_pass = r.all_pass() ? 1 : 0;
    return DBL_OK;
  });
}

void dbl_string_free(char* text) { std::free(text); }

dbl_status dbl_run_simulate(const dbl_scenario* scenario, uint64_t replication, dbl_run** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new dbl_run{dbl::run(scenario->value.sim, scenario->value.master_seed, replication)};
    return DBL_OK;
  });
}

void dbl_run_free(dbl_run* run) { delete run; }

size_t dbl_run_length(const dbl_run* run) { return run ? run->value.trace.size() : 0; }

int dbl_run_starved(const dbl_run* run) { return run && run->value.starved ? 1 : 0; }

dbl_status dbl_run_row(const dbl_run* run, size_t index, dbl_trace_row* out) {
  if (!run) return null_argument("run");
  if (!out) return null_argument("out");
  if (index >= run->value.trace.size()) return fail(DBL_ERR_ARGUMENT, "row index out of range");
  const auto& r = run->value.trace[index];
  out->n = r.n;
  out->arm = static_cast<uint32_t>(r.arm);
  out->greedy_arm = static_cast<uint32_t>(r.greedy_arm);
  out->opt_arm = static_cast<uint32_t>(r.opt_arm);
  out->m_per_axis = static_cast<uint32_t>(r.m_per_axis);
  out->inst_regret = r.inst_regret;
  out->per_round_regret = r.per_round_regret;
  out->ratio_Rn = r.ratio_Rn;
  out->pi_n = r.pi_n;
  out->observed = r.observed;
  out->pending = r.pending;
  out->never = r.never;
  out->forced = r.forced ? 1 : 0;
  return DBL_OK;
}

dbl_status dbl_run_metrics(const dbl_run* run, uint64_t n, double* ratio, double* regret) {
  if (!run) return null_argument("run");
  return guarded([&] {
    if (ratio) *ratio = dbl::ratio_Rn(run->value.trace, n);
    if (regret) *regret = dbl::per_round_regret(run->value.trace, n);
    return DBL_OK;
  });
}

dbl_status dbl_run_grid(const char* manifest_path, const char* out_dir, unsigned parallelism,
                        size_t* starved_runs) {
  if (!manifest_path) return null_argument("manifest_path");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const auto scenarios = dbl::load_manifest(manifest_path);
    const auto outcome = dbl::run_grid(scenarios, out_dir, parallelism == 0 ? 1 : parallelism);
    if (starved_runs) *starved_runs = outcome.starved_runs;
    if (outcome.starved_runs > 0) {
      last_error = std::to_string(outcome.starved_runs) + " run(s) starved during initialization";
      return DBL_ERR_STARVATION;
    }
    return DBL_OK;
  });
}

dbl_status dbl_bounds_report(const char* out_path, uint64_t seed, size_t trials, unsigned workers,
                             int* all_pass) {
  if (!out_path) return null_argument("out_path");
  return guarded([&] {
    const bool ok = dbl::write_bounds_report(out_path, seed, trials, workers == 0 ? 1 : workers);
    if (all_pass) *all_pass = ok ? 1 : 0;
    return DBL_OK;
  });
}

dbl_status dbl_obs_count_tail_bound(double c_lower, double h, unsigned d, double partial_sum,
                                    double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    dbl::BoundInputs bi;
    bi.c_lower = c_lower;
    bi.h = h;
    bi.d = d;
    bi.partial_sum = partial_sum;
    *out = dbl::obs_count_tail_bound(bi);
    return DBL_OK;
  });
}

dbl_status dbl_lemma1_bound(size_t cubes, double pi, uint64_t min_cube_count, double epsilon,
                            double w, double v, double c, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    dbl::BoundInputs bi;
    bi.cubes = cubes;
    bi.pi = pi;
    bi.min_cube_count = min_cube_count;
    bi.epsilon = epsilon;
    bi.w = w;
    bi.v = v;
    bi.c = c;
    *out = dbl::lemma1_bound(bi);
    return DBL_OK;
  });
}

dbl_status dbl_bernoulli_sum_bound(double beta_sum, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = dbl::bernoulli_sum_bound(beta_sum);
    return DBL_OK;
  });
}

dbl_status dbl_weighted_noise_sum_bound(uint64_t n, double epsilon, double v, double c,
                                        double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = dbl::weighted_noise_sum_bound(n, epsilon, v, c);
    return DBL_OK;
  });
}

}  // extern "C"
