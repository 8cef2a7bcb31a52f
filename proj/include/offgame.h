/*
 * Copyright 2026 The offgame Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the offload-game toolkit: scenario handling, best-response
 * dynamics and equilibrium analysis behind opaque handles and integer status
 * codes. Every function that can fail returns an og_status; OG_OK is zero.
 * A human-readable message for the most recent failure on the calling thread
 * is available from og_last_error(). Strings returned through char** out
 * parameters are heap-allocated and must be released with og_string_free().
 */

#ifndef OFFGAME_H
#define OFFGAME_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum og_status {
  OG_OK = 0,
  OG_ERROR_INVALID_ARGUMENT = 1,
  OG_ERROR_PARSE = 2,
  OG_ERROR_DOMAIN = 3,
  OG_ERROR_INFEASIBLE = 4,
  OG_ERROR_GUARD = 5,
  OG_ERROR_IO = 6,
  OG_ERROR_INTERNAL = 7
} og_status;

typedef enum og_schedule {
  OG_SCHEDULE_ROUND_ROBIN = 0,
  OG_SCHEDULE_RANDOM_PERMUTATION = 1,
  OG_SCHEDULE_SIMULTANEOUS = 2
} og_schedule;

typedef struct og_scenario og_scenario; /* network + user parameters */
typedef struct og_profile og_profile;   /* one strategy per user */
typedef struct og_trace og_trace;       /* best-response iteration record */

const char *og_version(void);
const char *og_status_name(og_status status);

/* Message for the last failing call on this thread; empty string if none. */
const char *og_last_error(void);

void og_string_free(char *s);

/* ---- scenarios ---------------------------------------------------------- */

/* 1 if the JSON document is a generator spec, 0 if it is an explicit
 * scenario, -1 (with og_last_error set) if it is not valid JSON. */
int og_scenario_json_kind(const char *json_text);

og_status og_scenario_from_json(const char *json_text, og_scenario **out);

/* Realize a generator-form document. When use_seed is nonzero, `seed`
 * overrides any seed carried inside the document. */
og_status og_scenario_generate(const char *json_text, uint64_t seed,
                               int use_seed, og_scenario **out);

og_status og_scenario_to_json(const og_scenario *scenario, char **out_json);

int og_scenario_num_users(const og_scenario *scenario);
int og_scenario_num_channels(const og_scenario *scenario);
uint64_t og_scenario_hash(const og_scenario *scenario);

void og_scenario_free(og_scenario *scenario);

/* ---- best-response dynamics --------------------------------------------- */

typedef struct og_run_params {
  int schedule;               /* og_schedule value */
  uint64_t seed;              /* drives random_permutation ordering */
  int max_rounds;             /* round budget */
  double improvement_tol_rel; /* movement threshold, relative to potential */
  double power_tol_rel;       /* round-stability power comparison */
  double newton_tol;          /* stationarity tolerance of the power solver */
  int newton_max_iter;
  int multistart_count;       /* bracketing grid cells of the power solver */
  int tie_break_local;        /* nonzero: exact utility ties stay local */
} og_run_params;

void og_run_params_defaults(og_run_params *params);

/* Runs the dynamics to convergence or max_rounds. Non-convergence is not an
 * error: inspect og_trace_converged. */
og_status og_run(const og_scenario *scenario, const og_run_params *params,
                 og_trace **out);

int og_trace_converged(const og_trace *trace);
/* Number of completed rounds recorded (equals rounds-to-convergence when the
 * run converged). */
int og_trace_num_rounds(const og_trace *trace);

/* Round 0 addresses the state right after initialization; rounds 1..N the
 * state after each completed round. Any out pointer may be NULL. */
og_status og_trace_round(const og_trace *trace, int round, double *potential,
                         int *offloader_count);
og_status og_trace_user(const og_trace *trace, int round, int user,
                        double *lambda, double *power, double *cpu,
                        double *overhead, double *utility);

/* Byte-stable CSV renderings of the per-user trace and per-round summary. */
og_status og_trace_to_csv(const og_trace *trace, char **out_trace_csv,
                          char **out_summary_csv);

og_status og_trace_final_profile(const og_trace *trace, og_profile **out);

void og_trace_free(og_trace *trace);

/* ---- profiles ------------------------------------------------------------ */

og_status og_profile_from_trace_csv(const og_scenario *scenario,
                                    const char *csv_text, og_profile **out);

int og_profile_num_users(const og_profile *profile);
og_status og_profile_user(const og_profile *profile, int user, double *lambda,
                          double *power, double *cpu);

void og_profile_free(og_profile *profile);

/* ---- analysis ------------------------------------------------------------ */

typedef struct og_analysis_params {
  int power_levels_per_user; /* oracle power grid size */
  double eps;                /* equilibrium slack; <= 0 picks the default */
  double newton_tol;
  int newton_max_iter;
  int multistart_count;
} og_analysis_params;

void og_analysis_params_defaults(og_analysis_params *params);

/* Equilibrium verification, efficiency ratio against the centralized
 * optimum, its closed-form upper bound and a Pareto verdict, as one JSON
 * report. Fails with OG_ERROR_GUARD when the instance is too large to
 * enumerate. */
og_status og_analyze(const og_scenario *scenario, const og_profile *profile,
                     const og_analysis_params *params, char **out_json);

/* ---- property check suites ----------------------------------------------- */

/* suite: "potential", "best_response", "convergence" or "poa".
 * *out_passed is 1/0; the JSON report lists each property with details. */
og_status og_check(const char *suite, uint64_t seed, int *out_passed,
                   char **out_json);

#ifdef __cplusplus
}
#endif

#endif /* OFFGAME_H */
