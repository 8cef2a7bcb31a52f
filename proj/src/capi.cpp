// Copyright 2026 The offgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "offgame.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "json.hpp"

#include "offgame/analysis.hpp"
#include "offgame/best_response.hpp"
#include "offgame/checks.hpp"
#include "offgame/dynamics.hpp"
#include "offgame/game.hpp"
#include "offgame/scenario_io.hpp"
#include "offgame/trace_io.hpp"
#include "offgame/types.hpp"
#include "offgame/version.hpp"

struct og_scenario {
  offgame::Scenario scenario;
};

struct og_profile {
  offgame::StrategyProfile profile;
};

struct og_trace {
  offgame::Scenario scenario; // kept so CSV export is self-contained
  offgame::IterationTrace trace;
  offgame::TraceMeta meta;
};

namespace {

thread_local std::string t_last_error;

og_status status_of(const offgame::Error &e) {
  using offgame::ErrorCode;
  switch (e.code()) {
  case ErrorCode::invalid_argument:
    return OG_ERROR_INVALID_ARGUMENT;
  case ErrorCode::parse:
    return OG_ERROR_PARSE;
  case ErrorCode::domain:
    return OG_ERROR_DOMAIN;
  case ErrorCode::infeasible:
    return OG_ERROR_INFEASIBLE;
  case ErrorCode::guard:
    return OG_ERROR_GUARD;
  case ErrorCode::io:
    return OG_ERROR_IO;
  case ErrorCode::internal:
    return OG_ERROR_INTERNAL;
  }
  return OG_ERROR_INTERNAL;
}

og_status fail(og_status status, const std::string &message) {
  t_last_error = message;
  return status;
}

// Run the body, translating exceptions into status codes. Successful calls
// clear the thread's error message.
template <typename F> og_status guarded(F &&body) {
  try {
    body();
    t_last_error.clear();
    return OG_OK;
  } catch (const offgame::Error &e) {
    return fail(status_of(e), e.what());
  } catch (const std::bad_alloc &) {
    return fail(OG_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(OG_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(OG_ERROR_INTERNAL, "unknown failure");
  }
}

// Callers release these with og_string_free (i.e. free()).
char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char *what) {
  if (!ok)
    throw offgame::Error(offgame::ErrorCode::invalid_argument, what);
}

offgame::ScheduleKind schedule_of(int value) {
  switch (value) {
  case OG_SCHEDULE_ROUND_ROBIN:
    return offgame::ScheduleKind::round_robin;
  case OG_SCHEDULE_RANDOM_PERMUTATION:
    return offgame::ScheduleKind::random_permutation;
  case OG_SCHEDULE_SIMULTANEOUS:
    return offgame::ScheduleKind::simultaneous;
  default:
    throw offgame::Error(offgame::ErrorCode::invalid_argument,
                         "schedule must be 0 (round robin), 1 (random "
                         "permutation) or 2 (simultaneous)");
  }
}

const offgame::RoundSnapshot &snapshot_at(const og_trace &trace, int round) {
  if (round == 0)
    return trace.trace.initial;
  const int rounds = static_cast<int>(trace.trace.rounds.size());
  if (round < 0 || round > rounds)
    throw offgame::Error(offgame::ErrorCode::invalid_argument,
                         "round " + std::to_string(round) +
                             " outside 0.." + std::to_string(rounds));
  return trace.trace.rounds[static_cast<std::size_t>(round - 1)];
}

} // namespace

extern "C" {

const char *og_version(void) { return OFFGAME_VERSION_STRING; }

const char *og_status_name(og_status status) {
  switch (status) {
  case OG_OK:
    return "ok";
  case OG_ERROR_INVALID_ARGUMENT:
    return "invalid_argument";
  case OG_ERROR_PARSE:
    return "parse_error";
  case OG_ERROR_DOMAIN:
    return "domain_error";
  case OG_ERROR_INFEASIBLE:
    return "infeasible";
  case OG_ERROR_GUARD:
    return "guard_tripped";
  case OG_ERROR_IO:
    return "io_error";
  case OG_ERROR_INTERNAL:
    return "internal_error";
  }
  return "unknown";
}

const char *og_last_error(void) { return t_last_error.c_str(); }

void og_string_free(char *s) { std::free(s); }

/* ---- scenarios ---------------------------------------------------------- */

int og_scenario_json_kind(const char *json_text) {
  if (!json_text) {
    t_last_error = "json_text must not be NULL";
    return -1;
  }
  try {
    const bool generator = offgame::json_is_generator(json_text);
    t_last_error.clear();
    return generator ? 1 : 0;
  } catch (const std::exception &e) {
    t_last_error = e.what();
    return -1;
  }
}

og_status og_scenario_from_json(const char *json_text, og_scenario **out) {
  return guarded([&] {
    require(json_text != nullptr, "json_text must not be NULL");
    require(out != nullptr, "out must not be NULL");
    auto handle = std::make_unique<og_scenario>();
    handle->scenario = offgame::scenario_from_json(json_text);
    *out = handle.release();
  });
}

og_status og_scenario_generate(const char *json_text, uint64_t seed,
                               int use_seed, og_scenario **out) {
  return guarded([&] {
    require(json_text != nullptr, "json_text must not be NULL");
    require(out != nullptr, "out must not be NULL");
    const offgame::GeneratorSpec spec = offgame::generator_from_json(json_text);
    uint64_t effective = seed;
    if (!use_seed) {
      if (!spec.seed)
        throw offgame::Error(offgame::ErrorCode::invalid_argument,
                             "no seed: pass one or put it in the document");
      effective = *spec.seed;
    }
    auto handle = std::make_unique<og_scenario>();
    handle->scenario = offgame::generate(spec, effective);
    *out = handle.release();
  });
}

og_status og_scenario_to_json(const og_scenario *scenario, char **out_json) {
  return guarded([&] {
    require(scenario != nullptr, "scenario must not be NULL");
    require(out_json != nullptr, "out_json must not be NULL");
    *out_json = dup_string(offgame::scenario_to_json(scenario->scenario));
  });
}

int og_scenario_num_users(const og_scenario *scenario) {
  return scenario ? scenario->scenario.num_users() : 0;
}

int og_scenario_num_channels(const og_scenario *scenario) {
  return scenario ? scenario->scenario.network.num_channels : 0;
}

uint64_t og_scenario_hash(const og_scenario *scenario) {
  return scenario ? offgame::scenario_hash(scenario->scenario) : 0;
}

void og_scenario_free(og_scenario *scenario) { delete scenario; }

/* ---- best-response dynamics --------------------------------------------- */

void og_run_params_defaults(og_run_params *params) {
  if (!params)
    return;
  const offgame::DynamicsConfig cfg;
  params->schedule = OG_SCHEDULE_ROUND_ROBIN;
  params->seed = 0;
  params->max_rounds = cfg.max_rounds;
  params->improvement_tol_rel = cfg.improvement_tol_rel;
  params->power_tol_rel = cfg.power_tol_rel;
  params->newton_tol = cfg.solver.newton_tol;
  params->newton_max_iter = cfg.solver.newton_max_iter;
  params->multistart_count = cfg.solver.multistart_count;
  params->tie_break_local = cfg.solver.tie_break_local ? 1 : 0;
}

og_status og_run(const og_scenario *scenario, const og_run_params *params,
                 og_trace **out) {
  return guarded([&] {
    require(scenario != nullptr, "scenario must not be NULL");
    require(params != nullptr, "params must not be NULL");
    require(out != nullptr, "out must not be NULL");

    offgame::UpdateSchedule schedule;
    schedule.kind = schedule_of(params->schedule);
    schedule.rng_seed = params->seed;

    offgame::DynamicsConfig cfg;
    cfg.max_rounds = params->max_rounds;
    cfg.improvement_tol_rel = params->improvement_tol_rel;
    cfg.power_tol_rel = params->power_tol_rel;
    cfg.solver.newton_tol = params->newton_tol;
    cfg.solver.newton_max_iter = params->newton_max_iter;
    cfg.solver.multistart_count = params->multistart_count;
    cfg.solver.tie_break_local = params->tie_break_local != 0;

    auto handle = std::make_unique<og_trace>();
    handle->scenario = scenario->scenario;
    handle->trace = offgame::run(scenario->scenario, schedule, cfg);
    handle->meta.tool_version = OFFGAME_VERSION_STRING;
    handle->meta.seed = params->seed;
    handle->meta.spec_hash = offgame::scenario_hash(scenario->scenario);
    handle->meta.schedule = offgame::schedule_name(schedule.kind);
    *out = handle.release();
  });
}

int og_trace_converged(const og_trace *trace) {
  return trace && trace->trace.converged ? 1 : 0;
}

int og_trace_num_rounds(const og_trace *trace) {
  return trace ? static_cast<int>(trace->trace.rounds.size()) : 0;
}

og_status og_trace_round(const og_trace *trace, int round, double *potential,
                         int *offloader_count) {
  return guarded([&] {
    require(trace != nullptr, "trace must not be NULL");
    const offgame::RoundSnapshot &snap = snapshot_at(*trace, round);
    if (potential)
      *potential = snap.potential;
    if (offloader_count)
      *offloader_count = snap.offloader_count;
  });
}

og_status og_trace_user(const og_trace *trace, int round, int user,
                        double *lambda, double *power, double *cpu,
                        double *overhead, double *utility) {
  return guarded([&] {
    require(trace != nullptr, "trace must not be NULL");
    const offgame::RoundSnapshot &snap = snapshot_at(*trace, round);
    require(user >= 0 && user < trace->scenario.num_users(),
            "user index out of range");
    const offgame::Strategy &s = snap.profile[user];
    if (lambda)
      *lambda = s.lambda;
    if (power)
      *power = s.power;
    if (cpu)
      *cpu = s.cpu;
    if (overhead)
      *overhead = snap.overheads[static_cast<std::size_t>(user)];
    if (utility)
      *utility = snap.utilities[static_cast<std::size_t>(user)];
  });
}

og_status og_trace_to_csv(const og_trace *trace, char **out_trace_csv,
                          char **out_summary_csv) {
  return guarded([&] {
    require(trace != nullptr, "trace must not be NULL");
    char *trace_csv = nullptr;
    char *summary_csv = nullptr;
    if (out_trace_csv)
      trace_csv = dup_string(
          offgame::trace_to_csv(trace->scenario, trace->trace, trace->meta));
    if (out_summary_csv) {
      try {
        summary_csv =
            dup_string(offgame::summary_to_csv(trace->trace, trace->meta));
      } catch (...) {
        std::free(trace_csv);
        throw;
      }
    }
    if (out_trace_csv)
      *out_trace_csv = trace_csv;
    if (out_summary_csv)
      *out_summary_csv = summary_csv;
  });
}

og_status og_trace_final_profile(const og_trace *trace, og_profile **out) {
  return guarded([&] {
    require(trace != nullptr, "trace must not be NULL");
    require(out != nullptr, "out must not be NULL");
    auto handle = std::make_unique<og_profile>();
    handle->profile = trace->trace.rounds.empty()
                          ? trace->trace.initial.profile
                          : trace->trace.rounds.back().profile;
    *out = handle.release();
  });
}

void og_trace_free(og_trace *trace) { delete trace; }

/* ---- profiles ------------------------------------------------------------ */

og_status og_profile_from_trace_csv(const og_scenario *scenario,
                                    const char *csv_text, og_profile **out) {
  return guarded([&] {
    require(scenario != nullptr, "scenario must not be NULL");
    require(csv_text != nullptr, "csv_text must not be NULL");
    require(out != nullptr, "out must not be NULL");
    auto handle = std::make_unique<og_profile>();
    handle->profile =
        offgame::profile_from_trace_csv(scenario->scenario, csv_text);
    *out = handle.release();
  });
}

int og_profile_num_users(const og_profile *profile) {
  return profile ? static_cast<int>(profile->profile.size()) : 0;
}

og_status og_profile_user(const og_profile *profile, int user, double *lambda,
                          double *power, double *cpu) {
  return guarded([&] {
    require(profile != nullptr, "profile must not be NULL");
    require(user >= 0 && user < static_cast<int>(profile->profile.size()),
            "user index out of range");
    const offgame::Strategy &s = profile->profile[user];
    if (lambda)
      *lambda = s.lambda;
    if (power)
      *power = s.power;
    if (cpu)
      *cpu = s.cpu;
  });
}

void og_profile_free(og_profile *profile) { delete profile; }

/* ---- analysis ------------------------------------------------------------ */

void og_analysis_params_defaults(og_analysis_params *params) {
  if (!params)
    return;
  const offgame::SolverConfig cfg;
  // Six power levels keep a six-user joint enumeration (the Pareto scan)
  // inside the node guard; callers with smaller instances can raise this.
  params->power_levels_per_user = 6;
  params->eps = 0.0; // resolved against the profile's potential at run time
  params->newton_tol = cfg.newton_tol;
  params->newton_max_iter = cfg.newton_max_iter;
  params->multistart_count = cfg.multistart_count;
}

og_status og_analyze(const og_scenario *scenario, const og_profile *profile,
                     const og_analysis_params *params, char **out_json) {
  return guarded([&] {
    require(scenario != nullptr, "scenario must not be NULL");
    require(profile != nullptr, "profile must not be NULL");
    require(params != nullptr, "params must not be NULL");
    require(out_json != nullptr, "out_json must not be NULL");

    const offgame::Scenario &scn = scenario->scenario;
    const offgame::StrategyProfile &prof = profile->profile;
    offgame::validate_profile(scn, prof);

    offgame::SolverConfig cfg;
    cfg.newton_tol = params->newton_tol;
    cfg.newton_max_iter = params->newton_max_iter;
    cfg.multistart_count = params->multistart_count;

    offgame::Discretization disc;
    disc.power_levels_per_user = params->power_levels_per_user;
    disc.anchor = prof;

    // Trip the size guards before any heavy work so an oversized request
    // fails without partial output.
    {
      double product = 1.0;
      for (const auto &cands : offgame::oracle_candidates(scn, disc)) {
        product *= static_cast<double>(cands.size());
        if (product > offgame::kEnumerationGuard)
          throw offgame::Error(
              offgame::ErrorCode::guard,
              "joint enumeration needs " + std::to_string(product) +
                  " nodes, above the guard of " +
                  std::to_string(offgame::kEnumerationGuard) +
                  "; reduce the instance or power_levels_per_user");
      }
      double assignments = 1.0;
      for (int n = 0; n < scn.num_users(); ++n)
        assignments *= 2.0;
      if (assignments > offgame::kEnumerationGuard)
        throw offgame::Error(offgame::ErrorCode::guard,
                             "too many offloading assignments to enumerate");
    }

    const double phi = offgame::potential(scn, prof);
    const double eps =
        params->eps > 0.0
            ? params->eps
            : 10.0 * 1e-9 * std::max(1.0, std::abs(phi));
    std::vector<std::vector<offgame::Strategy>> candidates;
    for (int n = 0; n < scn.num_users(); ++n)
      candidates.push_back(offgame::best_response_candidates(scn, prof, n, cfg));
    const offgame::NashCheck nash = offgame::is_nash(scn, prof, candidates, eps);

    const offgame::PoAReport poa =
        offgame::price_of_anarchy(scn, prof, disc, cfg);
    const offgame::ParetoResult pareto = offgame::pareto_check(scn, prof, disc);

    nlohmann::json doc;
    doc["schema"] = "analysis/1";
    doc["tool_version"] = OFFGAME_VERSION_STRING;
    doc["spec_hash"] = offgame::scenario_hash(scn);

    doc["equilibrium"]["eps"] = eps;
    doc["equilibrium"]["is_nash"] = nash.is_nash;
    if (nash.witness) {
      doc["equilibrium"]["witness"] = {
          {"user", nash.witness->user},
          {"lambda", nash.witness->deviation.lambda},
          {"power", nash.witness->deviation.power},
          {"cpu", nash.witness->deviation.cpu},
          {"improvement", nash.witness->improvement}};
    } else {
      doc["equilibrium"]["witness"] = nullptr;
    }

    doc["poa"] = {{"ne_total", poa.ne_total},
                  {"opt_total", poa.opt_total},
                  {"value", poa.poa},
                  {"upper_bound", poa.upper_bound},
                  {"ne_potential", poa.ne_potential},
                  {"opt_potential", poa.opt_potential},
                  {"potential_ratio", poa.poa_potential}};

    auto profile_json = [](const offgame::StrategyProfile &p) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < p.size(); ++i)
        rows.push_back({{"user_id", static_cast<int>(i)},
                        {"lambda", p[static_cast<int>(i)].lambda},
                        {"power", p[static_cast<int>(i)].power},
                        {"cpu", p[static_cast<int>(i)].cpu}});
      return rows;
    };

    doc["pareto"]["efficient"] = pareto.is_pareto;
    if (pareto.dominator)
      doc["pareto"]["dominator"] = profile_json(*pareto.dominator);
    else
      doc["pareto"]["dominator"] = nullptr;

    doc["opt_profile"] = profile_json(poa.opt_profile);

    *out_json = dup_string(doc.dump(2) + "\n");
  });
}

/* ---- property check suites ----------------------------------------------- */

og_status og_check(const char *suite, uint64_t seed, int *out_passed,
                   char **out_json) {
  return guarded([&] {
    require(suite != nullptr, "suite must not be NULL");
    const offgame::SuiteReport report = offgame::run_check_suite(suite, seed);
    if (out_passed)
      *out_passed = report.passed ? 1 : 0;
    if (out_json)
      *out_json = dup_string(offgame::suite_report_to_json(report));
  });
}

} // extern "C"
