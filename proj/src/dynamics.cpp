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

#include "offgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "offgame/game.hpp"
#include "offgame/model.hpp"
#include "offgame/rng.hpp"

namespace offgame {

namespace {

bool profiles_stable(const StrategyProfile &before,
                     const StrategyProfile &after, double power_tol_rel) {
  for (std::size_t i = 0; i < before.size(); ++i) {
    const Strategy &a = before[i];
    const Strategy &b = after[i];
    if (a.lambda != b.lambda || a.cpu != b.cpu)
      return false;
    const double scale = std::max(std::abs(a.power), std::abs(b.power));
    if (std::abs(a.power - b.power) > power_tol_rel * scale)
      return false;
  }
  return true;
}

double improvement_threshold(const Scenario &scenario,
                             const StrategyProfile &profile,
                             const DynamicsConfig &cfg) {
  return cfg.improvement_tol_rel *
         std::max(1.0, std::abs(potential(scenario, profile)));
}

} // namespace

RoundSnapshot snapshot(const Scenario &scenario,
                       const StrategyProfile &profile) {
  RoundSnapshot snap;
  snap.profile = profile;
  snap.overheads.resize(profile.size());
  snap.utilities.resize(profile.size());
  for (int n = 0; n < scenario.num_users(); ++n) {
    snap.overheads[n] = total_overhead(scenario, profile, n);
    snap.utilities[n] = altruistic_utility(scenario, profile, n);
    if (profile[n].lambda > 0.0)
      ++snap.offloader_count;
  }
  snap.potential =
      std::accumulate(snap.overheads.begin(), snap.overheads.end(), 0.0);
  return snap;
}

StrategyProfile initialize(const Scenario &scenario,
                           std::vector<int> *forced_local) {
  validate_scenario(scenario);
  StrategyProfile profile;
  profile.strategies.assign(scenario.users.size(),
                            Strategy::offload(scenario.network.p_max));
  // Whoever cannot clear the SINR threshold at the cap, under the worst case
  // of everyone else transmitting at the cap, starts out computing locally.
  // Dropping transmitters only lowers the remaining power floors, so nobody
  // else turns infeasible because of this pass.
  std::vector<int> demoted;
  for (int n = 0; n < scenario.num_users(); ++n)
    if (min_power(scenario, profile, n) > scenario.network.p_max)
      demoted.push_back(n);
  for (int n : demoted)
    profile[n] =
        Strategy::local(best_cpu(scenario.users[n], scenario.network.f_min_floor));
  if (forced_local)
    *forced_local = std::move(demoted);
  return profile;
}

bool step(const Scenario &scenario, StrategyProfile &profile, int n,
          const DynamicsConfig &cfg) {
  const double current = altruistic_utility(scenario, profile, n);
  const BestResponseResult br = best_response(scenario, profile, n, cfg.solver);
  const double best = std::min(br.utility_offload, br.utility_local);
  if (current - best > improvement_threshold(scenario, profile, cfg)) {
    profile[n] = br.strategy;
    return true;
  }
  return false;
}

IterationTrace run(const Scenario &scenario, const UpdateSchedule &schedule,
                   const DynamicsConfig &cfg) {
  if (cfg.max_rounds < 1)
    throw Error(ErrorCode::invalid_argument, "max_rounds must be at least 1");
  validate_solver_config(cfg.solver);

  IterationTrace trace;
  StrategyProfile profile = initialize(scenario, &trace.forced_local_at_init);
  trace.initial = snapshot(scenario, profile);

  Rng rng(schedule.rng_seed);
  std::vector<int> order(scenario.users.size());
  std::iota(order.begin(), order.end(), 0);

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const StrategyProfile before = profile;

    switch (schedule.kind) {
    case ScheduleKind::round_robin:
      for (int n : order)
        step(scenario, profile, n, cfg);
      break;
    case ScheduleKind::random_permutation: {
      std::vector<int> shuffled = order;
      rng.shuffle(shuffled);
      for (int n : shuffled)
        step(scenario, profile, n, cfg);
      break;
    }
    case ScheduleKind::simultaneous: {
      // Everyone responds to the same frozen profile; accepted moves land as
      // one batch. This schedule may oscillate and is offered for study, not
      // as the convergence workhorse.
      const double threshold = improvement_threshold(scenario, before, cfg);
      StrategyProfile batch = before;
      for (int n = 0; n < scenario.num_users(); ++n) {
        const double current = altruistic_utility(scenario, before, n);
        const BestResponseResult br =
            best_response(scenario, before, n, cfg.solver);
        if (current - std::min(br.utility_offload, br.utility_local) >
            threshold)
          batch[n] = br.strategy;
      }
      profile = std::move(batch);
      break;
    }
    }

    trace.rounds.push_back(snapshot(scenario, profile));
    trace.rounds_to_converge = round;
    if (profiles_stable(before, profile, cfg.power_tol_rel)) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

} // namespace offgame
