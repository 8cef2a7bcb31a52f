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

#include "offgame/game.hpp"

#include "offgame/model.hpp"

namespace offgame {

double altruistic_utility(const Scenario &scenario,
                          const StrategyProfile &profile, int n) {
  double utility = total_overhead(scenario, profile, n);
  for (int i : interference_set(scenario, profile, n))
    utility += total_overhead(scenario, profile, i);
  return utility;
}

double potential(const Scenario &scenario, const StrategyProfile &profile) {
  double sum = 0.0;
  for (int n = 0; n < scenario.num_users(); ++n)
    sum += total_overhead(scenario, profile, n);
  return sum;
}

double exact_potential_residual(const Scenario &scenario,
                                const StrategyProfile &profile, int n,
                                const Strategy &s_new) {
  const double utility_before = altruistic_utility(scenario, profile, n);
  const double potential_before = potential(scenario, profile);

  StrategyProfile moved = profile;
  moved[n] = s_new;
  const double utility_after = altruistic_utility(scenario, moved, n);
  const double potential_after = potential(scenario, moved);

  return (utility_after - utility_before) -
         (potential_after - potential_before);
}

NashCheck is_nash(const Scenario &scenario, const StrategyProfile &profile,
                  const std::vector<std::vector<Strategy>> &candidates,
                  double eps) {
  if (candidates.size() != profile.size())
    throw Error(ErrorCode::invalid_argument,
                "candidate lists must cover every user");

  NashCheck result;
  double worst = eps;
  StrategyProfile scratch = profile;
  for (int n = 0; n < scenario.num_users(); ++n) {
    const double current = altruistic_utility(scenario, profile, n);
    for (const Strategy &candidate : candidates[n]) {
      scratch[n] = candidate;
      const double utility = altruistic_utility(scenario, scratch, n);
      const double improvement = current - utility;
      if (improvement > worst) {
        worst = improvement;
        result.is_nash = false;
        result.witness = NashWitness{n, candidate, improvement};
      }
    }
    scratch[n] = profile[n];
  }
  return result;
}

} // namespace offgame
