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

#ifndef OFFGAME_GAME_HPP
#define OFFGAME_GAME_HPP

#include <optional>

#include "offgame/types.hpp"

namespace offgame {

// Cost a user tries to minimise: own overhead plus the overheads of every
// co-channel transmitter it interferes with, all evaluated at the full joint
// profile. Internalising the neighbour costs is what makes unilateral
// improvements line up exactly with drops of the network potential below.
double altruistic_utility(const Scenario &scenario,
                          const StrategyProfile &profile, int n);

// Network potential: the plain sum of every user's own overhead.
double potential(const Scenario &scenario, const StrategyProfile &profile);

// [U_n(s') - U_n(s)] - [Phi(s') - Phi(s)] for a unilateral move of user n to
// s_new. Zero in exact arithmetic for every profile and every move; the
// residual measures floating-point noise only.
double exact_potential_residual(const Scenario &scenario,
                                const StrategyProfile &profile, int n,
                                const Strategy &s_new);

struct NashWitness {
  int user = 0;
  Strategy deviation;
  double improvement = 0.0; // utility drop achieved by the deviation
};

struct NashCheck {
  bool is_nash = true;
  std::optional<NashWitness> witness; // largest improvement found, if any
};

// eps-equilibrium test against explicit candidate deviations: the profile
// passes when no user can lower its utility by more than eps by switching to
// one of its candidates. candidates[n] lists the strategies user n may try.
NashCheck is_nash(const Scenario &scenario, const StrategyProfile &profile,
                  const std::vector<std::vector<Strategy>> &candidates,
                  double eps);

} // namespace offgame

#endif // OFFGAME_GAME_HPP
