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

#ifndef OFFGAME_DYNAMICS_HPP
#define OFFGAME_DYNAMICS_HPP

#include <cstdint>

#include "offgame/best_response.hpp"
#include "offgame/types.hpp"

namespace offgame {

enum class ScheduleKind {
  round_robin,        // users 0..N-1 in index order, every round
  random_permutation, // fresh uniform order each round
  simultaneous        // everyone responds to the same frozen profile
};

struct UpdateSchedule {
  ScheduleKind kind = ScheduleKind::random_permutation;
  std::uint64_t rng_seed = 0; // drives random_permutation orders only
};

struct DynamicsConfig {
  SolverConfig solver;
  // A user only moves when the utility drop exceeds
  // improvement_tol_rel * max(1, |potential|); stops dithering on noise.
  double improvement_tol_rel = 1e-9;
  // Round-over-round stability: lambda and cpu must repeat exactly, powers
  // within this relative tolerance.
  double power_tol_rel = 1e-6;
  int max_rounds = 500;
};

struct RoundSnapshot {
  StrategyProfile profile;
  std::vector<double> overheads; // per-user own overhead
  std::vector<double> utilities; // per-user utility
  double potential = 0.0;
  int offloader_count = 0; // users with lambda > 0
};

struct IterationTrace {
  RoundSnapshot initial;              // state right after initialization
  std::vector<RoundSnapshot> rounds;  // state after each completed round
  bool converged = false;
  int rounds_to_converge = 0;         // rounds executed, incl. the confirming one
  std::vector<int> forced_local_at_init; // users whose min power exceeded the cap
};

// Start everyone offloading at full power; users that cannot reach the SINR
// threshold even at the cap under that profile are switched to local
// computing at their best CPU speed (one pass suffices: removing a
// transmitter only lowers the remaining users' power floors).
StrategyProfile initialize(const Scenario &scenario,
                           std::vector<int> *forced_local = nullptr);

// Offer user n a best-response update; the profile is replaced in place when
// the improvement clears the tolerance. Returns whether it moved.
bool step(const Scenario &scenario, StrategyProfile &profile, int n,
          const DynamicsConfig &cfg);

// Repeated best-response rounds under the given schedule until a full round
// leaves the profile unchanged (within tolerances) or max_rounds is spent.
// Identical inputs produce identical traces.
IterationTrace run(const Scenario &scenario, const UpdateSchedule &schedule,
                   const DynamicsConfig &cfg);

// Convenience: snapshot of an arbitrary profile (used for trace rows and by
// the analysis tooling).
RoundSnapshot snapshot(const Scenario &scenario, const StrategyProfile &profile);

} // namespace offgame

#endif // OFFGAME_DYNAMICS_HPP
