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

#ifndef OFFGAME_ANALYSIS_HPP
#define OFFGAME_ANALYSIS_HPP

#include <optional>

#include "offgame/best_response.hpp"
#include "offgame/types.hpp"

namespace offgame {

// Joint enumeration cap shared by the brute-force oracles.
inline constexpr double kEnumerationGuard = 1048576.0; // 2^20

// Discretized strategy space for the exhaustive oracles. Offloading levels
// other than 0 and 1 are legal and then combine a power level with a CPU
// level. An empty cpu_levels means "per user: best CPU speed and f_max".
// The optional anchor injects each user's strategy from a reference profile
// into its candidate list, so that profiles produced by the continuous
// solvers are themselves part of the searched grid.
struct Discretization {
  std::vector<double> lambda_levels = {0.0, 1.0};
  int power_levels_per_user = 8;
  std::vector<double> cpu_levels;               // absolute Hz when non-empty
  std::optional<StrategyProfile> anchor;
};

// Everything the oracles enumerate per user, after feasibility-independent
// construction (per-profile SINR admission is filtered at evaluation time).
std::vector<std::vector<Strategy>>
oracle_candidates(const Scenario &scenario, const Discretization &disc);

double total_utility(const Scenario &scenario, const StrategyProfile &profile);

struct CentralizedOptimum {
  StrategyProfile profile;
  double total = 0.0; // sum of utilities at the optimum
};

// Minimum total utility over offloading-level assignments from the
// discretization, with offloaders' powers refined by cyclic coordinate
// descent (grid bracket + safeguarded Newton per coordinate) from several
// starts. An optional seed profile joins the starts, which also makes the
// returned total a certified upper bound on the seed's total. Guard: the
// number of level assignments must stay within kEnumerationGuard.
CentralizedOptimum centralized_optimum(const Scenario &scenario,
                                       const Discretization &disc,
                                       const SolverConfig &cfg,
                                       const StrategyProfile *seed = nullptr);

struct PoAReport {
  double ne_total = 0.0;       // total utility at the equilibrium profile
  double opt_total = 0.0;      // total utility at the centralized optimum
  double poa = 0.0;            // ne_total / opt_total
  double upper_bound = 0.0;    // closed-form pessimistic/optimistic ratio
  double ne_potential = 0.0;   // sum of own overheads at the equilibrium
  double opt_potential = 0.0;  // sum of own overheads at the optimum
  double poa_potential = 0.0;  // secondary ratio on the potential
  StrategyProfile opt_profile;
};

// Efficiency loss of an equilibrium profile relative to the centralized
// optimum. The caller is expected to pass a profile that actually is an
// equilibrium (e.g. a converged trace's final profile).
PoAReport price_of_anarchy(const Scenario &scenario,
                           const StrategyProfile &ne_profile,
                           const Discretization &disc, const SolverConfig &cfg);

// Closed-form upper bound on the efficiency loss: every user's overhead is
// bounded above with all of its interferers raised to their largest observed
// power and below with an interference-free uplink (offloaders) or the
// best/worst feasible CPU speed (local users), and the two aggregates are
// divided. Non-decreasing when any interferer's largest power grows.
double poa_upper_bound(const Scenario &scenario,
                       const StrategyProfile &ne_profile);

struct ParetoResult {
  bool is_pareto = true;
  std::optional<StrategyProfile> dominator; // first dominating profile found
};

// Searches the discretized joint space for a profile that weakly improves
// every user and strictly improves at least one. The checked profile's own
// strategies are always part of the candidate grid.
ParetoResult pareto_check(const Scenario &scenario,
                          const StrategyProfile &profile,
                          const Discretization &disc);

// All profiles in the discretized joint space from which no single-user
// in-grid deviation improves that user by more than eps. Deviations that
// would violate the SINR admission constraint do not count.
std::vector<StrategyProfile> ne_oracle(const Scenario &scenario,
                                       const Discretization &disc, double eps);

// 1 / (sum of offloader SINRs); +inf when nobody transmits. The standard
// scalar gauge of how interference-limited a profile is.
double inverse_total_sinr(const Scenario &scenario,
                          const StrategyProfile &profile);

// Spearman rank correlation with average ranks on ties. Used by trend checks.
double spearman(const std::vector<double> &x, const std::vector<double> &y);

} // namespace offgame

#endif // OFFGAME_ANALYSIS_HPP
