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

#ifndef OFFGAME_BEST_RESPONSE_HPP
#define OFFGAME_BEST_RESPONSE_HPP

#include "offgame/types.hpp"

namespace offgame {

struct SolverConfig {
  double newton_tol = 1e-9;   // stationarity tolerance on the derivative
  int newton_max_iter = 100;  // per-bracket iteration cap
  int multistart_count = 64;  // grid cells used to bracket stationary points
  bool tie_break_local = true; // exact utility tie resolves to staying local
};

void validate_solver_config(const SolverConfig &cfg);

// CPU speed minimising the local overhead: the interior stationary point
// (alpha_t / (2 alpha_e kappa))^(1/3) clamped to [floor, f_max]. Pure-latency
// users get f_max, pure-energy users get the floor.
double best_cpu(const UserParams &user, double floor);

// Smallest admissible transmit power for user n against the other users'
// current strategies: theta * (N0 + interference) / G_n.
double min_power(const Scenario &scenario, const StrategyProfile &profile,
                 int n);

// The power-dependent part of user n's utility when it offloads at power p
// against the others' current strategies. Own upload cost plus the uplink
// costs its interference inflicts on co-channel transmitters; terms constant
// in p (server execution, neighbours' local shares) are left out, so the
// minimiser matches the full utility's but the value is offset.
double transmission_utility(const Scenario &scenario,
                            const StrategyProfile &profile, int n, double p);

// The objective above in explicit form, reusable with per-term weights (the
// centralized search runs coordinate steps on a weighted variant). Each term
// is coeff / ln(1 + signal / (base + p * gain-ish)); see the .cpp for the
// exact shapes and their closed-form first and second derivatives.
struct PowerObjective {
  double own_coeff = 0.0;   // weight * L * ln2 / omega, scaled by own lambda
  double alpha_t = 0.0;
  double alpha_e = 0.0;
  double gain = 0.0;        // G_n
  double own_noise = 0.0;   // N0 + interference seen by n
  struct NeighbourTerm {
    double coeff = 0.0;     // weight * lambda_i * L_i (a_t,i + a_e,i p_i) * ln2 / omega
    double signal = 0.0;    // p_i * G_i
    double base = 0.0;      // N0 + co-channel interference at i excluding n
  };
  std::vector<NeighbourTerm> neighbours;

  double value(double p) const;
  double deriv(double p) const;
  double deriv2(double p) const;
};

// Build the unit-weight objective for user n offloading everything (lambda 1)
// against the rest of the profile.
PowerObjective make_transmission_objective(const Scenario &scenario,
                                           const StrategyProfile &profile,
                                           int n);

struct PowerSolution {
  double p_opt = 0.0;
  std::vector<double> stationary_points; // roots of the derivative found
};

// Global 1-D minimisation over [p_lo, p_hi]: grid scan of the derivative for
// sign changes, safeguarded Newton polish inside each bracket (bisection when
// a step escapes), and the argmin over endpoints plus stationary points.
PowerSolution minimize_power_objective(const PowerObjective &objective,
                                       double p_lo, double p_hi,
                                       const SolverConfig &cfg);

// Best transmit power for user n given the others, over [min_power, p_max].
// Throws Error{infeasible} when even the cap cannot reach the SINR threshold.
PowerSolution best_power(const Scenario &scenario,
                         const StrategyProfile &profile, int n,
                         const SolverConfig &cfg);

struct BestResponseResult {
  Strategy strategy;                    // the chosen triple
  double utility_offload = 0.0;         // utility at (1, p_bar, 0); +inf if infeasible
  double utility_local = 0.0;           // utility at (0, 0, f_star)
  double p_bar = 0.0;                   // 0 when offloading is infeasible
  double f_star = 0.0;
  std::vector<double> stationary_points;
  bool feasible_offload = false;
};

// Full best response of user n: offload entirely at the best power or compute
// locally at the best CPU speed, whichever yields the lower utility. Exact
// ties resolve per cfg.tie_break_local.
BestResponseResult best_response(const Scenario &scenario,
                                 const StrategyProfile &profile, int n,
                                 const SolverConfig &cfg);

// Deviations worth testing in equilibrium certificates: the current strategy,
// the best response, and the opposite branch with its induced best power or
// CPU speed (when admissible).
std::vector<Strategy> best_response_candidates(const Scenario &scenario,
                                               const StrategyProfile &profile,
                                               int n, const SolverConfig &cfg);

} // namespace offgame

#endif // OFFGAME_BEST_RESPONSE_HPP
