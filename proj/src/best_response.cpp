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

#include "offgame/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "offgame/game.hpp"
#include "offgame/model.hpp"

namespace offgame {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_user_index(const Scenario &scenario, const StrategyProfile &profile,
                      int n) {
  if (n < 0 || n >= scenario.num_users())
    throw Error(ErrorCode::invalid_argument,
                "user index " + std::to_string(n) + " out of range");
  if (profile.size() != scenario.users.size())
    throw Error(ErrorCode::invalid_argument,
                "profile size does not match the number of users");
}

} // namespace

void validate_solver_config(const SolverConfig &cfg) {
  if (!(cfg.newton_tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "newton_tol must be positive");
  if (cfg.newton_max_iter < 1)
    throw Error(ErrorCode::invalid_argument,
                "newton_max_iter must be at least 1");
  if (cfg.multistart_count < 3)
    throw Error(ErrorCode::invalid_argument,
                "multistart_count must be at least 3");
}

double best_cpu(const UserParams &user, double floor) {
  if (!(floor > 0.0) || floor > user.f_max)
    throw Error(ErrorCode::invalid_argument,
                "CPU floor must be positive and no larger than f_max");
  if (user.weight_energy <= 0.0)
    return user.f_max; // latency-only: run as fast as allowed
  if (user.weight_time <= 0.0)
    return floor; // energy-only: run as slowly as allowed
  const double interior =
      std::cbrt(user.weight_time / (2.0 * user.weight_energy * user.kappa));
  return std::clamp(interior, floor, user.f_max);
}

double min_power(const Scenario &scenario, const StrategyProfile &profile,
                 int n) {
  check_user_index(scenario, profile, n);
  const double interference = interference_power(scenario, profile, n);
  return scenario.network.sinr_threshold *
         (scenario.network.noise_power + interference) /
         scenario.users[n].channel_gain;
}

// --- objective ---------------------------------------------------------------
//
// Own term:        T0(p) = A (at + ae p) / W(p),  W(p) = ln(1 + p g / D)
// Neighbour term:  Ti(p) = B / Li(p),             Li(p) = ln(1 + c / (d + p g))
//
// with A = own_coeff, D = own_noise, B = coeff, c = signal, d = base. The
// derivatives below are the closed forms of these shapes; tests cross-check
// them against central finite differences.

double PowerObjective::value(double p) const {
  const double w = std::log1p(p * gain / own_noise);
  double total = own_coeff * (alpha_t + alpha_e * p) / w;
  for (const NeighbourTerm &t : neighbours)
    total += t.coeff / std::log1p(t.signal / (t.base + p * gain));
  return total;
}

double PowerObjective::deriv(double p) const {
  const double w = std::log1p(p * gain / own_noise);
  const double h = gain / (own_noise + p * gain);
  double total =
      own_coeff * (alpha_e * w - (alpha_t + alpha_e * p) * h) / (w * w);
  for (const NeighbourTerm &t : neighbours) {
    const double a = t.base + p * gain;
    const double b = a + t.signal;
    const double li = std::log1p(t.signal / a);
    total += t.coeff * t.signal * gain / (a * b * li * li);
  }
  return total;
}

double PowerObjective::deriv2(double p) const {
  const double w = std::log1p(p * gain / own_noise);
  const double denom = own_noise + p * gain;
  const double h = gain / denom;
  const double numer = alpha_e * w - (alpha_t + alpha_e * p) * h;
  const double numer_prime = (alpha_t + alpha_e * p) * gain * gain / (denom * denom);
  double total = own_coeff * (numer_prime * w - 2.0 * numer * h) / (w * w * w);
  for (const NeighbourTerm &t : neighbours) {
    const double a = t.base + p * gain;
    const double b = a + t.signal;
    const double li = std::log1p(t.signal / a);
    total -= t.coeff * t.signal * gain * gain * (li * (a + b) - 2.0 * t.signal) /
             (a * a * b * b * li * li * li);
  }
  return total;
}

PowerObjective make_transmission_objective(const Scenario &scenario,
                                           const StrategyProfile &profile,
                                           int n) {
  check_user_index(scenario, profile, n);
  const UserParams &user = scenario.users[n];
  const NetworkParams &net = scenario.network;
  const double per_bit = kLn2 / net.channel_bandwidth;

  PowerObjective obj;
  obj.own_coeff = user.task.length_bits * per_bit;
  obj.alpha_t = user.weight_time;
  obj.alpha_e = user.weight_energy;
  obj.gain = user.channel_gain;
  obj.own_noise = net.noise_power + interference_power(scenario, profile, n);

  for (int i : interference_set(scenario, profile, n)) {
    const UserParams &other = scenario.users[i];
    const Strategy &si = profile[i];
    PowerObjective::NeighbourTerm term;
    term.coeff = si.lambda * other.task.length_bits *
                 (other.weight_time + other.weight_energy * si.power) * per_bit;
    term.signal = si.power * other.channel_gain;
    // Interference at i from co-channel transmitters other than i and n; n's
    // own contribution is the p * gain part that varies.
    double cross = 0.0;
    for (int j : interference_set(scenario, profile, i))
      if (j != n)
        cross += profile[j].power * scenario.users[j].channel_gain;
    term.base = net.noise_power + cross;
    obj.neighbours.push_back(term);
  }
  return obj;
}

double transmission_utility(const Scenario &scenario,
                            const StrategyProfile &profile, int n, double p) {
  if (!(p > 0.0))
    throw Error(ErrorCode::domain,
                "transmission utility requires a positive power");
  return make_transmission_objective(scenario, profile, n).value(p);
}

namespace {

// Root of objective.deriv inside a sign-changing bracket. Newton steps off
// the closed-form second derivative, falling back to bisection whenever a
// step leaves the bracket or the curvature is unusable.
double polish_root(const PowerObjective &objective, double lo, double hi,
                   double d_lo, const SolverConfig &cfg) {
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
    const double d = objective.deriv(x);
    if (std::abs(d) <= cfg.newton_tol)
      return x;
    if ((d < 0.0) == (d_lo < 0.0))
      lo = x;
    else
      hi = x;
    if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi)
      return 0.5 * (lo + hi);
    const double d2 = objective.deriv2(x);
    const double newton = x - d / d2;
    if (std::isfinite(newton) && newton > lo && newton < hi)
      x = newton;
    else
      x = 0.5 * (lo + hi);
  }
  return x;
}

} // namespace

PowerSolution minimize_power_objective(const PowerObjective &objective,
                                       double p_lo, double p_hi,
                                       const SolverConfig &cfg) {
  validate_solver_config(cfg);
  if (!(p_lo > 0.0) || !(p_hi >= p_lo))
    throw Error(ErrorCode::invalid_argument,
                "power interval must satisfy 0 < p_lo <= p_hi");

  PowerSolution solution;
  std::vector<double> candidates = {p_lo, p_hi};

  if (p_hi > p_lo) {
    const int cells = std::max(cfg.multistart_count, 3);
    std::vector<double> node(cells + 1), slope(cells + 1);
    for (int k = 0; k <= cells; ++k) {
      node[k] = p_lo + (p_hi - p_lo) * static_cast<double>(k) /
                           static_cast<double>(cells);
      slope[k] = objective.deriv(node[k]);
    }
    for (int k = 0; k <= cells; ++k) {
      if (slope[k] == 0.0) {
        solution.stationary_points.push_back(node[k]);
        candidates.push_back(node[k]);
      }
    }
    for (int k = 0; k < cells; ++k) {
      if (slope[k] == 0.0 || slope[k + 1] == 0.0)
        continue;
      if ((slope[k] < 0.0) == (slope[k + 1] < 0.0))
        continue;
      const double root =
          polish_root(objective, node[k], node[k + 1], slope[k], cfg);
      candidates.push_back(root);
      if (std::abs(objective.deriv(root)) <= cfg.newton_tol)
        solution.stationary_points.push_back(root);
    }
  }

  double best = candidates.front();
  double best_value = objective.value(best);
  for (double p : candidates) {
    const double v = objective.value(p);
    if (v < best_value || (v == best_value && p < best)) {
      best = p;
      best_value = v;
    }
  }
  solution.p_opt = best;
  std::sort(solution.stationary_points.begin(),
            solution.stationary_points.end());
  return solution;
}

PowerSolution best_power(const Scenario &scenario,
                         const StrategyProfile &profile, int n,
                         const SolverConfig &cfg) {
  const double p_lo = min_power(scenario, profile, n);
  const double p_hi = scenario.network.p_max;
  if (p_lo > p_hi)
    throw Error(ErrorCode::infeasible,
                "user " + std::to_string(n) +
                    " cannot reach the SINR threshold within the power cap");
  const PowerObjective objective =
      make_transmission_objective(scenario, profile, n);
  return minimize_power_objective(objective, p_lo, p_hi, cfg);
}

BestResponseResult best_response(const Scenario &scenario,
                                 const StrategyProfile &profile, int n,
                                 const SolverConfig &cfg) {
  check_user_index(scenario, profile, n);
  validate_solver_config(cfg);

  BestResponseResult result;
  result.f_star = best_cpu(scenario.users[n], scenario.network.f_min_floor);

  StrategyProfile scratch = profile;
  scratch[n] = Strategy::local(result.f_star);
  result.utility_local = altruistic_utility(scenario, scratch, n);

  const double p_lo = min_power(scenario, profile, n);
  result.feasible_offload = p_lo <= scenario.network.p_max;
  if (result.feasible_offload) {
    PowerSolution power = minimize_power_objective(
        make_transmission_objective(scenario, profile, n), p_lo,
        scenario.network.p_max, cfg);
    result.p_bar = power.p_opt;
    result.stationary_points = std::move(power.stationary_points);
    scratch[n] = Strategy::offload(result.p_bar);
    result.utility_offload = altruistic_utility(scenario, scratch, n);
  } else {
    result.utility_offload = std::numeric_limits<double>::infinity();
  }

  const bool offload =
      result.feasible_offload &&
      (result.utility_offload < result.utility_local ||
       (result.utility_offload == result.utility_local && !cfg.tie_break_local));
  result.strategy = offload ? Strategy::offload(result.p_bar)
                            : Strategy::local(result.f_star);
  return result;
}

std::vector<Strategy> best_response_candidates(const Scenario &scenario,
                                               const StrategyProfile &profile,
                                               int n, const SolverConfig &cfg) {
  const BestResponseResult br = best_response(scenario, profile, n, cfg);
  std::vector<Strategy> candidates = {profile[n], br.strategy};
  if (br.feasible_offload)
    candidates.push_back(Strategy::offload(br.p_bar));
  candidates.push_back(Strategy::local(br.f_star));
  return candidates;
}

} // namespace offgame
