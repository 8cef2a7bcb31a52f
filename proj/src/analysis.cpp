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

#include "offgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "offgame/game.hpp"
#include "offgame/model.hpp"

namespace offgame {

namespace {

[[noreturn]] void guard_error(double count) {
  throw Error(ErrorCode::guard,
              "enumeration of " + std::to_string(count) +
                  " combinations exceeds the guard of " +
                  std::to_string(kEnumerationGuard));
}

void check_guard(const std::vector<std::size_t> &sizes) {
  double product = 1.0;
  for (std::size_t s : sizes) {
    product *= static_cast<double>(s);
    if (product > kEnumerationGuard)
      guard_error(product);
  }
}

// Odometer over per-position index ranges. f receives the index vector and
// returns false to stop early.
template <typename F>
void for_each_combination(const std::vector<std::size_t> &sizes, F &&f) {
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    if (!f(idx))
      return;
    std::size_t pos = 0;
    while (pos < sizes.size()) {
      if (++idx[pos] < sizes[pos])
        break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == sizes.size())
      return;
  }
}

bool same_strategy(const Strategy &a, const Strategy &b) {
  return a.lambda == b.lambda && a.power == b.power && a.cpu == b.cpu;
}

void validate_discretization(const Discretization &disc) {
  if (disc.lambda_levels.empty())
    throw Error(ErrorCode::invalid_argument,
                "discretization needs at least one offloading level");
  for (double l : disc.lambda_levels)
    if (!std::isfinite(l) || l < 0.0 || l > 1.0)
      throw Error(ErrorCode::invalid_argument,
                  "offloading levels must lie in [0, 1]");
  if (disc.power_levels_per_user < 1)
    throw Error(ErrorCode::invalid_argument,
                "power_levels_per_user must be at least 1");
  for (double f : disc.cpu_levels)
    if (!(f > 0.0))
      throw Error(ErrorCode::invalid_argument,
                  "cpu levels must be positive");
}

// Interference-free power floor; the loosest admission bound any profile can
// grant this user, hence the left edge of its oracle power grid.
double static_min_power(const Scenario &scenario, int n) {
  return scenario.network.sinr_threshold * scenario.network.noise_power /
         scenario.users[n].channel_gain;
}

// Every transmitter must clear the SINR threshold, with a hair of slack for
// grid points sitting exactly on the admission boundary.
bool admission_feasible(const Scenario &scenario,
                        const StrategyProfile &profile) {
  for (int n = 0; n < scenario.num_users(); ++n) {
    if (profile[n].lambda <= 0.0)
      continue;
    const double floor = min_power(scenario, profile, n);
    if (profile[n].power < floor * (1.0 - 1e-12))
      return false;
  }
  return true;
}

} // namespace

std::vector<std::vector<Strategy>>
oracle_candidates(const Scenario &scenario, const Discretization &disc) {
  validate_discretization(disc);
  if (disc.anchor && disc.anchor->size() != scenario.users.size())
    throw Error(ErrorCode::invalid_argument,
                "anchor profile size does not match the number of users");

  std::vector<std::vector<Strategy>> all(scenario.users.size());
  for (int n = 0; n < scenario.num_users(); ++n) {
    const UserParams &user = scenario.users[n];
    std::vector<Strategy> &cands = all[n];

    std::vector<double> cpu_levels;
    if (disc.cpu_levels.empty()) {
      cpu_levels.push_back(best_cpu(user, scenario.network.f_min_floor));
      if (cpu_levels.front() != user.f_max)
        cpu_levels.push_back(user.f_max);
    } else {
      for (double f : disc.cpu_levels)
        if (f <= user.f_max)
          cpu_levels.push_back(f);
    }

    std::vector<double> powers;
    const double lo = static_min_power(scenario, n);
    const double hi = scenario.network.p_max;
    if (lo <= hi) {
      const int levels = disc.power_levels_per_user;
      if (levels == 1) {
        powers.push_back(hi);
      } else {
        for (int k = 0; k < levels; ++k)
          powers.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                    static_cast<double>(levels - 1));
      }
    }

    for (double lambda : disc.lambda_levels) {
      if (lambda == 0.0) {
        for (double f : cpu_levels)
          cands.push_back(Strategy::local(f));
      } else if (lambda == 1.0) {
        for (double p : powers)
          cands.push_back(Strategy::offload(p));
      } else {
        for (double p : powers)
          for (double f : cpu_levels)
            cands.push_back(Strategy{lambda, p, f});
      }
    }

    if (disc.anchor) {
      const Strategy &a = (*disc.anchor)[n];
      bool present = false;
      for (const Strategy &c : cands)
        present = present || same_strategy(c, a);
      if (!present)
        cands.push_back(a);
    }

    if (cands.empty())
      throw Error(ErrorCode::infeasible,
                  "user " + std::to_string(n) +
                      " has no feasible oracle candidates");
  }
  return all;
}

double total_utility(const Scenario &scenario, const StrategyProfile &profile) {
  double sum = 0.0;
  for (int n = 0; n < scenario.num_users(); ++n)
    sum += altruistic_utility(scenario, profile, n);
  return sum;
}

namespace {

// Raise transmit powers until every transmitter clears its admission floor.
// Returns false when that cannot be done within the power cap. Raising one
// power raises the floors of the others, hence the fixed-point loop.
bool repair_admission(const Scenario &scenario, StrategyProfile &profile) {
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (int n = 0; n < scenario.num_users(); ++n) {
      if (profile[n].lambda <= 0.0)
        continue;
      const double floor = min_power(scenario, profile, n);
      if (floor > scenario.network.p_max)
        return false;
      if (profile[n].power < floor) {
        profile[n].power = floor;
        changed = true;
      }
    }
    if (!changed)
      return true;
  }
  return admission_feasible(scenario, profile);
}

// Cyclic coordinate descent on the total utility. Per coordinate the total
// reduces (up to a positive channel-wide factor) to the user's own
// transmission objective, which the 1-D solver minimises globally; the total
// therefore never increases.
bool coordinate_descent(const Scenario &scenario, StrategyProfile &profile,
                        const SolverConfig &cfg) {
  for (int iter = 0; iter < 50; ++iter) {
    bool moved = false;
    for (int n = 0; n < scenario.num_users(); ++n) {
      if (profile[n].lambda <= 0.0)
        continue;
      const double p_lo = min_power(scenario, profile, n);
      if (p_lo > scenario.network.p_max)
        return false;
      PowerObjective obj = make_transmission_objective(scenario, profile, n);
      obj.own_coeff *= profile[n].lambda; // partial offloaders upload less
      const PowerSolution sol =
          minimize_power_objective(obj, p_lo, scenario.network.p_max, cfg);
      const double current = profile[n].power;
      const bool current_ok =
          current >= p_lo && current <= scenario.network.p_max;
      if (!current_ok || obj.value(sol.p_opt) < obj.value(current)) {
        profile[n].power = sol.p_opt;
        if (std::abs(sol.p_opt - current) >
            1e-12 * std::max(sol.p_opt, current))
          moved = true;
      }
    }
    if (!moved)
      break;
  }
  return true;
}

} // namespace

CentralizedOptimum centralized_optimum(const Scenario &scenario,
                                       const Discretization &disc,
                                       const SolverConfig &cfg,
                                       const StrategyProfile *seed) {
  validate_scenario(scenario);
  validate_discretization(disc);
  validate_solver_config(cfg);
  const int num_users = scenario.num_users();

  {
    double combos = 1.0;
    for (int n = 0; n < num_users; ++n) {
      combos *= static_cast<double>(disc.lambda_levels.size());
      if (combos > kEnumerationGuard)
        guard_error(combos);
    }
  }

  std::vector<double> f_best(num_users);
  for (int n = 0; n < num_users; ++n)
    f_best[n] = best_cpu(scenario.users[n], scenario.network.f_min_floor);

  bool found = false;
  CentralizedOptimum best;
  best.total = std::numeric_limits<double>::infinity();

  auto try_assignment = [&](const std::vector<double> &lambdas,
                            const std::vector<const StrategyProfile *> &extra_starts) {
    // Deterministic starts: full power, then a mid-range point; extra starts
    // (the seed) come first so their basin is always explored.
    std::vector<StrategyProfile> starts;
    for (const StrategyProfile *s : extra_starts)
      if (s)
        starts.push_back(*s);
    for (int variant = 0; variant < 2; ++variant) {
      StrategyProfile start;
      start.strategies.resize(num_users);
      bool possible = true;
      for (int n = 0; n < num_users; ++n) {
        const double lambda = lambdas[n];
        if (lambda == 0.0) {
          start[n] = Strategy::local(f_best[n]);
          continue;
        }
        const double lo = static_min_power(scenario, n);
        if (lo > scenario.network.p_max) {
          possible = false; // this user can never transmit
          break;
        }
        const double p = variant == 0 ? scenario.network.p_max
                                      : std::sqrt(lo * scenario.network.p_max);
        start[n] = Strategy{lambda, std::min(p, scenario.network.p_max),
                            lambda == 1.0 ? 0.0 : f_best[n]};
      }
      if (possible)
        starts.push_back(std::move(start));
    }

    for (StrategyProfile profile : starts) {
      if (!repair_admission(scenario, profile))
        continue;
      if (!coordinate_descent(scenario, profile, cfg))
        continue;
      const double total = total_utility(scenario, profile);
      if (!found || total < best.total) {
        found = true;
        best.total = total;
        best.profile = std::move(profile);
      }
    }
  };

  std::vector<std::size_t> sizes(num_users, disc.lambda_levels.size());
  std::vector<double> lambdas(num_users);
  for_each_combination(sizes, [&](const std::vector<std::size_t> &idx) {
    for (int n = 0; n < num_users; ++n)
      lambdas[n] = disc.lambda_levels[idx[n]];
    try_assignment(lambdas, {});
    return true;
  });

  if (seed) {
    if (seed->size() != scenario.users.size())
      throw Error(ErrorCode::invalid_argument,
                  "seed profile size does not match the number of users");
    // The seed profile is a candidate in its own right (so the optimum can
    // never be worse than it) and seeds the descent under its own pattern.
    const double seed_total = total_utility(scenario, *seed);
    if (!found || seed_total < best.total) {
      found = true;
      best.total = seed_total;
      best.profile = *seed;
    }
    for (int n = 0; n < num_users; ++n)
      lambdas[n] = (*seed)[n].lambda;
    try_assignment(lambdas, {seed});
  }

  if (!found)
    throw Error(ErrorCode::infeasible,
                "no feasible assignment in the discretized space");
  return best;
}

double poa_upper_bound(const Scenario &scenario,
                       const StrategyProfile &ne_profile) {
  validate_profile(scenario, ne_profile);
  const NetworkParams &net = scenario.network;
  const int num_users = scenario.num_users();

  // Per-user overhead bounds at the equilibrium's offloading pattern:
  // pessimistic uplink (every interferer at the strongest observed power)
  // against optimistic (interference-free uplink, best CPU speed).
  std::vector<double> o_max(num_users), o_min(num_users);
  for (int n = 0; n < num_users; ++n) {
    const UserParams &user = scenario.users[n];
    const Strategy &s = ne_profile[n];
    double cloud_max = 0.0, cloud_min = 0.0;
    double local_max = 0.0, local_min = 0.0;
    if (s.lambda > 0.0) {
      const std::vector<int> interferers =
          interference_set(scenario, ne_profile, n);
      double p_loudest = 0.0;
      for (int j : interferers)
        p_loudest = std::max(p_loudest, ne_profile[j].power);
      double gain_sum = 0.0;
      for (int j : interferers)
        gain_sum += scenario.users[j].channel_gain;
      const double execute = user.weight_time * user.task.workload() / net.server_cpu;
      const double upload_weight =
          (user.weight_time + user.weight_energy * s.power) * user.task.length_bits;
      const double r_pess =
          net.channel_bandwidth *
          std::log2(1.0 + s.power * user.channel_gain /
                              (net.noise_power + p_loudest * gain_sum));
      const double r_free =
          net.channel_bandwidth *
          std::log2(1.0 + s.power * user.channel_gain / net.noise_power);
      cloud_max = upload_weight / r_pess + execute;
      cloud_min = upload_weight / r_free + execute;
    }
    if (s.lambda < 1.0) {
      local_max = std::max(local_overhead(user, net.f_min_floor),
                           local_overhead(user, user.f_max));
      local_min = local_overhead(user, best_cpu(user, net.f_min_floor));
    }
    o_max[n] = s.lambda * cloud_max + (1.0 - s.lambda) * local_max;
    o_min[n] = s.lambda * cloud_min + (1.0 - s.lambda) * local_min;
  }

  double numerator = 0.0, denominator = 0.0;
  for (int n = 0; n < num_users; ++n) {
    numerator += o_max[n];
    denominator += o_min[n];
    for (int i : interference_set(scenario, ne_profile, n)) {
      numerator += o_max[i];
      denominator += o_min[i];
    }
  }
  return numerator / denominator;
}

PoAReport price_of_anarchy(const Scenario &scenario,
                           const StrategyProfile &ne_profile,
                           const Discretization &disc,
                           const SolverConfig &cfg) {
  validate_profile(scenario, ne_profile);
  PoAReport report;
  report.ne_total = total_utility(scenario, ne_profile);
  report.ne_potential = potential(scenario, ne_profile);

  const CentralizedOptimum opt =
      centralized_optimum(scenario, disc, cfg, &ne_profile);
  report.opt_total = opt.total;
  report.opt_profile = opt.profile;
  report.opt_potential = potential(scenario, opt.profile);

  report.poa = report.ne_total / report.opt_total;
  report.poa_potential = report.ne_potential / report.opt_potential;
  report.upper_bound = poa_upper_bound(scenario, ne_profile);
  return report;
}

ParetoResult pareto_check(const Scenario &scenario,
                          const StrategyProfile &profile,
                          const Discretization &disc) {
  validate_profile(scenario, profile);
  Discretization anchored = disc;
  anchored.anchor = profile; // the checked profile is always in the grid
  const std::vector<std::vector<Strategy>> cands =
      oracle_candidates(scenario, anchored);

  std::vector<std::size_t> sizes;
  for (const auto &c : cands)
    sizes.push_back(c.size());
  check_guard(sizes);

  const int num_users = scenario.num_users();
  std::vector<double> baseline(num_users);
  for (int n = 0; n < num_users; ++n)
    baseline[n] = altruistic_utility(scenario, profile, n);

  ParetoResult result;
  StrategyProfile trial;
  trial.strategies.resize(num_users);
  for_each_combination(sizes, [&](const std::vector<std::size_t> &idx) {
    for (int n = 0; n < num_users; ++n)
      trial[n] = cands[n][idx[n]];
    if (!admission_feasible(scenario, trial))
      return true;
    bool weak_everywhere = true, strict_somewhere = false;
    for (int n = 0; n < num_users && weak_everywhere; ++n) {
      const double u = altruistic_utility(scenario, trial, n);
      const double scale = std::max(1.0, std::abs(baseline[n]));
      if (u > baseline[n] + 1e-12 * scale)
        weak_everywhere = false;
      else if (u < baseline[n] - 1e-9 * scale)
        strict_somewhere = true;
    }
    if (weak_everywhere && strict_somewhere) {
      result.is_pareto = false;
      result.dominator = trial;
      return false;
    }
    return true;
  });
  return result;
}

std::vector<StrategyProfile> ne_oracle(const Scenario &scenario,
                                       const Discretization &disc,
                                       double eps) {
  validate_scenario(scenario);
  const std::vector<std::vector<Strategy>> cands =
      oracle_candidates(scenario, disc);

  std::vector<std::size_t> sizes;
  for (const auto &c : cands)
    sizes.push_back(c.size());
  check_guard(sizes);

  const int num_users = scenario.num_users();
  std::vector<StrategyProfile> equilibria;
  StrategyProfile profile;
  profile.strategies.resize(num_users);
  for_each_combination(sizes, [&](const std::vector<std::size_t> &idx) {
    for (int n = 0; n < num_users; ++n)
      profile[n] = cands[n][idx[n]];
    if (!admission_feasible(scenario, profile))
      return true;
    bool stable = true;
    StrategyProfile scratch = profile;
    for (int n = 0; n < num_users && stable; ++n) {
      const double current = altruistic_utility(scenario, profile, n);
      const double floor = min_power(scenario, profile, n);
      for (const Strategy &c : cands[n]) {
        if (same_strategy(c, profile[n]))
          continue;
        // A deviation must itself respect the admission constraint.
        if (c.lambda > 0.0 && c.power < floor * (1.0 - 1e-12))
          continue;
        scratch[n] = c;
        if (altruistic_utility(scenario, scratch, n) < current - eps) {
          stable = false;
          break;
        }
      }
      scratch[n] = profile[n];
    }
    if (stable)
      equilibria.push_back(profile);
    return true;
  });
  return equilibria;
}

double inverse_total_sinr(const Scenario &scenario,
                          const StrategyProfile &profile) {
  double total = 0.0;
  for (int n = 0; n < scenario.num_users(); ++n)
    if (profile[n].lambda > 0.0 && profile[n].power > 0.0)
      total += sinr(scenario, profile, n);
  if (total <= 0.0)
    return std::numeric_limits<double>::infinity();
  return 1.0 / total;
}

namespace {

std::vector<double> average_ranks(const std::vector<double> &values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]])
      ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

} // namespace

double spearman(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::invalid_argument,
                "rank correlation needs equal-length series");
  const std::size_t n = x.size();
  if (n < 2)
    return 0.0;
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

} // namespace offgame
