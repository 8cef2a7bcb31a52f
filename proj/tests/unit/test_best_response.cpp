#include <cmath>
#include <vector>

#include "doctest.h"

#include "offgame/best_response.hpp"
#include "offgame/game.hpp"
#include "offgame/model.hpp"
#include "offgame/rng.hpp"
#include "offgame/checks.hpp"
#include "test_helpers.hpp"

using namespace offgame;
using testutil::make_scenario;
using testutil::make_user;

TEST_CASE("best_cpu hits the interior stationary point exactly") {
  UserParams u = make_user(0, 0, 1e-8);
  u.kappa = 4e-27; // chosen so the interior optimum is a round 5e8 Hz
  CHECK(best_cpu(u, 1e6) == doctest::Approx(5e8).epsilon(1e-12));
}

TEST_CASE("best_cpu clamps at both ends and honours weight extremes") {
  const double floor = 1e6;

  UserParams latency_only = make_user(0, 0, 1e-8, 1.0);
  CHECK(best_cpu(latency_only, floor) == latency_only.f_max);

  UserParams energy_only = make_user(0, 0, 1e-8, 0.0);
  CHECK(best_cpu(energy_only, floor) == floor);

  UserParams fast = make_user(0, 0, 1e-8, 0.5);
  fast.kappa = 1e-30; // interior optimum far above f_max
  CHECK(best_cpu(fast, floor) == fast.f_max);

  UserParams slow = make_user(0, 0, 1e-8, 0.5);
  slow.kappa = 1.0; // interior optimum far below the floor
  CHECK(best_cpu(slow, floor) == floor);

  CHECK_THROWS_AS((void)best_cpu(fast, 2e9), Error);
}

TEST_CASE("min_power scales the admission threshold by noise plus interference") {
  Scenario scn = make_scenario(
      {make_user(0, 0, 1e-8), make_user(1, 0, 2e-8)}, 1);
  scn.network.sinr_threshold = 2.0;
  StrategyProfile prof;
  prof.strategies = {Strategy::local(5e8), Strategy::offload(0.05)};

  const double expected = 2.0 * (1e-13 + 0.05 * 2e-8) / 1e-8;
  CHECK(min_power(scn, prof, 0) == doctest::Approx(expected).epsilon(1e-15));
}

namespace {

// An objective with two active co-channel neighbours, so every term shape is
// exercised.
PowerObjective crowded_objective(Scenario &scn, StrategyProfile &prof) {
  scn = make_scenario({make_user(0, 0, 1e-8), make_user(1, 0, 2e-8, 0.3),
                       make_user(2, 0, 5e-9, 0.8)},
                      1);
  prof.strategies = {Strategy::offload(0.1), Strategy::offload(0.05),
                     Strategy::offload(0.08)};
  return make_transmission_objective(scn, prof, 0);
}

} // namespace

TEST_CASE("closed-form derivatives match central finite differences") {
  Scenario scn;
  StrategyProfile prof;
  const PowerObjective obj = crowded_objective(scn, prof);

  for (double p : {0.01, 0.03, 0.07, 0.12, 0.149}) {
    const double h = 1e-6 * std::max(p, 1e-3);
    const double fd1 = (obj.value(p + h) - obj.value(p - h)) / (2.0 * h);
    const double d1 = obj.deriv(p);
    CHECK(std::abs(d1 - fd1) <=
          1e-5 * std::max({std::abs(d1), std::abs(fd1), 1e-12}));

    const double fd2 = (obj.deriv(p + h) - obj.deriv(p - h)) / (2.0 * h);
    const double d2 = obj.deriv2(p);
    CHECK(std::abs(d2 - fd2) <=
          1e-5 * std::max({std::abs(d2), std::abs(fd2), 1e-12}));
  }
}

TEST_CASE("objective value matches a term-by-term direct evaluation") {
  Scenario scn;
  StrategyProfile prof;
  const PowerObjective obj = crowded_objective(scn, prof);

  const double p = 0.09;
  const double ln2 = std::log(2.0);
  // Own term: weighted upload cost of user 0 at power p.
  double expected = 5e6 * ln2 / 1e7 * (0.5 + 0.5 * p) /
                    std::log1p(p * 1e-8 / (1e-13 + 0.05 * 2e-8 + 0.08 * 5e-9));
  // Neighbour terms: uplink costs of users 1 and 2 as p varies.
  expected += 5e6 * (0.3 + 0.7 * 0.05) * ln2 / 1e7 /
              std::log1p(0.05 * 2e-8 / (1e-13 + 0.08 * 5e-9 + p * 1e-8));
  expected += 5e6 * (0.8 + 0.2 * 0.08) * ln2 / 1e7 /
              std::log1p(0.08 * 5e-9 / (1e-13 + 0.05 * 2e-8 + p * 1e-8));
  CHECK(obj.value(p) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("minimize_power_objective matches a dense grid scan") {
  Scenario scn;
  StrategyProfile prof;
  const PowerObjective obj = crowded_objective(scn, prof);
  SolverConfig cfg;

  const double p_lo = min_power(scn, prof, 0);
  REQUIRE(p_lo < scn.network.p_max);
  const PowerSolution sol = minimize_power_objective(obj, p_lo, 0.15, cfg);

  CHECK(sol.p_opt >= p_lo);
  CHECK(sol.p_opt <= 0.15);
  for (double sp : sol.stationary_points)
    CHECK(std::abs(obj.deriv(sp)) <= cfg.newton_tol);

  const double p_grid =
      grid_minimize([&](double p) { return obj.value(p); }, p_lo, 0.15, 100000);
  const double v_solver = obj.value(sol.p_opt);
  const double v_grid = obj.value(p_grid);
  CHECK(v_solver <= v_grid * (1.0 + 1e-6));
}

TEST_CASE("best_power refuses an unreachable admission threshold") {
  Scenario scn = make_scenario({make_user(0, 0, 1e-8)}, 1);
  scn.network.sinr_threshold = 2e4; // forces min power above the cap
  StrategyProfile prof;
  prof.strategies = {Strategy::local(5e8)};
  SolverConfig cfg;

  CHECK_THROWS_AS((void)best_power(scn, prof, 0, cfg), Error);
  try {
    (void)best_power(scn, prof, 0, cfg);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::infeasible);
  }
}

TEST_CASE("a well-connected user offloads, a bulky upload stays local") {
  SolverConfig cfg;

  // Good gain, reference task: offloading wins comfortably.
  Scenario good = make_scenario({make_user(0, 0, 1e-8)}, 1);
  StrategyProfile prof;
  prof.strategies = {Strategy::local(5e8)};
  const BestResponseResult br_good = best_response(good, prof, 0, cfg);
  CHECK(br_good.strategy.lambda == 1.0);
  CHECK(br_good.strategy.cpu == 0.0);
  CHECK(br_good.strategy.power == br_good.p_bar);
  CHECK(br_good.utility_offload < br_good.utility_local);

  // Huge file with a tiny compute load: the upload dominates; stay local.
  Scenario bulky = make_scenario({make_user(0, 0, 1e-8)}, 1);
  bulky.users[0].task = Task{5e8, 0.2}; // 5e8 bits, 1e8 cycles total
  const BestResponseResult br_bulky = best_response(bulky, prof, 0, cfg);
  CHECK(br_bulky.feasible_offload);
  CHECK(br_bulky.strategy.lambda == 0.0);
  CHECK(br_bulky.strategy.power == 0.0);
  CHECK(br_bulky.strategy.cpu == br_bulky.f_star);

  // Admission infeasible: local is the only branch.
  Scenario weak = make_scenario({make_user(0, 0, 5e-14)}, 1);
  const BestResponseResult br_weak = best_response(weak, prof, 0, cfg);
  CHECK_FALSE(br_weak.feasible_offload);
  CHECK(br_weak.strategy.lambda == 0.0);
  CHECK(std::isinf(br_weak.utility_offload));
}

TEST_CASE("the chosen branch is never beaten by the other branch") {
  Rng rng(77001);
  SolverConfig cfg;
  for (int trial = 0; trial < 25; ++trial) {
    const Scenario scn = random_scenario(rng.next_u64(), 2, 6, 2);
    StrategyProfile prof = random_profile(scn, rng.next_u64());
    for (int n = 0; n < scn.num_users(); ++n) {
      const BestResponseResult br = best_response(scn, prof, n, cfg);
      StrategyProfile trial_prof = prof;
      trial_prof[n] = br.strategy;
      const double chosen = altruistic_utility(scn, trial_prof, n);
      CHECK(chosen <=
            std::min(br.utility_local, br.utility_offload) * (1.0 + 1e-12) +
                1e-15);
    }
  }
}

TEST_CASE("candidate deviations include both branches") {
  Scenario scn = make_scenario({make_user(0, 0, 1e-8)}, 1);
  StrategyProfile prof;
  prof.strategies = {Strategy::local(5e8)};
  SolverConfig cfg;

  const auto cands = best_response_candidates(scn, prof, 0, cfg);
  REQUIRE(cands.size() >= 3);
  bool has_current = false, has_offload = false, has_local = false;
  for (const Strategy &s : cands) {
    if (s.lambda == 0.0 && s.cpu == 5e8) has_current = true;
    if (s.lambda == 1.0) has_offload = true;
    if (s.lambda == 0.0 && s.cpu > 0.0 && s.cpu != 5e8) has_local = true;
  }
  CHECK(has_current);
  CHECK(has_offload);
  CHECK(has_local);
}
