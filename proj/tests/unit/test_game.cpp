#include <cmath>

#include "doctest.h"

#include "offgame/best_response.hpp"
#include "offgame/checks.hpp"
#include "offgame/game.hpp"
#include "offgame/model.hpp"
#include "offgame/rng.hpp"
#include "test_helpers.hpp"

using namespace offgame;
using testutil::make_scenario;
using testutil::make_user;

TEST_CASE("altruistic utility is own overhead plus affected overheads") {
  Scenario scn = make_scenario({make_user(0, 0, 1e-8), make_user(1, 0, 2e-8),
                                make_user(2, 1, 3e-8)},
                               2);
  StrategyProfile prof;
  prof.strategies = {Strategy::offload(0.1), Strategy::offload(0.05),
                     Strategy::local(5e8)};

  const double expected0 =
      total_overhead(scn, prof, 0) + total_overhead(scn, prof, 1);
  CHECK(altruistic_utility(scn, prof, 0) ==
        doctest::Approx(expected0).epsilon(1e-15));

  // User 2 shares its channel with nobody, so its utility is its overhead.
  CHECK(altruistic_utility(scn, prof, 2) ==
        doctest::Approx(total_overhead(scn, prof, 2)).epsilon(1e-15));
}

TEST_CASE("potential equals the sum of all overheads") {
  Scenario scn = make_scenario({make_user(0, 0, 1e-8), make_user(1, 0, 2e-8),
                                make_user(2, 1, 3e-8)},
                               2);
  StrategyProfile prof;
  prof.strategies = {Strategy::offload(0.1), Strategy::offload(0.05),
                     Strategy{0.5, 0.02, 4e8}};

  double sum = 0.0;
  for (int n = 0; n < 3; ++n) sum += total_overhead(scn, prof, n);
  CHECK(potential(scn, prof) == doctest::Approx(sum).epsilon(1e-15));
}

TEST_CASE("unilateral deviations change utility and potential identically") {
  Rng rng(20260301);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario scn = random_scenario(rng.next_u64(), 2, 8, 3);
    StrategyProfile prof = random_profile(scn, rng.next_u64());
    for (int rep = 0; rep < 20; ++rep) {
      const int n = static_cast<int>(rng.next_below(scn.users.size()));
      StrategyProfile deviated = prof;
      deviated.strategies[n] =
          random_profile(scn, rng.next_u64()).strategies[n];

      const double du = altruistic_utility(scn, deviated, n) -
                        altruistic_utility(scn, prof, n);
      const double dphi = potential(scn, deviated) - potential(scn, prof);
      const double tol = 1e-9 * std::max(1.0, std::abs(dphi));
      CHECK(std::abs(du - dphi) <= tol);

      const double residual =
          exact_potential_residual(scn, prof, n, deviated[n]);
      CHECK(std::abs(residual) <= tol);
    }
  }
}

TEST_CASE("nash check flags a profitable unilateral deviation") {
  Scenario scn = make_scenario({make_user(0, 0, 1e-8)}, 1);

  // A lone user stuck at the cpu floor, far below its optimal frequency.
  StrategyProfile prof;
  prof.strategies = {Strategy::local(1e6)};

  SolverConfig cfg;
  const std::vector<std::vector<Strategy>> cands = {
      best_response_candidates(scn, prof, 0, cfg)};
  const NashCheck check = is_nash(scn, prof, cands, 1e-9);
  REQUIRE_FALSE(check.is_nash);
  REQUIRE(check.witness.has_value());
  CHECK(check.witness->user == 0);
  CHECK(check.witness->improvement > 0.0);

  // Moving the user to its best response removes the witness.
  StrategyProfile best = prof;
  best.strategies[0] = best_response(scn, prof, 0, cfg).strategy;
  const std::vector<std::vector<Strategy>> cands2 = {
      best_response_candidates(scn, best, 0, cfg)};
  const double eps = 1e-9 * std::max(1.0, std::abs(potential(scn, best)));
  CHECK(is_nash(scn, best, cands2, eps).is_nash);
}
