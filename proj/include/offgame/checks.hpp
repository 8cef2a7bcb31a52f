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

#ifndef OFFGAME_CHECKS_HPP
#define OFFGAME_CHECKS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "offgame/types.hpp"

namespace offgame {

// Self-contained property suites runnable from the CLI (`check` subcommand).
// Every check validates solver output against an independent reference
// computation (exhaustive grids, golden-section search, direct utility
// differences) that never calls into the code path under test.

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail; // metric achieved, or a counterexample dump on failure
};

struct SuiteReport {
  std::string suite;
  bool passed = false;
  std::vector<CheckResult> checks;
};

// suite is one of: potential, best_response, convergence, poa.
// Throws Error{invalid_argument} for anything else.
SuiteReport run_check_suite(const std::string &suite, std::uint64_t seed);

std::vector<std::string> check_suite_names();

std::string suite_report_to_json(const SuiteReport &report);

// --- independent reference minimisers (shared by tests) ---

// Golden-section search on a unimodal function over [lo, hi].
double golden_section_minimize(const std::function<double(double)> &f,
                               double lo, double hi, int iterations = 200);

// Position of the smallest value over `count` uniform samples of [lo, hi].
double grid_minimize(const std::function<double(double)> &f, double lo,
                     double hi, int count);

// --- deterministic random instances (shared by suites and tests) ---

// Random small scenario in the reference parameter family. Channel count is
// kept low so users actually interact.
Scenario random_scenario(std::uint64_t seed, int min_users, int max_users,
                         int max_channels);

// Random box-feasible profile: every strategy respects the per-user bounds;
// the coupled SINR admission constraint is not imposed (the properties
// checked against these profiles do not require it).
StrategyProfile random_profile(const Scenario &scenario, std::uint64_t seed);

} // namespace offgame

#endif // OFFGAME_CHECKS_HPP
