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

#ifndef OFFGAME_TRACE_IO_HPP
#define OFFGAME_TRACE_IO_HPP

#include <cstdint>
#include <string>

#include "offgame/dynamics.hpp"

namespace offgame {

// Run metadata stamped as '#'-prefixed comment lines ahead of each CSV header.
struct TraceMeta {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::uint64_t spec_hash = 0;
  std::string schedule;
};

// Shortest round-trip decimal form of a double ("0.15", "1e-13"). All CSV and
// report numbers go through this one function so outputs are byte-stable.
std::string format_double(double value);

std::string schedule_name(ScheduleKind kind);
ScheduleKind schedule_from_name(const std::string &name);

// Per-user rows, one block of N per completed round:
//   round,user_id,lambda,power_w,cpu_hz,overhead,utility
std::string trace_to_csv(const Scenario &scenario, const IterationTrace &trace,
                         const TraceMeta &meta);

// One row per completed round: round,potential,offloader_count
std::string summary_to_csv(const IterationTrace &trace, const TraceMeta &meta);

// Reconstruct the final profile recorded in a trace CSV (the rows of its
// largest round index). Validates the user set against the scenario.
StrategyProfile profile_from_trace_csv(const Scenario &scenario,
                                       const std::string &csv_text);

} // namespace offgame

#endif // OFFGAME_TRACE_IO_HPP
