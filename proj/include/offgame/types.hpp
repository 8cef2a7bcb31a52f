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

#ifndef OFFGAME_TYPES_HPP
#define OFFGAME_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace offgame {

// Error categories. They map one-to-one onto the C API status codes and onto
// CLI exit codes, so keep the set stable.
enum class ErrorCode {
  invalid_argument, // malformed inputs, broken invariants
  parse,            // JSON/CSV syntax errors
  domain,           // evaluation outside an operation's domain (e.g. rate at p=0)
  infeasible,       // no feasible point (e.g. min power above the power cap)
  guard,            // enumeration size guard tripped
  io,               // file system problems
  internal          // should-not-happen conditions
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// One computation task: an input of `length_bits` bits that costs
// `cycles_per_bit` CPU cycles per bit to process.
struct Task {
  double length_bits = 0.0;    // L, bits
  double cycles_per_bit = 0.0; // C, cycles/bit

  // Total CPU work for the task, in cycles.
  double workload() const { return length_bits * cycles_per_bit; }
};

// Static per-user parameters. `weight_time` and `weight_energy` trade off
// latency against battery drain in the overhead score and must sum to one.
struct UserParams {
  int user_id = 0;
  int channel = 0;            // fixed subchannel assignment, 0-based
  double channel_gain = 0.0;  // G, uplink gain towards the base station
  double kappa = 0.0;         // energy per cycle coefficient, J/cycle/Hz^2
  double f_max = 0.0;         // local CPU cap, Hz
  double weight_time = 0.0;   // alpha_t in [0,1]
  double weight_energy = 0.0; // alpha_e in [0,1], alpha_t + alpha_e = 1
  Task task;
};

// Shared network-side parameters. `channel_bandwidth` is per subchannel.
struct NetworkParams {
  int num_channels = 0;
  double channel_bandwidth = 0.0; // omega, Hz per subchannel
  double noise_power = 0.0;       // N0, W
  double server_cpu = 0.0;        // f_c, Hz available at the edge server
  double p_max = 0.0;             // transmit power cap, W
  double sinr_threshold = 0.0;    // theta, minimum admissible SINR
  double f_min_floor = 1e6;       // lower clamp for local CPU choices, Hz
};

// One user's decision triple: the offloaded fraction, the uplink transmit
// power and the local CPU speed. A non-offloading user must not transmit.
struct Strategy {
  double lambda = 0.0; // offloaded fraction in [0,1]
  double power = 0.0;  // W; 0 iff lambda == 0
  double cpu = 0.0;    // Hz used for the local share

  static Strategy local(double f) { return Strategy{0.0, 0.0, f}; }
  static Strategy offload(double p) { return Strategy{1.0, p, 0.0}; }
};

struct StrategyProfile {
  std::vector<Strategy> strategies;

  std::size_t size() const { return strategies.size(); }
  Strategy &operator[](std::size_t i) { return strategies[i]; }
  const Strategy &operator[](std::size_t i) const { return strategies[i]; }
};

struct Scenario {
  std::vector<UserParams> users;
  NetworkParams network;

  int num_users() const { return static_cast<int>(users.size()); }
};

// Context-free strategy checks: lambda in [0,1], nonnegative power and cpu,
// and transmit power present exactly when some share is offloaded. Violations
// are reported, never clamped.
void validate_strategy(const Strategy &s);

// Scenario-level parameter checks (positive gains, weight sums, channel
// indices in range, ...). Throws Error{invalid_argument} naming the field.
void validate_scenario(const Scenario &scenario);

// Profile checks against a scenario: size match, per-strategy checks, power
// cap and CPU cap. The SINR admission constraint is profile-coupled and is
// checked separately by the solvers and oracles that need it.
void validate_profile(const Scenario &scenario, const StrategyProfile &profile);

} // namespace offgame

#endif // OFFGAME_TYPES_HPP
