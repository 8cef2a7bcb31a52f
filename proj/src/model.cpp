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

#include "offgame/model.hpp"

#include <cmath>
#include <string>

namespace offgame {

namespace {

[[noreturn]] void domain_error(const std::string &msg) {
  throw Error(ErrorCode::domain, msg);
}

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

std::vector<int> interference_set(const Scenario &scenario,
                                  const StrategyProfile &profile, int n) {
  check_user_index(scenario, profile, n);
  std::vector<int> set;
  const int channel = scenario.users[n].channel;
  for (int i = 0; i < scenario.num_users(); ++i) {
    if (i == n)
      continue;
    if (scenario.users[i].channel == channel && profile[i].lambda > 0.0)
      set.push_back(i);
  }
  return set;
}

double interference_power(const Scenario &scenario,
                          const StrategyProfile &profile, int n) {
  check_user_index(scenario, profile, n);
  double total = 0.0;
  const int channel = scenario.users[n].channel;
  for (int i = 0; i < scenario.num_users(); ++i) {
    if (i == n)
      continue;
    if (scenario.users[i].channel == channel && profile[i].lambda > 0.0)
      total += profile[i].power * scenario.users[i].channel_gain;
  }
  return total;
}

double sinr(const Scenario &scenario, const StrategyProfile &profile, int n) {
  check_user_index(scenario, profile, n);
  const Strategy &s = profile[n];
  if (s.lambda <= 0.0 || s.power <= 0.0)
    domain_error("SINR undefined for a non-transmitting user");
  const double interference = interference_power(scenario, profile, n);
  return s.power * scenario.users[n].channel_gain /
         (scenario.network.noise_power + interference);
}

double transmission_rate(const Scenario &scenario,
                         const StrategyProfile &profile, int n) {
  const double ratio = sinr(scenario, profile, n); // validates indices too
  return scenario.network.channel_bandwidth * std::log2(1.0 + ratio);
}

double local_overhead(const UserParams &user, double f) {
  if (!std::isfinite(f) || f <= 0.0)
    domain_error("local overhead requires a positive CPU speed");
  const double work = user.task.workload();
  const double latency = work / f;
  const double energy = user.kappa * work * f * f;
  return user.weight_time * latency + user.weight_energy * energy;
}

double cloud_overhead(const Scenario &scenario, const StrategyProfile &profile,
                      int n) {
  const double rate = transmission_rate(scenario, profile, n);
  const UserParams &user = scenario.users[n];
  const double bits = user.task.length_bits;
  const double upload_latency = bits / rate;
  const double execute_latency = user.task.workload() / scenario.network.server_cpu;
  const double upload_energy = profile[n].power * bits / rate;
  return user.weight_time * (upload_latency + execute_latency) +
         user.weight_energy * upload_energy;
}

double total_overhead(const Scenario &scenario, const StrategyProfile &profile,
                      int n) {
  check_user_index(scenario, profile, n);
  const Strategy &s = profile[n];
  const double lambda = s.lambda;
  // The zero-share side contributes exactly 0 and is never evaluated, so a
  // full offloader needs no CPU speed and a local user no rate.
  double cost = 0.0;
  if (lambda > 0.0)
    cost += lambda * cloud_overhead(scenario, profile, n);
  if (lambda < 1.0)
    cost += (1.0 - lambda) * local_overhead(scenario.users[n], s.cpu);
  return cost;
}

} // namespace offgame
