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

#include "offgame/types.hpp"

#include <cmath>
#include <string>

namespace offgame {

namespace {

[[noreturn]] void invalid(const std::string &msg) {
  throw Error(ErrorCode::invalid_argument, msg);
}

void require_finite_positive(double v, const std::string &field) {
  if (!std::isfinite(v) || v <= 0.0)
    invalid(field + " must be a finite positive number");
}

void require_weight(double v, const std::string &field) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    invalid(field + " must lie in [0, 1]");
}

std::string user_field(int user_id, const char *name) {
  return "users[" + std::to_string(user_id) + "]." + name;
}

} // namespace

void validate_strategy(const Strategy &s) {
  if (!std::isfinite(s.lambda) || s.lambda < 0.0 || s.lambda > 1.0)
    invalid("strategy.lambda must lie in [0, 1]");
  if (!std::isfinite(s.power) || s.power < 0.0)
    invalid("strategy.power must be finite and nonnegative");
  if (!std::isfinite(s.cpu) || s.cpu < 0.0)
    invalid("strategy.cpu must be finite and nonnegative");
  if (s.lambda == 0.0 && s.power != 0.0)
    invalid("strategy.power must be 0 when nothing is offloaded");
  if (s.lambda > 0.0 && s.power <= 0.0)
    invalid("strategy.power must be positive when a share is offloaded");
  if (s.lambda < 1.0 && s.cpu <= 0.0)
    invalid("strategy.cpu must be positive when a share is computed locally");
}

void validate_scenario(const Scenario &scenario) {
  const NetworkParams &net = scenario.network;
  if (net.num_channels < 1)
    invalid("network.num_channels must be at least 1");
  require_finite_positive(net.channel_bandwidth, "network.channel_bandwidth");
  require_finite_positive(net.noise_power, "network.noise_power");
  require_finite_positive(net.server_cpu, "network.server_cpu");
  require_finite_positive(net.p_max, "network.p_max");
  require_finite_positive(net.sinr_threshold, "network.sinr_threshold");
  require_finite_positive(net.f_min_floor, "network.f_min_floor");

  if (scenario.users.empty())
    invalid("users must not be empty");

  for (std::size_t i = 0; i < scenario.users.size(); ++i) {
    const UserParams &u = scenario.users[i];
    const int id = static_cast<int>(i);
    if (u.user_id != id)
      invalid(user_field(id, "user_id") + " must equal the array position");
    if (u.channel < 0 || u.channel >= net.num_channels)
      invalid(user_field(id, "channel") + " out of range");
    require_finite_positive(u.channel_gain, user_field(id, "channel_gain"));
    require_finite_positive(u.kappa, user_field(id, "kappa"));
    require_finite_positive(u.f_max, user_field(id, "f_max"));
    require_weight(u.weight_time, user_field(id, "weight_time"));
    require_weight(u.weight_energy, user_field(id, "weight_energy"));
    if (std::abs(u.weight_time + u.weight_energy - 1.0) > 1e-12)
      invalid(user_field(id, "weight_time") + " and weight_energy must sum to 1");
    require_finite_positive(u.task.length_bits,
                            user_field(id, "task.length_bits"));
    require_finite_positive(u.task.cycles_per_bit,
                            user_field(id, "task.cycles_per_bit"));
    if (u.f_max < net.f_min_floor)
      invalid(user_field(id, "f_max") + " below network.f_min_floor");
  }
}

void validate_profile(const Scenario &scenario,
                      const StrategyProfile &profile) {
  if (profile.size() != scenario.users.size())
    invalid("profile size does not match the number of users");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Strategy &s = profile[i];
    try {
      validate_strategy(s);
    } catch (const Error &e) {
      invalid("user " + std::to_string(i) + ": " + e.what());
    }
    if (s.power > scenario.network.p_max)
      invalid("user " + std::to_string(i) + ": power above network.p_max");
    if (s.cpu > scenario.users[i].f_max)
      invalid("user " + std::to_string(i) + ": cpu above the user's f_max");
  }
}

} // namespace offgame
