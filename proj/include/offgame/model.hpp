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

#ifndef OFFGAME_MODEL_HPP
#define OFFGAME_MODEL_HPP

#include "offgame/types.hpp"

namespace offgame {

// Users on the same subchannel as n that are currently transmitting
// (lambda > 0), excluding n itself. Sorted ascending by user id.
std::vector<int> interference_set(const Scenario &scenario,
                                  const StrategyProfile &profile, int n);

// Aggregate received interference power at the base station on n's
// subchannel: sum of p_i * G_i over the interference set.
double interference_power(const Scenario &scenario,
                          const StrategyProfile &profile, int n);

// Uplink SINR of user n: p_n G_n / (N0 + interference). Requires a
// transmitting user (lambda > 0, power > 0).
double sinr(const Scenario &scenario, const StrategyProfile &profile, int n);

// Shannon uplink rate omega * log2(1 + SINR), bits/s. Undefined (domain
// error) for a non-transmitting user.
double transmission_rate(const Scenario &scenario,
                         const StrategyProfile &profile, int n);

// Weighted cost of computing the whole task locally at CPU speed f:
// alpha_t * L*C/f + alpha_e * kappa * L*C * f^2. Requires f > 0.
double local_overhead(const UserParams &user, double f);

// Weighted cost of offloading the whole task: upload latency and energy at
// the current rate plus the server-side execution latency. Requires a
// transmitting user.
double cloud_overhead(const Scenario &scenario, const StrategyProfile &profile,
                      int n);

// Weighted total cost of user n's current strategy. The offloaded share pays
// the transmission and server terms, the local share pays the local terms;
// either side is dropped exactly (not evaluated) when its share is zero.
double total_overhead(const Scenario &scenario, const StrategyProfile &profile,
                      int n);

} // namespace offgame

#endif // OFFGAME_MODEL_HPP
