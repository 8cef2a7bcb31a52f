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

#ifndef OFFGAME_SCENARIO_IO_HPP
#define OFFGAME_SCENARIO_IO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "offgame/types.hpp"

namespace offgame {

// Parameters of the synthetic scenario generator: users dropped uniformly in
// a disc around the base station, gains from the power-law path loss
// d^(-path_loss_exponent), subchannels handed out round-robin or uniformly at
// random. Exactly one of cycles_per_bit / total_cycles may be given; with
// neither, the task defaults to total_cycles = 1e9 over task_bits bits.
struct GeneratorSpec {
  int num_users = 0;   // required, 1..64
  int num_channels = 0; // required
  double cell_radius = 200.0;      // m
  double path_loss_exponent = 4.0;
  std::optional<std::uint64_t> seed; // used when the caller supplies none
  double task_bits = 5e6;
  std::optional<double> cycles_per_bit;
  std::optional<double> total_cycles;
  double alpha_t = 0.5;            // one weight preset for every user
  double kappa = 1e-27;
  double f_max = 1e9;
  double total_bandwidth = 2e7;    // split evenly across subchannels
  double noise_power = 1e-13;
  double p_max = 0.15;
  double server_cpu = 1e10;
  double sinr_threshold = 0.0;     // required, no default
  double f_min_floor = 1e6;
  enum class Assignment { round_robin, uniform };
  Assignment assignment = Assignment::round_robin;
};

void validate_generator_spec(const GeneratorSpec &spec);

// Deterministic realization of a generator spec: same spec and seed, same
// scenario. Distances are floored at one metre so gains stay finite.
Scenario generate(const GeneratorSpec &spec, std::uint64_t seed);

double gain_from_distance(double distance, double path_loss_exponent);

// True when the JSON document at hand is the generator form (has a
// "generator" key) rather than the explicit network+users form.
bool json_is_generator(const std::string &json_text);

// Parse the explicit {network, users} form. Unknown or malformed fields are
// rejected with the offending path named in the error message.
Scenario scenario_from_json(const std::string &json_text);

// Parse the {generator: {...}} form.
GeneratorSpec generator_from_json(const std::string &json_text);

// Canonical explicit-form serialization (sorted keys, shortest round-trip
// numbers). parse(serialize(s)) reproduces s exactly.
std::string scenario_to_json(const Scenario &scenario);

// FNV-1a over the canonical serialization; stamped into output files so a
// result can be tied back to the exact inputs that produced it.
std::uint64_t scenario_hash(const Scenario &scenario);

} // namespace offgame

#endif // OFFGAME_SCENARIO_IO_HPP
