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

#include "offgame/scenario_io.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

#include "offgame/rng.hpp"

namespace offgame {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::parse, path + " " + what);
}

void reject_unknown_keys(const json &obj, const std::string &path,
                         const std::set<std::string> &allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      bad_field(path + "." + it.key(), "is not a recognized field");
}

const json &require_object(const json &doc, const std::string &path) {
  if (!doc.is_object())
    bad_field(path, "must be an object");
  return doc;
}

double get_number(const json &obj, const std::string &path,
                  const std::string &key) {
  if (!obj.contains(key))
    bad_field(path + "." + key, "is required");
  const json &v = obj.at(key);
  if (!v.is_number())
    bad_field(path + "." + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    bad_field(path + "." + key, "must be finite");
  return x;
}

double get_number_or(const json &obj, const std::string &path,
                     const std::string &key, double fallback) {
  if (!obj.contains(key))
    return fallback;
  return get_number(obj, path, key);
}

int get_int(const json &obj, const std::string &path, const std::string &key) {
  if (!obj.contains(key))
    bad_field(path + "." + key, "is required");
  const json &v = obj.at(key);
  if (!v.is_number_integer())
    bad_field(path + "." + key, "must be an integer");
  return v.get<int>();
}

Task parse_task(const json &doc, const std::string &path) {
  require_object(doc, path);
  reject_unknown_keys(doc, path,
                      {"length_bits", "cycles_per_bit", "total_cycles"});
  Task task;
  task.length_bits = get_number(doc, path, "length_bits");
  const bool has_per_bit = doc.contains("cycles_per_bit");
  const bool has_total = doc.contains("total_cycles");
  if (has_per_bit && has_total)
    bad_field(path, "may give cycles_per_bit or total_cycles, not both");
  if (has_per_bit) {
    task.cycles_per_bit = get_number(doc, path, "cycles_per_bit");
  } else {
    // Workloads are commonly quoted as a cycle total; 1e9 cycles is the
    // default job size when nothing is specified.
    const double total = has_total ? get_number(doc, path, "total_cycles") : 1e9;
    if (!(total > 0.0))
      bad_field(path + ".total_cycles", "must be positive");
    if (!(task.length_bits > 0.0))
      bad_field(path + ".length_bits", "must be positive");
    task.cycles_per_bit = total / task.length_bits;
  }
  return task;
}

UserParams parse_user(const json &doc, int index) {
  const std::string path = "users[" + std::to_string(index) + "]";
  require_object(doc, path);
  reject_unknown_keys(doc, path,
                      {"user_id", "channel", "channel_gain", "kappa", "f_max",
                       "weight_time", "weight_energy", "task"});
  UserParams user;
  user.user_id = index;
  if (doc.contains("user_id") && get_int(doc, path, "user_id") != index)
    bad_field(path + ".user_id", "must equal the user's position (" +
                                     std::to_string(index) + ")");
  user.channel = get_int(doc, path, "channel");
  user.channel_gain = get_number(doc, path, "channel_gain");
  user.kappa = get_number(doc, path, "kappa");
  user.f_max = get_number(doc, path, "f_max");
  user.weight_time = get_number(doc, path, "weight_time");
  user.weight_energy =
      get_number_or(doc, path, "weight_energy", 1.0 - user.weight_time);
  if (!doc.contains("task"))
    bad_field(path + ".task", "is required");
  user.task = parse_task(doc.at("task"), path + ".task");
  return user;
}

NetworkParams parse_network(const json &doc) {
  const std::string path = "network";
  require_object(doc, path);
  reject_unknown_keys(doc, path,
                      {"num_channels", "channel_bandwidth", "noise_power",
                       "server_cpu", "p_max", "sinr_threshold", "f_min_floor"});
  NetworkParams net;
  net.num_channels = get_int(doc, path, "num_channels");
  net.channel_bandwidth = get_number(doc, path, "channel_bandwidth");
  net.noise_power = get_number(doc, path, "noise_power");
  net.server_cpu = get_number(doc, path, "server_cpu");
  net.p_max = get_number(doc, path, "p_max");
  net.sinr_threshold = get_number(doc, path, "sinr_threshold");
  net.f_min_floor = get_number_or(doc, path, "f_min_floor", 1e6);
  return net;
}

json parse_document(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::parse, std::string("scenario is not valid JSON: ") +
                                      e.what());
  }
  return doc;
}

} // namespace

void validate_generator_spec(const GeneratorSpec &spec) {
  auto fail = [](const std::string &msg) {
    throw Error(ErrorCode::invalid_argument, "generator." + msg);
  };
  if (spec.num_users < 1 || spec.num_users > 64)
    fail("num_users must lie in 1..64");
  if (spec.num_channels < 1)
    fail("num_channels must be positive");
  if (!(spec.cell_radius > 1.0) || !std::isfinite(spec.cell_radius))
    fail("cell_radius must exceed 1 (metre floor on user distance)");
  if (!(spec.path_loss_exponent > 0.0) || !std::isfinite(spec.path_loss_exponent))
    fail("path_loss_exponent must be positive");
  if (!(spec.task_bits > 0.0) || !std::isfinite(spec.task_bits))
    fail("task_bits must be positive");
  if (spec.cycles_per_bit && spec.total_cycles)
    fail("cycles_per_bit and total_cycles are mutually exclusive");
  if (spec.cycles_per_bit && !(*spec.cycles_per_bit > 0.0))
    fail("cycles_per_bit must be positive");
  if (spec.total_cycles && !(*spec.total_cycles > 0.0))
    fail("total_cycles must be positive");
  if (!(spec.alpha_t >= 0.0 && spec.alpha_t <= 1.0))
    fail("alpha_t must lie in [0, 1]");
  if (!(spec.kappa > 0.0))
    fail("kappa must be positive");
  if (!(spec.f_max > 0.0))
    fail("f_max must be positive");
  if (!(spec.total_bandwidth > 0.0))
    fail("total_bandwidth must be positive");
  if (!(spec.noise_power > 0.0))
    fail("noise_power must be positive");
  if (!(spec.p_max > 0.0))
    fail("p_max must be positive");
  if (!(spec.server_cpu > 0.0))
    fail("server_cpu must be positive");
  if (!(spec.sinr_threshold > 0.0) || !std::isfinite(spec.sinr_threshold))
    fail("sinr_threshold is required and must be positive");
  if (!(spec.f_min_floor > 0.0) || spec.f_min_floor > spec.f_max)
    fail("f_min_floor must be positive and no larger than f_max");
}

double gain_from_distance(double distance, double path_loss_exponent) {
  if (!(distance > 0.0))
    throw Error(ErrorCode::domain, "distance must be positive");
  return std::pow(distance, -path_loss_exponent);
}

Scenario generate(const GeneratorSpec &spec, std::uint64_t seed) {
  validate_generator_spec(spec);
  Rng rng(seed);

  Scenario scenario;
  scenario.network.num_channels = spec.num_channels;
  scenario.network.channel_bandwidth =
      spec.total_bandwidth / static_cast<double>(spec.num_channels);
  scenario.network.noise_power = spec.noise_power;
  scenario.network.server_cpu = spec.server_cpu;
  scenario.network.p_max = spec.p_max;
  scenario.network.sinr_threshold = spec.sinr_threshold;
  scenario.network.f_min_floor = spec.f_min_floor;

  double cycles_per_bit;
  if (spec.cycles_per_bit) {
    cycles_per_bit = *spec.cycles_per_bit;
  } else {
    const double total = spec.total_cycles ? *spec.total_cycles : 1e9;
    cycles_per_bit = total / spec.task_bits;
  }

  scenario.users.reserve(static_cast<std::size_t>(spec.num_users));
  for (int n = 0; n < spec.num_users; ++n) {
    UserParams user;
    user.user_id = n;
    // Uniform over the disc, resampled onto d >= 1 m so the power-law gain
    // stays bounded.
    double distance;
    do {
      distance = spec.cell_radius * std::sqrt(rng.next_unit());
    } while (distance < 1.0);
    user.channel_gain = gain_from_distance(distance, spec.path_loss_exponent);
    if (spec.assignment == GeneratorSpec::Assignment::round_robin)
      user.channel = n % spec.num_channels;
    else
      user.channel = static_cast<int>(
          rng.next_below(static_cast<std::uint64_t>(spec.num_channels)));
    user.kappa = spec.kappa;
    user.f_max = spec.f_max;
    user.weight_time = spec.alpha_t;
    user.weight_energy = 1.0 - spec.alpha_t;
    user.task = Task{spec.task_bits, cycles_per_bit};
    scenario.users.push_back(user);
  }

  validate_scenario(scenario);
  return scenario;
}

bool json_is_generator(const std::string &json_text) {
  const json doc = parse_document(json_text);
  require_object(doc, "scenario");
  return doc.contains("generator");
}

GeneratorSpec generator_from_json(const std::string &json_text) {
  const json doc = parse_document(json_text);
  require_object(doc, "scenario");
  reject_unknown_keys(doc, "scenario", {"generator"});
  if (!doc.contains("generator"))
    bad_field("scenario.generator", "is required");
  const json &g = doc.at("generator");
  const std::string path = "generator";
  require_object(g, path);
  reject_unknown_keys(g, path,
                      {"num_users", "num_channels", "cell_radius",
                       "path_loss_exponent", "seed", "task_bits",
                       "cycles_per_bit", "total_cycles", "alpha_t", "kappa",
                       "f_max", "total_bandwidth", "noise_power", "p_max",
                       "server_cpu", "sinr_threshold", "f_min_floor",
                       "assignment"});
  GeneratorSpec spec;
  spec.num_users = get_int(g, path, "num_users");
  spec.num_channels = get_int(g, path, "num_channels");
  spec.cell_radius = get_number_or(g, path, "cell_radius", spec.cell_radius);
  spec.path_loss_exponent =
      get_number_or(g, path, "path_loss_exponent", spec.path_loss_exponent);
  if (g.contains("seed")) {
    const json &v = g.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      bad_field(path + ".seed", "must be a nonnegative integer");
    const auto s = v.get<std::int64_t>();
    if (s < 0)
      bad_field(path + ".seed", "must be a nonnegative integer");
    spec.seed = static_cast<std::uint64_t>(s);
  }
  spec.task_bits = get_number_or(g, path, "task_bits", spec.task_bits);
  if (g.contains("cycles_per_bit"))
    spec.cycles_per_bit = get_number(g, path, "cycles_per_bit");
  if (g.contains("total_cycles"))
    spec.total_cycles = get_number(g, path, "total_cycles");
  spec.alpha_t = get_number_or(g, path, "alpha_t", spec.alpha_t);
  spec.kappa = get_number_or(g, path, "kappa", spec.kappa);
  spec.f_max = get_number_or(g, path, "f_max", spec.f_max);
  spec.total_bandwidth =
      get_number_or(g, path, "total_bandwidth", spec.total_bandwidth);
  spec.noise_power = get_number_or(g, path, "noise_power", spec.noise_power);
  spec.p_max = get_number_or(g, path, "p_max", spec.p_max);
  spec.server_cpu = get_number_or(g, path, "server_cpu", spec.server_cpu);
  if (!g.contains("sinr_threshold"))
    bad_field(path + ".sinr_threshold", "is required (no default exists)");
  spec.sinr_threshold = get_number(g, path, "sinr_threshold");
  spec.f_min_floor = get_number_or(g, path, "f_min_floor", spec.f_min_floor);
  if (g.contains("assignment")) {
    const json &v = g.at("assignment");
    if (!v.is_string())
      bad_field(path + ".assignment", "must be a string");
    const std::string name = v.get<std::string>();
    if (name == "round_robin")
      spec.assignment = GeneratorSpec::Assignment::round_robin;
    else if (name == "uniform")
      spec.assignment = GeneratorSpec::Assignment::uniform;
    else
      bad_field(path + ".assignment",
                "must be \"round_robin\" or \"uniform\"");
  }
  validate_generator_spec(spec);
  return spec;
}

Scenario scenario_from_json(const std::string &json_text) {
  const json doc = parse_document(json_text);
  require_object(doc, "scenario");
  if (doc.contains("generator")) {
    const GeneratorSpec spec = generator_from_json(json_text);
    if (!spec.seed)
      throw Error(ErrorCode::invalid_argument,
                  "generator.seed is required when no seed is supplied "
                  "out of band");
    return generate(spec, *spec.seed);
  }
  reject_unknown_keys(doc, "scenario", {"network", "users"});
  if (!doc.contains("network"))
    bad_field("scenario.network", "is required");
  if (!doc.contains("users"))
    bad_field("scenario.users", "is required");

  Scenario scenario;
  scenario.network = parse_network(doc.at("network"));
  const json &users = doc.at("users");
  if (!users.is_array() || users.empty())
    bad_field("scenario.users", "must be a non-empty array");
  for (std::size_t i = 0; i < users.size(); ++i)
    scenario.users.push_back(parse_user(users[i], static_cast<int>(i)));
  validate_scenario(scenario);
  return scenario;
}

std::string scenario_to_json(const Scenario &scenario) {
  // nlohmann's default object keeps keys sorted, which together with
  // shortest round-trip number printing makes this a canonical form.
  json doc;
  doc["network"] = {{"num_channels", scenario.network.num_channels},
                    {"channel_bandwidth", scenario.network.channel_bandwidth},
                    {"noise_power", scenario.network.noise_power},
                    {"server_cpu", scenario.network.server_cpu},
                    {"p_max", scenario.network.p_max},
                    {"sinr_threshold", scenario.network.sinr_threshold},
                    {"f_min_floor", scenario.network.f_min_floor}};
  doc["users"] = json::array();
  for (const UserParams &user : scenario.users) {
    doc["users"].push_back(
        {{"user_id", user.user_id},
         {"channel", user.channel},
         {"channel_gain", user.channel_gain},
         {"kappa", user.kappa},
         {"f_max", user.f_max},
         {"weight_time", user.weight_time},
         {"weight_energy", user.weight_energy},
         {"task",
          {{"length_bits", user.task.length_bits},
           {"cycles_per_bit", user.task.cycles_per_bit}}}});
  }
  return doc.dump(2) + "\n";
}

std::uint64_t scenario_hash(const Scenario &scenario) {
  const std::string canon = scenario_to_json(scenario);
  std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a 64-bit offset basis
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

} // namespace offgame
