#include <cmath>
#include <functional>
#include <string>

#include "doctest.h"

#include "offgame/scenario_io.hpp"
#include "offgame/types.hpp"
#include "test_helpers.hpp"

using namespace offgame;

namespace {

GeneratorSpec basic_spec(int users, int channels) {
  GeneratorSpec spec;
  spec.num_users = users;
  spec.num_channels = channels;
  spec.sinr_threshold = 0.1;
  return spec;
}

ErrorCode error_code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::internal;
}

} // namespace

TEST_CASE("generation is deterministic in the seed") {
  const GeneratorSpec spec = basic_spec(8, 3);
  const Scenario a = generate(spec, 99);
  const Scenario b = generate(spec, 99);
  const Scenario c = generate(spec, 100);
  CHECK(scenario_to_json(a) == scenario_to_json(b));
  CHECK(scenario_hash(a) == scenario_hash(b));
  CHECK(scenario_hash(a) != scenario_hash(c));
}

TEST_CASE("round-robin assignment hands each user its own subchannel") {
  const Scenario scn = generate(basic_spec(10, 10), 4);
  REQUIRE(scn.users.size() == 10);
  for (int n = 0; n < 10; ++n) CHECK(scn.users[n].channel == n);
  CHECK(scn.network.channel_bandwidth == doctest::Approx(2e6).epsilon(1e-15));
}

TEST_CASE("uniform assignment stays in range and depends on the seed") {
  GeneratorSpec spec = basic_spec(40, 7);
  spec.assignment = GeneratorSpec::Assignment::uniform;
  const Scenario scn = generate(spec, 21);
  bool any_off_round_robin = false;
  for (int n = 0; n < 40; ++n) {
    CHECK(scn.users[n].channel >= 0);
    CHECK(scn.users[n].channel < 7);
    if (scn.users[n].channel != n % 7)
      any_off_round_robin = true;
  }
  CHECK(any_off_round_robin);
}

TEST_CASE("task defaults to one gigacycle spread over the bits") {
  const Scenario scn = generate(basic_spec(3, 1), 5);
  for (const UserParams &u : scn.users) {
    CHECK(u.task.length_bits == 5e6);
    CHECK(u.task.cycles_per_bit == 200.0);
    CHECK(u.weight_time == 0.5);
    CHECK(u.weight_energy == 0.5);
  }
}

TEST_CASE("gains stay at or below one even in a tiny cell") {
  GeneratorSpec spec = basic_spec(30, 2);
  spec.cell_radius = 1.5;
  const Scenario scn = generate(spec, 11);
  for (const UserParams &u : scn.users) {
    CHECK(u.channel_gain <= 1.0);
    CHECK(u.channel_gain > 0.0);
  }
}

TEST_CASE("generator spec validation rejects bad parameter combinations") {
  GeneratorSpec both = basic_spec(4, 2);
  both.cycles_per_bit = 100.0;
  both.total_cycles = 1e9;
  CHECK(error_code_of([&] { validate_generator_spec(both); }) ==
        ErrorCode::invalid_argument);

  GeneratorSpec no_threshold = basic_spec(4, 2);
  no_threshold.sinr_threshold = 0.0;
  CHECK(error_code_of([&] { validate_generator_spec(no_threshold); }) ==
        ErrorCode::invalid_argument);

  GeneratorSpec too_many = basic_spec(65, 2);
  CHECK(error_code_of([&] { validate_generator_spec(too_many); }) ==
        ErrorCode::invalid_argument);

  GeneratorSpec tiny_cell = basic_spec(4, 2);
  tiny_cell.cell_radius = 0.5;
  CHECK(error_code_of([&] { validate_generator_spec(tiny_cell); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("generator json parses fields and applies defaults") {
  const std::string text = R"({"generator": {
    "num_users": 6,
    "num_channels": 2,
    "sinr_threshold": 0.1,
    "seed": 77,
    "alpha_t": 1.0,
    "assignment": "uniform"
  }})";
  CHECK(json_is_generator(text));
  const GeneratorSpec spec = generator_from_json(text);
  CHECK(spec.num_users == 6);
  CHECK(spec.num_channels == 2);
  CHECK(spec.sinr_threshold == 0.1);
  REQUIRE(spec.seed.has_value());
  CHECK(*spec.seed == 77);
  CHECK(spec.alpha_t == 1.0);
  CHECK(spec.assignment == GeneratorSpec::Assignment::uniform);
  CHECK(spec.cell_radius == 200.0);
  CHECK(spec.total_bandwidth == 2e7);

  const Scenario scn = scenario_from_json(text);
  CHECK(scn.users.size() == 6);
  for (const UserParams &u : scn.users) {
    CHECK(u.weight_time == 1.0);
    CHECK(u.weight_energy == 0.0);
  }
}

TEST_CASE("generator json reports missing and unknown fields by path") {
  const auto code = [](const std::string &text) {
    return error_code_of([&] { (void)generator_from_json(text); });
  };
  CHECK(code(R"({"generator": {"num_users": 4, "num_channels": 2}})") ==
        ErrorCode::parse);
  CHECK(code(R"({"generator": {"num_users": 4, "num_channels": 2,
                 "sinr_threshold": 0.1, "bogus": 3}})") == ErrorCode::parse);
  CHECK(code(R"({"generator": {"num_users": 4, "num_channels": 2,
                 "sinr_threshold": 0.1, "assignment": "zigzag"}})") ==
        ErrorCode::parse);
  CHECK(code(R"({"generator": {"num_users": 4, "num_channels": 2,
                 "sinr_threshold": 0.1, "seed": -3}})") == ErrorCode::parse);

  CHECK(error_code_of([&] {
          (void)scenario_from_json(
              R"({"generator": {"num_users": 4, "num_channels": 2,
                  "sinr_threshold": 0.1}})");
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("explicit form round-trips through the canonical serialization") {
  const Scenario scn = generate(basic_spec(5, 2), 31);
  const std::string text = scenario_to_json(scn);
  CHECK_FALSE(json_is_generator(text));

  const Scenario back = scenario_from_json(text);
  REQUIRE(back.users.size() == scn.users.size());
  CHECK(back.network.num_channels == scn.network.num_channels);
  CHECK(back.network.channel_bandwidth == scn.network.channel_bandwidth);
  CHECK(back.network.noise_power == scn.network.noise_power);
  CHECK(back.network.server_cpu == scn.network.server_cpu);
  CHECK(back.network.p_max == scn.network.p_max);
  CHECK(back.network.sinr_threshold == scn.network.sinr_threshold);
  CHECK(back.network.f_min_floor == scn.network.f_min_floor);
  for (std::size_t i = 0; i < scn.users.size(); ++i) {
    CHECK(back.users[i].user_id == scn.users[i].user_id);
    CHECK(back.users[i].channel == scn.users[i].channel);
    CHECK(back.users[i].channel_gain == scn.users[i].channel_gain);
    CHECK(back.users[i].kappa == scn.users[i].kappa);
    CHECK(back.users[i].f_max == scn.users[i].f_max);
    CHECK(back.users[i].weight_time == scn.users[i].weight_time);
    CHECK(back.users[i].weight_energy == scn.users[i].weight_energy);
    CHECK(back.users[i].task.length_bits == scn.users[i].task.length_bits);
    CHECK(back.users[i].task.cycles_per_bit ==
          scn.users[i].task.cycles_per_bit);
  }
  CHECK(scenario_to_json(back) == text);
  CHECK(scenario_hash(back) == scenario_hash(scn));
}

TEST_CASE("explicit form defaults, ordering checks, and rejects") {
  const std::string base =
      R"({"network": {"num_channels": 1, "channel_bandwidth": 1e7,
          "noise_power": 1e-13, "server_cpu": 1e10, "p_max": 0.15,
          "sinr_threshold": 0.1},
          "users": [{"channel": 0, "channel_gain": 1e-8, "kappa": 1e-27,
                     "f_max": 1e9, "weight_time": 0.3,
                     "task": {"length_bits": 5e6, "cycles_per_bit": 200}}]})";
  const Scenario scn = scenario_from_json(base);
  CHECK(scn.network.f_min_floor == 1e6);
  CHECK(scn.users[0].user_id == 0);
  CHECK(scn.users[0].weight_energy == doctest::Approx(0.7).epsilon(1e-15));

  const auto code = [](const std::string &text) {
    return error_code_of([&] { (void)scenario_from_json(text); });
  };
  CHECK(code("{ not json") == ErrorCode::parse);
  CHECK(code("[1, 2]") == ErrorCode::parse);
  CHECK(code(R"({"network": {}, "users": [], "extra": 1})") ==
        ErrorCode::parse);

  // A stated user_id must agree with the user's index in the array.
  std::string wrong_id = base;
  const std::string marker = "{\"channel\": 0";
  wrong_id.replace(wrong_id.find(marker), marker.size(),
                   "{\"user_id\": 3, \"channel\": 0");
  CHECK(code(wrong_id) == ErrorCode::parse);

  // A task may state its load per bit or in total, never both ways.
  std::string both_cycles = base;
  const std::string task_marker = "\"cycles_per_bit\": 200";
  both_cycles.replace(both_cycles.find(task_marker), task_marker.size(),
                      "\"cycles_per_bit\": 200, \"total_cycles\": 1e9");
  CHECK(code(both_cycles) == ErrorCode::parse);
}
