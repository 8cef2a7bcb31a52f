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

#include "offgame/trace_io.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace offgame {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string schedule_name(ScheduleKind kind) {
  switch (kind) {
  case ScheduleKind::round_robin:
    return "round_robin";
  case ScheduleKind::random_permutation:
    return "random";
  case ScheduleKind::simultaneous:
    return "simultaneous";
  }
  throw Error(ErrorCode::internal, "unhandled schedule kind");
}

ScheduleKind schedule_from_name(const std::string &name) {
  if (name == "round_robin")
    return ScheduleKind::round_robin;
  if (name == "random" || name == "random_permutation")
    return ScheduleKind::random_permutation;
  if (name == "simultaneous")
    return ScheduleKind::simultaneous;
  throw Error(ErrorCode::invalid_argument,
              "unknown schedule '" + name +
                  "' (expected round_robin, random, or simultaneous)");
}

namespace {

void write_meta(std::ostringstream &out, const std::string &schema,
                const TraceMeta &meta) {
  out << "# schema: " << schema << "\n";
  out << "# tool_version: " << meta.tool_version << "\n";
  out << "# seed: " << meta.seed << "\n";
  out << "# spec_hash: " << meta.spec_hash << "\n";
  out << "# schedule: " << meta.schedule << "\n";
}

} // namespace

std::string trace_to_csv(const Scenario &scenario, const IterationTrace &trace,
                         const TraceMeta &meta) {
  std::ostringstream out;
  write_meta(out, "trace/1", meta);
  out << "round,user_id,lambda,power_w,cpu_hz,overhead,utility\n";
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    const RoundSnapshot &snap = trace.rounds[r];
    for (int n = 0; n < scenario.num_users(); ++n) {
      const Strategy &s = snap.profile[n];
      out << (r + 1) << ',' << scenario.users[n].user_id << ','
          << format_double(s.lambda) << ',' << format_double(s.power) << ','
          << format_double(s.cpu) << ',' << format_double(snap.overheads[n])
          << ',' << format_double(snap.utilities[n]) << '\n';
    }
  }
  return out.str();
}

std::string summary_to_csv(const IterationTrace &trace, const TraceMeta &meta) {
  std::ostringstream out;
  write_meta(out, "summary/1", meta);
  out << "round,potential,offloader_count\n";
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    const RoundSnapshot &snap = trace.rounds[r];
    out << (r + 1) << ',' << format_double(snap.potential) << ','
        << snap.offloader_count << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split_fields(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_field_double(const std::string &text, int line_no) {
  char *end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw Error(ErrorCode::parse, "trace line " + std::to_string(line_no) +
                                      ": '" + text + "' is not a number");
  return v;
}

long parse_field_long(const std::string &text, int line_no) {
  char *end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw Error(ErrorCode::parse, "trace line " + std::to_string(line_no) +
                                      ": '" + text + "' is not an integer");
  return v;
}

} // namespace

StrategyProfile profile_from_trace_csv(const Scenario &scenario,
                                       const std::string &csv_text) {
  const int num_users = scenario.num_users();
  std::vector<bool> seen(static_cast<std::size_t>(num_users), false);
  StrategyProfile profile;
  profile.strategies.resize(static_cast<std::size_t>(num_users));

  std::istringstream in(csv_text);
  std::string line;
  int line_no = 0;
  long max_round = -1;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    if (!saw_header) {
      if (line != "round,user_id,lambda,power_w,cpu_hz,overhead,utility")
        throw Error(ErrorCode::parse,
                    "trace line " + std::to_string(line_no) +
                        ": unexpected header '" + line + "'");
      saw_header = true;
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 7)
      throw Error(ErrorCode::parse, "trace line " + std::to_string(line_no) +
                                        ": expected 7 fields, got " +
                                        std::to_string(fields.size()));
    const long round = parse_field_long(fields[0], line_no);
    const long user = parse_field_long(fields[1], line_no);
    if (user < 0 || user >= num_users)
      throw Error(ErrorCode::parse, "trace line " + std::to_string(line_no) +
                                        ": user_id " + std::to_string(user) +
                                        " is outside the scenario");
    if (round > max_round) {
      // A new, later round: previous rows no longer describe the final state.
      max_round = round;
      std::fill(seen.begin(), seen.end(), false);
    }
    if (round == max_round) {
      Strategy s;
      s.lambda = parse_field_double(fields[2], line_no);
      s.power = parse_field_double(fields[3], line_no);
      s.cpu = parse_field_double(fields[4], line_no);
      profile[static_cast<int>(user)] = s;
      seen[static_cast<std::size_t>(user)] = true;
    }
  }
  if (!saw_header)
    throw Error(ErrorCode::parse, "trace has no header row");
  if (max_round < 0)
    throw Error(ErrorCode::parse, "trace has no data rows");
  for (int n = 0; n < num_users; ++n)
    if (!seen[static_cast<std::size_t>(n)])
      throw Error(ErrorCode::parse, "trace's last round is missing user " +
                                        std::to_string(n));
  validate_profile(scenario, profile);
  return profile;
}

} // namespace offgame
