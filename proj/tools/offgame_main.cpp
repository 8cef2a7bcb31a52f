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

// Command-line front end. Talks to the library exclusively through the C
// interface in offgame.h; no internal headers are used here.

#include <atomic>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "offgame.h"

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 success/converged, 2 non-convergence, 3 validation/parse/IO
// error, 4 guard error, 1 anything else.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitValidation = 3;
constexpr int kExitGuard = 4;

int exit_code_for(og_status status) {
  switch (status) {
  case OG_OK:
    return kExitOk;
  case OG_ERROR_GUARD:
    return kExitGuard;
  case OG_ERROR_INTERNAL:
    return kExitOther;
  default:
    return kExitValidation;
  }
}

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string &message) {
  throw CliError{code, message};
}

[[noreturn]] void die_status(og_status status, const std::string &context) {
  die(exit_code_for(status),
      context + ": " + og_status_name(status) + ": " + og_last_error());
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    die(kExitValidation, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    die(kExitValidation, "cannot read " + path.string());
  return buf.str();
}

void write_file(const fs::path &path, const std::string &content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      die(kExitValidation,
          "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    die(kExitValidation, "cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out)
    die(kExitValidation, "cannot write " + path.string());
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string &text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// RAII for the C handles.
using ScenarioPtr = std::unique_ptr<og_scenario, decltype(&og_scenario_free)>;
using TracePtr = std::unique_ptr<og_trace, decltype(&og_trace_free)>;
using ProfilePtr = std::unique_ptr<og_profile, decltype(&og_profile_free)>;

struct CString {
  char *ptr = nullptr;
  ~CString() { og_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

int schedule_value(const std::string &name) {
  if (name == "round_robin")
    return OG_SCHEDULE_ROUND_ROBIN;
  if (name == "random" || name == "random_permutation")
    return OG_SCHEDULE_RANDOM_PERMUTATION;
  if (name == "simultaneous")
    return OG_SCHEDULE_SIMULTANEOUS;
  die(kExitValidation, "unknown schedule '" + name +
                           "' (expected round_robin, random, or simultaneous)");
}

ScenarioPtr load_scenario(const std::string &spec_text, bool seed_given,
                          std::uint64_t seed) {
  const int kind = og_scenario_json_kind(spec_text.c_str());
  if (kind < 0)
    die(kExitValidation, std::string("spec: ") + og_last_error());
  og_scenario *raw = nullptr;
  og_status status;
  if (kind == 1)
    status = og_scenario_generate(spec_text.c_str(), seed, seed_given ? 1 : 0,
                                  &raw);
  else
    status = og_scenario_from_json(spec_text.c_str(), &raw);
  if (status != OG_OK)
    die_status(status, "spec");
  return ScenarioPtr(raw, og_scenario_free);
}

// ---- generate ---------------------------------------------------------------

struct GenerateOptions {
  std::string spec_path;
  std::string out_path; // empty: stdout
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int cmd_generate(const GenerateOptions &opt) {
  const std::string text = read_file(opt.spec_path);
  if (og_scenario_json_kind(text.c_str()) != 1)
    die(kExitValidation,
        "generate expects a {\"generator\": ...} document: " +
            std::string(og_last_error()[0] ? og_last_error()
                                           : "got an explicit scenario"));
  const ScenarioPtr scenario =
      load_scenario(text, opt.seed_given, opt.seed);
  CString json;
  const og_status status = og_scenario_to_json(scenario.get(), &json.ptr);
  if (status != OG_OK)
    die_status(status, "serialize");
  if (opt.out_path.empty())
    std::cout << json.str();
  else
    write_file(opt.out_path, json.str());
  return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateOptions {
  std::string spec_path;
  std::string out_dir = ".";
  std::string schedule = "round_robin";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int max_rounds = 500;
};

int cmd_simulate(const SimulateOptions &opt) {
  const std::string text = read_file(opt.spec_path);
  const ScenarioPtr scenario = load_scenario(text, opt.seed_given, opt.seed);

  og_run_params params;
  og_run_params_defaults(&params);
  params.schedule = schedule_value(opt.schedule);
  params.seed = opt.seed;
  params.max_rounds = opt.max_rounds;

  og_trace *raw = nullptr;
  const og_status status = og_run(scenario.get(), &params, &raw);
  if (status != OG_OK)
    die_status(status, "simulate");
  const TracePtr trace(raw, og_trace_free);

  CString trace_csv, summary_csv, scenario_json;
  og_status io = og_trace_to_csv(trace.get(), &trace_csv.ptr, &summary_csv.ptr);
  if (io != OG_OK)
    die_status(io, "trace export");
  io = og_scenario_to_json(scenario.get(), &scenario_json.ptr);
  if (io != OG_OK)
    die_status(io, "scenario export");

  const fs::path out(opt.out_dir);
  write_file(out / "trace.csv", trace_csv.str());
  write_file(out / "summary.csv", summary_csv.str());
  write_file(out / "scenario.json", scenario_json.str());

  const int rounds = og_trace_num_rounds(trace.get());
  if (!og_trace_converged(trace.get())) {
    std::cerr << "did not converge within " << rounds << " rounds\n";
    return kExitNotConverged;
  }
  double potential = 0.0;
  int offloaders = 0;
  og_trace_round(trace.get(), rounds, &potential, &offloaders);
  std::cout << "converged in " << rounds << " rounds; potential "
            << format_number(potential) << "; " << offloaders
            << " offloading user(s); files in " << out.string() << "\n";
  return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
  std::string spec_path;
  std::string out_dir = ".";
  std::string schedule = "round_robin";
  std::string vary;
  std::vector<std::string> values;
  int num_seeds = 20;
  std::uint64_t seed_base = 0;
  int max_rounds = 500;
  int jobs = 1;
  bool keep_traces = false;
};

struct SweepCell {
  std::string grid_value; // verbatim grid token for the aggregate file
  std::string spec_text;  // template with the varied field substituted
  std::uint64_t seed = 0;
  // results
  bool ok = false;
  bool converged = false;
  int offloaders = 0;
  double potential = 0.0;
  int rounds = 0;
  std::string error;
  std::string trace_csv; // only kept when requested
};

void run_cell(SweepCell &cell, int schedule, int max_rounds, bool keep_trace) {
  og_scenario *scn_raw = nullptr;
  og_status status =
      og_scenario_generate(cell.spec_text.c_str(), cell.seed, 1, &scn_raw);
  if (status != OG_OK) {
    cell.error = std::string(og_status_name(status)) + ": " + og_last_error();
    return;
  }
  const ScenarioPtr scenario(scn_raw, og_scenario_free);

  og_run_params params;
  og_run_params_defaults(&params);
  params.schedule = schedule;
  params.seed = cell.seed;
  params.max_rounds = max_rounds;

  og_trace *trace_raw = nullptr;
  status = og_run(scenario.get(), &params, &trace_raw);
  if (status != OG_OK) {
    cell.error = std::string(og_status_name(status)) + ": " + og_last_error();
    return;
  }
  const TracePtr trace(trace_raw, og_trace_free);

  cell.rounds = og_trace_num_rounds(trace.get());
  cell.converged = og_trace_converged(trace.get()) != 0;
  og_trace_round(trace.get(), cell.rounds, &cell.potential, &cell.offloaders);
  if (keep_trace) {
    CString csv;
    if (og_trace_to_csv(trace.get(), &csv.ptr, nullptr) == OG_OK)
      cell.trace_csv = csv.str();
  }
  cell.ok = true;
}

int cmd_sweep(const SweepOptions &opt) {
  const std::string text = read_file(opt.spec_path);
  if (og_scenario_json_kind(text.c_str()) != 1)
    die(kExitValidation, "sweep expects a {\"generator\": ...} template");

  std::string field;
  bool integer_values = false;
  if (opt.vary == "N" || opt.vary == "num_users") {
    field = "num_users";
    integer_values = true;
  } else if (opt.vary == "task_bits") {
    field = "task_bits";
  } else {
    die(kExitValidation,
        "--vary must be N, num_users, or task_bits; got '" + opt.vary + "'");
  }
  if (opt.values.empty())
    die(kExitValidation, "--values must name at least one grid point");
  if (opt.num_seeds < 1)
    die(kExitValidation, "--num-seeds must be at least 1");

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception &e) {
    die(kExitValidation, std::string("template: ") + e.what());
  }

  std::vector<SweepCell> cells;
  for (const std::string &token : opt.values) {
    nlohmann::json cell_doc = doc;
    if (integer_values) {
      int v = 0;
      const auto res =
          std::from_chars(token.data(), token.data() + token.size(), v);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        die(kExitValidation, "grid value '" + token + "' is not an integer");
      cell_doc["generator"][field] = v;
    } else {
      char *end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0')
        die(kExitValidation, "grid value '" + token + "' is not a number");
      cell_doc["generator"][field] = v;
    }
    const std::string cell_text = cell_doc.dump();
    for (int s = 0; s < opt.num_seeds; ++s) {
      SweepCell cell;
      cell.grid_value = token;
      cell.spec_text = cell_text;
      cell.seed = opt.seed_base + static_cast<std::uint64_t>(s);
      cells.push_back(std::move(cell));
    }
  }

  // Cells are independent; run them on a small pool. Results land in the
  // preallocated slots, so the aggregate order never depends on timing.
  const int schedule = schedule_value(opt.schedule);
  const int workers = std::max(
      1, std::min(opt.jobs, static_cast<int>(cells.size())));
  if (workers == 1) {
    for (SweepCell &cell : cells)
      run_cell(cell, schedule, opt.max_rounds, opt.keep_traces);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size())
            return;
          run_cell(cells[i], schedule, opt.max_rounds, opt.keep_traces);
        }
      });
    for (std::thread &t : pool)
      t.join();
  }

  std::ostringstream agg;
  agg << "# schema: aggregate/1\n";
  agg << "# tool_version: " << og_version() << "\n";
  agg << "# seed: " << opt.seed_base << "\n";
  agg << "# spec_hash: " << fnv1a(text) << "\n";
  agg << "# schedule: " << opt.schedule << "\n";
  agg << "# vary: " << field << "\n";
  agg << "grid_value,seed,offloader_count_final,network_overhead_final,"
         "rounds_to_converge,converged\n";
  int failures = 0, unconverged = 0;
  for (const SweepCell &cell : cells) {
    agg << cell.grid_value << ',' << cell.seed << ',';
    if (cell.ok) {
      agg << cell.offloaders << ',' << format_number(cell.potential) << ','
          << cell.rounds << ',' << (cell.converged ? 1 : 0) << '\n';
      if (!cell.converged)
        ++unconverged;
    } else {
      // Failed cells keep their row (empty measurements) so the grid stays
      // rectangular; the reason goes to stderr.
      agg << ",,," << 0 << '\n';
      ++failures;
      std::cerr << "cell " << field << "=" << cell.grid_value << " seed "
                << cell.seed << " failed: " << cell.error << "\n";
    }
  }

  const fs::path out(opt.out_dir);
  write_file(out / "aggregate.csv", agg.str());
  if (opt.keep_traces)
    for (const SweepCell &cell : cells)
      if (!cell.trace_csv.empty())
        write_file(out / "cells" /
                       (field + "_" + cell.grid_value + "_seed_" +
                        std::to_string(cell.seed) + ".csv"),
                   cell.trace_csv);

  std::cout << cells.size() << " cells -> " << (out / "aggregate.csv").string()
            << " (" << failures << " failed, " << unconverged
            << " unconverged)\n";
  if (failures > 0)
    return kExitOther;
  if (unconverged > 0)
    return kExitNotConverged;
  return kExitOk;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeOptions {
  std::string spec_path;
  std::string trace_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int power_levels = 0; // 0: library default
  double eps = 0.0;     // 0: library default
};

int cmd_analyze(const AnalyzeOptions &opt) {
  const std::string spec_text = read_file(opt.spec_path);
  const ScenarioPtr scenario =
      load_scenario(spec_text, opt.seed_given, opt.seed);

  const std::string trace_text = read_file(opt.trace_path);
  og_profile *prof_raw = nullptr;
  og_status status = og_profile_from_trace_csv(scenario.get(),
                                               trace_text.c_str(), &prof_raw);
  if (status != OG_OK)
    die_status(status, "trace");
  const ProfilePtr profile(prof_raw, og_profile_free);

  og_analysis_params params;
  og_analysis_params_defaults(&params);
  if (opt.power_levels > 0)
    params.power_levels_per_user = opt.power_levels;
  if (opt.eps > 0.0)
    params.eps = opt.eps;

  CString report;
  status = og_analyze(scenario.get(), profile.get(), &params, &report.ptr);
  if (status != OG_OK)
    die_status(status, "analyze");

  const fs::path out(opt.out_dir);
  write_file(out / "report.json", report.str());
  std::cout << "report written to " << (out / "report.json").string() << "\n";
  return kExitOk;
}

// ---- check ------------------------------------------------------------------

struct CheckOptions {
  std::string suite;
  std::uint64_t seed = 0;
  std::string out_path; // optional copy of the report
};

int cmd_check(const CheckOptions &opt) {
  int passed = 0;
  CString report;
  const og_status status =
      og_check(opt.suite.c_str(), opt.seed, &passed, &report.ptr);
  if (status != OG_OK)
    die_status(status, "check");
  std::cout << report.str();
  if (!opt.out_path.empty())
    write_file(opt.out_path, report.str());
  return passed ? kExitOk : kExitOther;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multi-user computation-offloading game: simulation and "
               "equilibrium analysis"};
  app.set_version_flag("--version", std::string(og_version()));
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App *generate = app.add_subcommand(
      "generate", "Realize a generator spec into an explicit scenario");
  generate->add_option("--spec", gen.spec_path, "generator JSON document")
      ->required();
  generate->add_option("--out", gen.out_path,
                       "output file (default: stdout)");
  generate->add_option("--seed", gen.seed, "placement seed (overrides the "
                                           "document's)");

  SimulateOptions sim;
  CLI::App *simulate = app.add_subcommand(
      "simulate", "Run best-response dynamics and write trace/summary CSVs");
  simulate->add_option("--spec", sim.spec_path, "scenario or generator JSON")
      ->required();
  simulate->add_option("--out", sim.out_dir, "output directory (default: .)");
  simulate->add_option("--schedule", sim.schedule,
                       "round_robin | random | simultaneous");
  simulate->add_option("--seed", sim.seed,
                       "seed for generation and update order");
  simulate->add_option("--max-rounds", sim.max_rounds, "round budget");

  SweepOptions swp;
  CLI::App *sweep = app.add_subcommand(
      "sweep", "Run a (grid point x seed) matrix of simulations");
  sweep->add_option("--spec", swp.spec_path, "generator JSON template")
      ->required();
  sweep->add_option("--vary", swp.vary, "N | num_users | task_bits")
      ->required();
  sweep->add_option("--values", swp.values, "grid values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--num-seeds", swp.num_seeds, "seeds per grid point");
  sweep->add_option("--seed-base", swp.seed_base, "first seed");
  sweep->add_option("--schedule", swp.schedule,
                    "round_robin | random | simultaneous");
  sweep->add_option("--max-rounds", swp.max_rounds, "round budget per cell");
  sweep->add_option("--jobs", swp.jobs, "parallel cells");
  sweep->add_option("--out", swp.out_dir, "output directory (default: .)");
  sweep->add_flag("--keep-traces", swp.keep_traces,
                  "also write each cell's trace CSV");

  AnalyzeOptions ana;
  CLI::App *analyze = app.add_subcommand(
      "analyze", "Equilibrium, efficiency, and Pareto report for a trace");
  analyze->add_option("--spec", ana.spec_path, "scenario or generator JSON")
      ->required();
  analyze->add_option("--trace", ana.trace_path, "trace CSV from simulate")
      ->required();
  analyze->add_option("--out", ana.out_dir, "output directory (default: .)");
  analyze->add_option("--seed", ana.seed, "placement seed for generator specs");
  analyze->add_option("--power-levels", ana.power_levels,
                      "oracle power grid size per user");
  analyze->add_option("--eps", ana.eps, "equilibrium slack");

  CheckOptions chk;
  CLI::App *check = app.add_subcommand(
      "check", "Run a property suite and print its JSON report");
  check->add_option("--suite", chk.suite,
                    "potential | best_response | convergence | poa")
      ->required();
  check->add_option("--seed", chk.seed, "suite RNG seed");
  check->add_option("--out", chk.out_path, "also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e); // prints the message
    return kExitValidation;
  }

  gen.seed_given = generate->count("--seed") > 0;
  sim.seed_given = simulate->count("--seed") > 0;
  ana.seed_given = analyze->count("--seed") > 0;

  try {
    if (generate->parsed())
      return cmd_generate(gen);
    if (simulate->parsed())
      return cmd_simulate(sim);
    if (sweep->parsed())
      return cmd_sweep(swp);
    if (analyze->parsed())
      return cmd_analyze(ana);
    if (check->parsed())
      return cmd_check(chk);
  } catch (const CliError &e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
