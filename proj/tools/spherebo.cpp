// Copyright 2026 The SphereBO Authors. All Rights Reserved.
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
// =============================================================================

// spherebo command-line entry point: run, diagnose, verify.

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spherebo/engine.hpp"
#include "spherebo/errors.hpp"
#include "spherebo/experiments.hpp"
#include "spherebo/trajectory_io.hpp"
#include "spherebo/verify.hpp"

namespace fs = std::filesystem;
using namespace spherebo;

namespace {

constexpr int kExitInvalidConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerifyFailed = 3;

fs::path output_dir(const std::optional<std::string>& flag, const fs::path& from_config) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SPHEREBO_OUT"); env && *env) return env;
  if (!from_config.empty()) return from_config;
  return "out";
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::optional<std::string>& out_flag, std::optional<int> parallel) {
  ConfigDocument doc;
  try {
    doc = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  const fs::path out = output_dir(out_flag, doc.out_dir);
  try {
    if (!doc.is_suite) {
      RunConfig cfg = doc.runs.front();
      if (seed) cfg.seed = *seed;
      if (cfg.output_path.empty()) {
        cfg.output_path = out / trajectory_filename(cfg);
      } else if (out_flag) {
        cfg.output_path = out / cfg.output_path.filename();
      }
      const auto records = run_bo(cfg);
      fmt::print("{} seed {}: final incumbent {:.17g}\n", cfg.id, cfg.seed,
                 records.back().incumbent);
      return 0;
    }
    std::vector<std::uint64_t> seeds = doc.seeds;
    if (seed) seeds = {*seed};
    std::vector<RunConfig> configs;
    for (const auto& base : doc.runs) {
      if (seeds.empty()) {
        configs.push_back(base);
        continue;
      }
      for (const auto s : seeds) {
        RunConfig cfg = base;
        cfg.seed = s;
        configs.push_back(cfg);
      }
    }
    const SuiteResult result = run_suite(configs, parallel.value_or(doc.parallel), out);
    for (const auto& row : result.summary) {
      if (&row == &result.summary.back() || (&row + 1)->config_id != row.config_id) {
        fmt::print("{}: final incumbent {:.17g} +- {:.3g} over {} seeds\n", row.config_id,
                   row.mean_incumbent, row.sem_incumbent, row.n_seeds);
      }
    }
    for (const auto& f : result.failures) {
      std::cerr << fmt::format("run {} seed {} failed: {}\n", f.config_id, f.seed, f.message);
    }
    return result.failures.empty() ? 0 : kExitRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidConfig ? kExitInvalidConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

LabeledTrajectory label(const fs::path& path) {
  static const std::regex pattern(R"((.+)_seed(\d+))");
  LabeledTrajectory run;
  const std::string stem = path.stem().string();
  std::smatch m;
  if (std::regex_match(stem, m, pattern)) {
    run.config_id = m[1];
    run.seed = std::stoull(m[2]);
  } else {
    run.config_id = stem;
  }
  run.records = read_trajectory(path);
  return run;
}

int cmd_diagnose(const std::vector<std::string>& paths, const std::string& which,
                 const std::optional<std::string>& out_flag) {
  std::vector<LabeledTrajectory> runs;
  try {
    for (const auto& p : paths) runs.push_back(label(p));
    for (const auto& run : runs) trajectory_points(run.records);
  } catch (const Error& e) {
    std::cerr << "cannot diagnose: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  try {
    const fs::path out = output_dir(out_flag, {});
    fs::create_directories(out);
    const fs::path target = out / (which + ".csv");
    if (which == "boundary") {
      write_boundary_csv(runs, target);
    } else {
      write_otsd_csv(runs, target);
    }
    fmt::print("wrote {}\n", target.string());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_verify(const std::optional<std::string>& only, std::optional<std::uint64_t> seed) {
  VerifyOptions options;
  options.only = only;
  if (seed) options.seed = *seed;
  std::vector<CheckResult> results;
  try {
    results = run_verification(options);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalidConfig;
  }
  bool all = true;
  for (const auto& r : results) {
    fmt::print("{:<18} {:<4} {:>8.2f}s  {}\n", r.name, r.passed ? "PASS" : "FAIL", r.seconds,
               r.detail);
    all = all && r.passed;
  }
  return all ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization with spherical linear kernels"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> parallel;
  auto* run = app.add_subcommand("run", "execute a run or a suite from a JSON config");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--seed", seed, "override the seed (or the suite's seed list)");
  run->add_option("--out", out, "output directory (default $SPHEREBO_OUT or ./out)");
  run->add_option("--parallel", parallel, "concurrent runs in a suite")->check(CLI::PositiveNumber);

  std::vector<std::string> paths;
  std::string which = "otsd";
  auto* diag = app.add_subcommand("diagnose", "boundary or OTSD series from trajectories");
  diag->add_option("trajectories", paths, "JSONL trajectory files")->required();
  diag->add_option("--which", which, "boundary or otsd")
      ->check(CLI::IsMember({"boundary", "otsd"}));
  diag->add_option("--out", out, "output directory (default $SPHEREBO_OUT or ./out)");

  std::optional<std::string> only;
  auto* verify = app.add_subcommand("verify", "run the verification battery");
  verify->add_option("--only", only, "run a single check")
      ->check(CLI::IsMember(verification_check_names()));
  verify->add_option("--seed", seed, "seed for the randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  if (*run) return cmd_run(config_path, seed, out, parallel);
  if (*diag) return cmd_diagnose(paths, which, out);
  return cmd_verify(only, seed);
}
