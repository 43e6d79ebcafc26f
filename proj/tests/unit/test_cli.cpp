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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + SPHEREBO_CLI_PATH + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spherebo_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_files(const fs::path& dir, const std::string& ext) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

const char* kRun = R"({"id": "q", "objective": "centered_quadratic", "dim": 3, "n_init": 4,
  "budget": 8, "hyperfit": {"num_starts": 1, "max_iterations": 10},
  "acquisition_budget": {"num_candidates": 64, "num_refine": 2, "num_steps": 10}})";

}  // namespace

TEST_CASE("cli run is reproducible") {
  const fs::path dir = fresh_dir("run");
  write_file(dir / "cfg.json", kRun);
  const std::string cfg = (dir / "cfg.json").string();
  REQUIRE(run_cli("run --config " + cfg + " --seed 5 --out " + (dir / "a").string(), dir / "a.log") == 0);
  REQUIRE(run_cli("run --config " + cfg + " --seed 5 --out " + (dir / "b").string(), dir / "b.log") == 0);
  const std::string a = slurp(dir / "a" / "q_seed5.jsonl");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(dir / "b" / "q_seed5.jsonl"));
  CHECK(slurp(dir / "a.log").find("final incumbent") != std::string::npos);
}

TEST_CASE("cli rejects bad configs with exit code 1") {
  const fs::path dir = fresh_dir("bad");
  write_file(dir / "missing.json", R"({"dim": 3})");
  CHECK(run_cli("run --config " + (dir / "missing.json").string() + " --out " + dir.string(),
                dir / "log") == 1);
  CHECK(slurp(dir / "log").find("objective") != std::string::npos);
  write_file(dir / "unknown.json", R"({"objective": "nope", "dim": 3, "budget": 5, "n_init": 5})");
  CHECK(run_cli("run --config " + (dir / "unknown.json").string() + " --out " + dir.string(),
                dir / "log") == 1);
  CHECK(run_cli("run --config " + (dir / "absent.json").string(), dir / "log") == 1);
  CHECK(run_cli("frobnicate", dir / "log") == 1);
  CHECK(count_files(dir, ".jsonl") == 0);
}

TEST_CASE("cli suite writes one trajectory per run and a summary") {
  const fs::path dir = fresh_dir("suite");
  write_file(dir / "suite.json", R"({
    "objective": "levy", "dim": 2, "n_init": 3, "budget": 6, "seeds": [0, 1, 2], "parallel": 2,
    "hyperfit": {"num_starts": 1, "max_iterations": 5},
    "acquisition_budget": {"num_candidates": 32, "num_refine": 2, "num_steps": 5},
    "runs": [{"id": "std", "kernel": "StandardLinear"}, {"id": "sph"}]})");
  REQUIRE(run_cli("run --config " + (dir / "suite.json").string() + " --out " +
                      (dir / "out").string(), dir / "log") == 0);
  CHECK(count_files(dir / "out", ".jsonl") == 6);
  CHECK(count_files(dir / "out", ".csv") == 1);
  CHECK(fs::exists(dir / "out" / "sph_seed2.jsonl"));

  // SPHEREBO_OUT is used when --out is absent.
  const fs::path env_out = dir / "env";
  const std::string args = "run --config " + (dir / "suite.json").string() + " --seed 7";
  const std::string cmd = "SPHEREBO_OUT=\"" + env_out.string() + "\" \"" + SPHEREBO_CLI_PATH +
                          "\" " + args + " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(count_files(env_out, ".jsonl") == 2);

  REQUIRE(run_cli("diagnose " + (dir / "out" / "std_seed0.jsonl").string() + " " +
                      (dir / "out" / "sph_seed0.jsonl").string() + " --which otsd --out " +
                      (dir / "diag").string(),
                  dir / "log") == 0);
  const std::string csv = slurp(dir / "diag" / "otsd.csv");
  CHECK(csv.rfind("iteration,config_id,seed,otsd\n", 0) == 0);
  CHECK(csv.find("\n2,sph,0,") != std::string::npos);
}

TEST_CASE("cli diagnose rejects malformed trajectories") {
  const fs::path dir = fresh_dir("diag_bad");
  write_file(dir / "x_seed0.jsonl", "garbage\n");
  CHECK(run_cli("diagnose " + (dir / "x_seed0.jsonl").string() + " --which boundary --out " +
                    dir.string(), dir / "log") == 1);
  CHECK(run_cli("diagnose " + (dir / "x_seed0.jsonl").string() + " --which neither",
                dir / "log") == 1);
}

TEST_CASE("cli verify subset") {
  const fs::path dir = fresh_dir("verify");
  CHECK(run_cli("verify --only counterexample", dir / "log") == 0);
  CHECK(slurp(dir / "log").find("PASS") != std::string::npos);
  CHECK(run_cli("verify --only nonsense", dir / "log") == 1);
}
