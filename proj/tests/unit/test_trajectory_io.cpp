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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "spherebo/errors.hpp"
#include "spherebo/trajectory_io.hpp"

using namespace spherebo;
namespace fs = std::filesystem;

namespace {

TrajectoryRecord sample_record() {
  TrajectoryRecord r;
  r.t = 7;
  r.x = Vector(3);
  r.x << 0.1, -1.0 / 3.0, 1.0;
  r.x_sup_norm = 1.0;
  r.y = -2.5e-17;
  r.incumbent = 0.75;
  r.boundary_fraction = 2.0 / 7.0;
  r.phase = "bo";
  r.fit = FitDiagnostics{-12.3456789012345678, 1e-10, "00ff00ff00ff00ff"};
  return r;
}

void expect_config_error(const std::string& text, const std::string& fragment) {
  try {
    parse_config(text);
    FAIL("expected InvalidConfig for " << text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
    CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
  }
}

}  // namespace

TEST_CASE("json lines round-trip exactly") {
  const TrajectoryRecord r = sample_record();
  const std::string line = to_json_line(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.rfind("{\"t\":7,\"x\":[", 0) == 0);
  const TrajectoryRecord back = parse_json_line(line);
  CHECK(back.t == r.t);
  CHECK((back.x - r.x).norm() == 0.0);
  CHECK(back.y == r.y);
  CHECK(back.incumbent == r.incumbent);
  CHECK(back.boundary_fraction == r.boundary_fraction);
  CHECK(back.phase == "bo");
  REQUIRE(back.fit.has_value());
  CHECK(back.fit->evidence == r.fit->evidence);
  CHECK(back.fit->hyperparams_digest == r.fit->hyperparams_digest);
  CHECK_FALSE(back.wall_ms.has_value());
  CHECK(to_json_line(back) == line);
}

TEST_CASE("non-finite values are written as null") {
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
  CHECK(format_double(std::nan("")) == "null");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed lines are rejected") {
  for (const char* bad : {"", "{", "[]", "{\"t\":1}", "{\"t\":\"a\",\"x\":[],\"y\":1}"}) {
    CHECK_THROWS_AS(parse_json_line(bad), Error);
  }
  std::istringstream in(to_json_line(sample_record()) + "\nnot json\n" +
                        to_json_line(sample_record()) + "\n");
  try {
    read_trajectory(in);
    FAIL("expected MalformedInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedInput);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("a torn final line is dropped") {
  const std::string full = to_json_line(sample_record()) + "\n";
  std::string text = full + full + full;
  // Every truncation point leaves a readable prefix.
  for (std::size_t cut = 0; cut <= text.size(); ++cut) {
    std::istringstream in(text.substr(0, cut));
    const auto recs = read_trajectory(in);
    CHECK(recs.size() == cut / full.size());
  }
}

TEST_CASE("missing trajectory file") {
  CHECK_THROWS_AS(read_trajectory(fs::path("/nonexistent/run.jsonl")), Error);
}

TEST_CASE("summary csv layout") {
  const fs::path p = fs::temp_directory_path() / "spherebo_summary_test.csv";
  write_summary_csv({{1, "a", 0.5, 0.0, 1}, {2, "a", 0.25, 0.125, 1}}, p);
  std::ifstream in(p);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "iteration,config_id,mean_incumbent,sem_incumbent,n_seeds");
  CHECK(row1 == "1,a,0.5,0,1");
  CHECK(row2 == "2,a,0.25,0.125,1");
}

TEST_CASE("single-run config") {
  const ConfigDocument doc = parse_config(R"({
    "objective": "ackley", "dim": 6, "kernel": "SphericalPoly", "kernel_order": 2,
    "projection": "Radial", "acquisition": "UCB", "ucb_lambda": 3.0,
    "hyperprior": "DSPLogNormal", "n_init": 4, "budget": 9, "seed": 11,
    "hyperfit": {"num_starts": 2}, "acquisition_budget": {"num_candidates": 64}
  })");
  CHECK_FALSE(doc.is_suite);
  REQUIRE(doc.runs.size() == 1);
  const RunConfig& c = doc.runs[0];
  CHECK(c.objective == "ackley");
  CHECK(c.dim == 6);
  CHECK(c.kernel == KernelFamily::SphericalPoly);
  CHECK(c.kernel_order == 2);
  CHECK(c.projection == SphericalMapKind::Radial);
  CHECK(c.acquisition == AcquisitionKind::UCB);
  CHECK(c.ucb_lambda == 3.0);
  CHECK(c.hyperprior == HyperpriorKind::DSPLogNormal);
  CHECK(c.budget == 9);
  CHECK(c.seed == 11);
  CHECK(c.hyperfit.num_starts == 2);
  CHECK(c.hyperfit.max_iterations == HyperfitOptions{}.max_iterations);
  CHECK(c.acquisition_budget.num_candidates == 64);
}

TEST_CASE("suite config merges shared keys") {
  const ConfigDocument doc = parse_config(R"({
    "objective": "levy", "dim": 3, "budget": 8, "n_init": 4, "seeds": [0, 1, 2], "parallel": 2,
    "runs": [{"id": "std", "kernel": "StandardLinear"}, {"kernel": "SphericalLinear", "dim": 5}]
  })");
  CHECK(doc.is_suite);
  CHECK(doc.parallel == 2);
  CHECK(doc.seeds == std::vector<std::uint64_t>{0, 1, 2});
  REQUIRE(doc.runs.size() == 2);
  CHECK(doc.runs[0].id == "std");
  CHECK(doc.runs[0].dim == 3);
  CHECK(doc.runs[1].id == "run1");
  CHECK(doc.runs[1].dim == 5);
  CHECK(doc.runs[1].objective == "levy");
}

TEST_CASE("config errors name the offending field") {
  expect_config_error(R"({"dim": 3})", "objective");
  expect_config_error(R"({"objective": "levy"})", "dim");
  expect_config_error(R"({"objective": "levy", "dim": 3, "colour": 1})", "colour");
  expect_config_error(R"({"objective": "levy", "dim": 3, "hyperfit": {"starts": 1}})",
                      "hyperfit.starts");
  expect_config_error(R"({"objective": "levy", "dim": 3, "kernel": "Matern"})", "kernel");
  expect_config_error(R"({"objective": "levy", "dim": "three"})", "dim");
  expect_config_error(R"({"objective": "levy", "dim": 3, "budget": 2, "n_init": 5})", "budget");
  expect_config_error(R"({"objective": "levy", "dim": 3, "seeds": []})", "seeds");
  expect_config_error(R"({"objective": "levy", "dim": 3, "runs": [{"id": "a"}, {"id": "a"}]})",
                      "duplicate");
  expect_config_error(R"({"runs": [{"dim": 2}]})", "runs[0].objective");
  expect_config_error("{not json", "JSON");
}
