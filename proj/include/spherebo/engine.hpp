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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spherebo/acquisition.hpp"
#include "spherebo/hyperprior.hpp"
#include "spherebo/kernels.hpp"
#include "spherebo/objectives.hpp"
#include "spherebo/surrogate.hpp"

namespace spherebo {

struct RunConfig {
  std::string id = "run";
  std::string objective;
  int dim = 0;
  std::uint64_t objective_seed = 0;

  KernelFamily kernel = KernelFamily::SphericalLinear;
  int kernel_order = 1;
  SphericalMapKind projection = SphericalMapKind::InverseStereographic;
  bool intercept = true;
  AcquisitionKind acquisition = AcquisitionKind::LogEI;
  double ucb_lambda = 0.0;
  HyperpriorKind hyperprior = HyperpriorKind::PlainLogNormal;

  bool centered = true;
  bool ard_enabled = true;
  bool learn_global_lengthscale = false;
  // Defaults to sqrt(D/3).
  std::optional<double> global_lengthscale;

  int n_init = 30;
  int budget = 100;
  std::uint64_t seed = 0;
  int refit_stride = 1;
  HyperfitOptions hyperfit;
  AcquisitionBudget acquisition_budget;

  std::filesystem::path output_path;
  // Off by default so that repeated runs produce identical files.
  bool record_wall_clock = false;
  // Above this dimension x is logged as a hash plus boundary statistics.
  int full_x_max_dim = 1000;

  void validate() const;
  KernelSpec kernel_spec() const;
  SurrogateHyperparams initial_hyperparams() const;
};

struct FitDiagnostics {
  double evidence = 0.0;
  double jitter = 0.0;
  std::string hyperparams_digest;
};

struct TrajectoryRecord {
  int t = 0;
  // Empty when elided for large D.
  Vector x;
  std::optional<std::string> x_hash;
  double x_sup_norm = 0.0;
  double y = 0.0;
  double incumbent = 0.0;
  double boundary_fraction = 0.0;
  // "init", "bo" or "fallback".
  std::string phase;
  std::optional<FitDiagnostics> fit;
  std::optional<double> wall_ms;
};

using RecordSink = std::function<void(const TrajectoryRecord&)>;

/// Runs the objective registered under cfg.objective. Records are streamed
/// to cfg.output_path (when set) as they are produced.
std::vector<TrajectoryRecord> run_bo(const RunConfig& cfg);
std::vector<TrajectoryRecord> run_bo(const RunConfig& cfg, const SyntheticObjective& objective,
                                     const RecordSink& sink = {});

std::string hyperparams_digest(const SurrogateHyperparams& hp);
std::string vector_hash(const Eigen::Ref<const Vector>& x);

struct SummaryRow {
  int iteration = 0;
  std::string config_id;
  double mean_incumbent = 0.0;
  double sem_incumbent = 0.0;
  int n_seeds = 0;
};

struct RunFailure {
  std::string config_id;
  std::uint64_t seed = 0;
  std::string message;
};

struct SuiteResult {
  std::vector<SummaryRow> summary;
  std::vector<RunFailure> failures;
  std::vector<std::filesystem::path> trajectory_files;
};

std::filesystem::path trajectory_filename(const RunConfig& cfg);

/// Runs every config (one per seed) on up to `parallelism` threads, writing
/// `<id>_seed<k>.jsonl` per run and summary.csv into out_dir. Failed runs are
/// reported and left out of the aggregate.
SuiteResult run_suite(const std::vector<RunConfig>& configs, int parallelism,
                      const std::filesystem::path& out_dir);

/// Mean and standard error of the incumbent per iteration, grouped by config
/// id in order of first appearance.
std::vector<SummaryRow> summarize(
    const std::vector<std::pair<std::string, std::vector<TrajectoryRecord>>>& runs);

}  // namespace spherebo
