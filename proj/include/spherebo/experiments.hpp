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
#include <string>
#include <string_view>
#include <vector>

#include "spherebo/engine.hpp"
#include "spherebo/kernels.hpp"
#include "spherebo/objectives.hpp"
#include "spherebo/rng.hpp"

namespace spherebo {

struct ThinShellResult {
  double mean_sq_norm = 0.0;
  // Sample variance (n - 1 denominator).
  double var_sq_norm = 0.0;
};

/// ||z||^2 for M uniform draws on [-1,1]^D scaled by a = sqrt(D/3), l = 1.
ThinShellResult thin_shell_experiment(int dim, int samples, RandomStream& rng);

struct DiagnosticsReport {
  std::vector<double> boundary_fraction;
  // Entry t-2 is the OTSD of the first t points.
  std::vector<double> otsd;
  double mean_boundary_fraction = 0.0;
  double final_boundary_fraction = 0.0;
  double final_otsd = 0.0;
};

/// Throws MalformedInput when x was elided from the records.
DiagnosticsReport diagnose(const std::vector<TrajectoryRecord>& records);
std::vector<Vector> trajectory_points(const std::vector<TrajectoryRecord>& records);

struct LabeledTrajectory {
  std::string config_id;
  std::uint64_t seed = 0;
  std::vector<TrajectoryRecord> records;
};

/// boundary.csv: iteration,config_id,seed,boundary_fraction
void write_boundary_csv(const std::vector<LabeledTrajectory>& runs,
                        const std::filesystem::path& path);
/// otsd.csv: iteration,config_id,seed,otsd (from iteration 2)
void write_otsd_csv(const std::vector<LabeledTrajectory>& runs, const std::filesystem::path& path);

enum class RegressionMode { Sobol, AdaptiveBO };
std::string_view to_string(RegressionMode mode);

struct RegressionModel {
  std::string name;
  KernelSpec spec;
  HyperpriorKind hyperprior = HyperpriorKind::PlainLogNormal;
  bool ard_enabled = true;
};

struct RegressionOptions {
  int n_train = 400;
  int n_test = 100;
  HyperfitOptions hyperfit;
  // Template for AdaptiveBO mode; objective, dim, budget and seed are
  // overwritten per run.
  RunConfig adaptive;
};

struct RmseRow {
  std::string model;
  RegressionMode mode = RegressionMode::Sobol;
  std::uint64_t seed = 0;
  double rmse = 0.0;
};

/// Fits each model to n_train points and reports its RMSE on the next n_test
/// points, in units of the training targets' standard deviation.
/// Sobol mode draws both sets from one scrambled Sobol stream; AdaptiveBO
/// mode takes them from a BO run of n_train + n_test evaluations.
std::vector<RmseRow> regression_study(const SyntheticObjective& objective,
                                      const std::vector<RegressionModel>& models,
                                      RegressionMode mode,
                                      const std::vector<std::uint64_t>& seeds,
                                      const RegressionOptions& options = {});

/// Standardized RMSE of one fitted model on held-out data.
double standardized_rmse(const RegressionModel& model, const Eigen::Ref<const Matrix>& x_train,
                         const Eigen::Ref<const Vector>& y_train,
                         const Eigen::Ref<const Matrix>& x_test,
                         const Eigen::Ref<const Vector>& y_test, const HyperfitOptions& hyperfit,
                         RandomStream& rng);

/// rmse.csv: model,mode,seed,rmse
void write_rmse_csv(const std::vector<RmseRow>& rows, const std::filesystem::path& path);

}  // namespace spherebo
