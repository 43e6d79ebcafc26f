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

#include "spherebo/experiments.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

#include "spherebo/diagnostics.hpp"
#include "spherebo/errors.hpp"
#include "spherebo/geometry.hpp"
#include "spherebo/sobol.hpp"
#include "spherebo/surrogate.hpp"
#include "spherebo/trajectory_io.hpp"

namespace spherebo {

ThinShellResult thin_shell_experiment(int dim, int samples, RandomStream& rng) {
  if (dim < 1 || samples < 2) {
    throw Error(ErrorKind::InvalidArgument, "thin shell: need dim >= 1 and samples >= 2");
  }
  const ScalingConfig cfg = ScalingConfig::dimension_scaled(dim);
  // Welford accumulation keeps the variance accurate for large M.
  double m = 0.0;
  double m2 = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double v = scale(rng.uniform_vector(dim, -1.0, 1.0), cfg).squaredNorm();
    const double delta = v - m;
    m += delta / (k + 1);
    m2 += delta * (v - m);
  }
  return {m, m2 / (samples - 1)};
}

std::vector<Vector> trajectory_points(const std::vector<TrajectoryRecord>& records) {
  std::vector<Vector> points;
  points.reserve(records.size());
  for (const auto& r : records) {
    if (r.x_hash || r.x.size() == 0) {
      throw Error(ErrorKind::MalformedInput,
                  fmt::format("record t={} stores only a hash of x; rerun with full x logging", r.t));
    }
    points.push_back(r.x);
  }
  return points;
}

DiagnosticsReport diagnose(const std::vector<TrajectoryRecord>& records) {
  const std::vector<Vector> points = trajectory_points(records);
  DiagnosticsReport report;
  for (const auto& p : points) report.boundary_fraction.push_back(boundary_fraction(p));
  report.otsd = otsd_series(points);
  if (!points.empty()) {
    report.mean_boundary_fraction = mean(report.boundary_fraction);
    report.final_boundary_fraction = report.boundary_fraction.back();
  }
  if (!report.otsd.empty()) report.final_otsd = report.otsd.back();
  return report;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot write {}", path.string()));
  out << header << '\n';
  return out;
}

}  // namespace

void write_boundary_csv(const std::vector<LabeledTrajectory>& runs,
                        const std::filesystem::path& path) {
  auto out = open_csv(path, "iteration,config_id,seed,boundary_fraction");
  for (const auto& run : runs) {
    const std::vector<Vector> points = trajectory_points(run.records);
    for (std::size_t i = 0; i < points.size(); ++i) {
      out << fmt::format("{},{},{},{}\n", run.records[i].t, run.config_id, run.seed,
                         format_double(boundary_fraction(points[i])));
    }
  }
}

void write_otsd_csv(const std::vector<LabeledTrajectory>& runs, const std::filesystem::path& path) {
  auto out = open_csv(path, "iteration,config_id,seed,otsd");
  for (const auto& run : runs) {
    const std::vector<double> series = otsd_series(trajectory_points(run.records));
    for (std::size_t i = 0; i < series.size(); ++i) {
      out << fmt::format("{},{},{},{}\n", run.records[i + 1].t, run.config_id, run.seed,
                         format_double(series[i]));
    }
  }
}

std::string_view to_string(RegressionMode mode) {
  return mode == RegressionMode::Sobol ? "Sobol" : "AdaptiveBO";
}

double standardized_rmse(const RegressionModel& model, const Eigen::Ref<const Matrix>& x_train,
                         const Eigen::Ref<const Vector>& y_train,
                         const Eigen::Ref<const Matrix>& x_test,
                         const Eigen::Ref<const Vector>& y_test, const HyperfitOptions& hyperfit,
                         RandomStream& rng) {
  SurrogateHyperparams hp = SurrogateHyperparams::initial(model.spec, model.hyperprior);
  hp.ard_enabled = model.ard_enabled;
  hp = fit_hyperparams(x_train, y_train, hp, model.spec, rng, hyperfit);
  const Posterior posterior = fit_posterior(x_train, y_train, hp, model.spec);
  const OutputTransform t = OutputTransform::fit(y_train);
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x_test.rows(); ++i) {
    const double err = (predict(posterior, x_test.row(i).transpose()).mean - y_test[i]) / t.scale;
    sq += err * err;
  }
  return std::sqrt(sq / static_cast<double>(x_test.rows()));
}

std::vector<RmseRow> regression_study(const SyntheticObjective& objective,
                                      const std::vector<RegressionModel>& models,
                                      RegressionMode mode,
                                      const std::vector<std::uint64_t>& seeds,
                                      const RegressionOptions& options) {
  if (options.n_train < 2 || options.n_test < 1) {
    throw Error(ErrorKind::InvalidArgument, "regression study: need n_train >= 2, n_test >= 1");
  }
  for (const auto& m : models) {
    if (m.spec.input_dim() != objective.dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  fmt::format("model {} has dimension {}, objective {}", m.name,
                              m.spec.input_dim(), objective.dim()));
    }
  }
  const int d = objective.dim();
  const int total = options.n_train + options.n_test;
  std::vector<RmseRow> rows;
  for (const std::uint64_t seed : seeds) {
    Matrix x(total, d);
    Vector y(total);
    if (mode == RegressionMode::Sobol) {
      SobolStream sobol(d, mix64(seed));
      for (int i = 0; i < total; ++i) {
        x.row(i) = sobol.next_centered().transpose();
        y[i] = objective(x.row(i).transpose());
      }
    } else {
      RunConfig cfg = options.adaptive;
      cfg.objective = objective.id();
      cfg.dim = d;
      cfg.budget = total;
      cfg.n_init = std::min(cfg.n_init, total);
      cfg.seed = seed;
      const auto records = run_bo(cfg, objective);
      for (int i = 0; i < total; ++i) {
        x.row(i) = records[static_cast<std::size_t>(i)].x.transpose();
        y[i] = records[static_cast<std::size_t>(i)].y;
      }
    }
    const auto n = options.n_train;
    for (std::size_t k = 0; k < models.size(); ++k) {
      RandomStream rng(seed, 0x5E6 + k);
      const double rmse =
          standardized_rmse(models[k], x.topRows(n), y.head(n), x.bottomRows(options.n_test),
                            y.tail(options.n_test), options.hyperfit, rng);
      rows.push_back({models[k].name, mode, seed, rmse});
    }
  }
  return rows;
}

void write_rmse_csv(const std::vector<RmseRow>& rows, const std::filesystem::path& path) {
  auto out = open_csv(path, "model,mode,seed,rmse");
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{}\n", r.model, to_string(r.mode), r.seed, format_double(r.rmse));
  }
}

}  // namespace spherebo
