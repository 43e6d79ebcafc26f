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

#include "spherebo/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "spherebo/diagnostics.hpp"
#include "spherebo/errors.hpp"
#include "spherebo/rng.hpp"
#include "spherebo/sobol.hpp"
#include "spherebo/trajectory_io.hpp"

namespace spherebo {

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
  if (id.empty()) fail("id: must not be empty");
  if (objective.empty()) fail("objective: missing objective id");
  if (dim < 1) fail("dim: must be >= 1");
  if (dim > kSobolMaxDimension) fail(fmt::format("dim: at most {}", kSobolMaxDimension));
  if (n_init < 1) fail("n_init: must be >= 1");
  if (budget < n_init) fail("budget: must be >= n_init");
  if (refit_stride < 1) fail("refit_stride: must be >= 1");
  if (kernel_order < 1) fail("kernel_order: must be >= 1");
  if (!(ucb_lambda >= 0.0) || !std::isfinite(ucb_lambda)) fail("ucb_lambda: must be >= 0");
  if (global_lengthscale && !(*global_lengthscale > 0.0)) {
    fail("global_lengthscale: must be positive");
  }
  if (hyperfit.num_starts < 1 || hyperfit.max_iterations < 0) fail("hyperfit: invalid budget");
  if (acquisition_budget.num_candidates < 1 || acquisition_budget.num_refine < 1 ||
      acquisition_budget.num_steps < 0) {
    fail("acquisition_budget: invalid budget");
  }
}

KernelSpec RunConfig::kernel_spec() const {
  KernelSpec spec;
  switch (kernel) {
    case KernelFamily::StandardLinear: spec = KernelSpec::standard_linear(dim); break;
    case KernelFamily::SphericalLinear: spec = KernelSpec::spherical_linear(dim, projection); break;
    case KernelFamily::SphericalPoly:
      spec = KernelSpec::spherical_poly(dim, kernel_order);
      spec.map_kind = projection;
      break;
    case KernelFamily::RBF: spec = KernelSpec::rbf(dim); break;
    case KernelFamily::RBFOnSphere:
      spec = KernelSpec::rbf_on_sphere(dim);
      spec.map_kind = projection;
      break;
  }
  spec.scaling.centered = centered;
  if (global_lengthscale) spec.scaling.global_lengthscale = *global_lengthscale;
  if (!intercept && spec.num_coefficients() > 0) {
    spec.raw_coefficients[0] = -std::numeric_limits<double>::infinity();
  }
  spec.validate();
  return spec;
}

SurrogateHyperparams RunConfig::initial_hyperparams() const {
  SurrogateHyperparams hp = SurrogateHyperparams::initial(kernel_spec(), hyperprior);
  hp.ard_enabled = ard_enabled;
  hp.learn_global_lengthscale = learn_global_lengthscale;
  return hp;
}

namespace {

std::uint64_t fnv1a(const double* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (std::size_t i = 0; i < n; ++i) {
    auto bits = std::bit_cast<std::uint64_t>(data[i]);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace

std::string vector_hash(const Eigen::Ref<const Vector>& x) {
  const Vector copy = x;
  return fmt::format("{:016x}", fnv1a(copy.data(), static_cast<std::size_t>(copy.size())));
}

std::string hyperparams_digest(const SurrogateHyperparams& hp) {
  std::vector<double> values;
  values.push_back(hp.scaling.global_lengthscale);
  values.insert(values.end(), hp.scaling.ard_lengthscales.data(),
                hp.scaling.ard_lengthscales.data() + hp.scaling.ard_lengthscales.size());
  values.insert(values.end(), hp.raw_coefficients.data(),
                hp.raw_coefficients.data() + hp.raw_coefficients.size());
  values.push_back(hp.noise_variance);
  return fmt::format("{:016x}", fnv1a(values.data(), values.size()));
}

std::vector<TrajectoryRecord> run_bo(const RunConfig& cfg, const SyntheticObjective& objective,
                                     const RecordSink& sink) {
  cfg.validate();
  if (objective.dim() != cfg.dim) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("objective has dimension {}, config {}", objective.dim(), cfg.dim));
  }
  const KernelSpec spec = cfg.kernel_spec();
  SurrogateHyperparams hp = cfg.initial_hyperparams();
  const RandomStream root(cfg.seed, 0xB0);
  SobolStream init_points(cfg.dim, mix64(cfg.seed));
  SobolStream fallback_points(cfg.dim, mix64(cfg.seed ^ 0xFA11BAC4ull));
  // Guards against objectives that fail everywhere.
  const long max_attempts = 10L * cfg.budget + 100;

  std::vector<TrajectoryRecord> records;
  std::vector<Vector> xs;
  std::vector<double> ys;
  double incumbent = -std::numeric_limits<double>::infinity();
  long attempt = 0;
  int bo_rounds = 0;

  while (static_cast<int>(ys.size()) < cfg.budget) {
    if (attempt >= max_attempts) {
      throw Error(ErrorKind::ObjectiveEvaluationFailed,
                  fmt::format("{}: too many failed objective evaluations", cfg.id));
    }
    const auto started = std::chrono::steady_clock::now();
    RandomStream iter_rng = root.split(static_cast<std::uint64_t>(attempt));
    ++attempt;

    Vector x;
    std::string phase;
    std::optional<FitDiagnostics> fit;
    if (static_cast<int>(ys.size()) < cfg.n_init) {
      x = init_points.next_centered();
      phase = "init";
    } else {
      try {
        const Matrix X = stack_rows(xs);
        const Vector Y = Eigen::Map<const Vector>(ys.data(), static_cast<Eigen::Index>(ys.size()));
        if (bo_rounds % cfg.refit_stride == 0) {
          RandomStream fit_rng = iter_rng.split(1);
          hp = fit_hyperparams(X, Y, hp, spec, fit_rng, cfg.hyperfit);
        }
        ++bo_rounds;
        const EvidenceResult ev = log_marginal_likelihood_detail(X, Y, hp, spec);
        const Posterior posterior = fit_posterior(X, Y, hp, spec);
        AcquisitionSpec acq{cfg.acquisition, cfg.ucb_lambda, incumbent};
        RandomStream acq_rng = iter_rng.split(2);
        CandidateResult best = maximize_acq(posterior, acq, acq_rng, cfg.acquisition_budget);
        x = std::move(best.point);
        fit = FitDiagnostics{ev.log_evidence, ev.jitter, hyperparams_digest(hp)};
        phase = "bo";
      } catch (const Error& e) {
        std::cerr << fmt::format("warning: {} t={}: {} ({}); using a Sobol point\n", cfg.id,
                                 ys.size() + 1, e.what(), to_string(e.kind()));
        x = fallback_points.next_centered();
        phase = "fallback";
      }
    }

    double y = 0.0;
    try {
      y = objective(x);
      if (!std::isfinite(y)) {
        throw Error(ErrorKind::ObjectiveEvaluationFailed, "objective returned a non-finite value");
      }
    } catch (const std::exception& e) {
      std::cerr << fmt::format("warning: {}: objective evaluation failed: {}; point skipped\n",
                               cfg.id, e.what());
      continue;
    }

    xs.push_back(x);
    ys.push_back(y);
    incumbent = std::max(incumbent, y);

    TrajectoryRecord rec;
    rec.t = static_cast<int>(ys.size());
    rec.y = y;
    rec.incumbent = incumbent;
    rec.boundary_fraction = boundary_fraction(x);
    rec.x_sup_norm = x.lpNorm<Eigen::Infinity>();
    if (cfg.dim > cfg.full_x_max_dim) {
      rec.x_hash = vector_hash(x);
    } else {
      rec.x = x;
    }
    rec.phase = std::move(phase);
    rec.fit = std::move(fit);
    if (cfg.record_wall_clock) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              started)
                        .count();
    }
    if (sink) sink(rec);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TrajectoryRecord> run_bo(const RunConfig& cfg) {
  cfg.validate();
  const SyntheticObjective objective = make_objective(cfg.objective, cfg.dim, cfg.objective_seed);
  if (cfg.output_path.empty()) return run_bo(cfg, objective);
  if (cfg.output_path.has_parent_path()) {
    std::filesystem::create_directories(cfg.output_path.parent_path());
  }
  std::ofstream out(cfg.output_path, std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("cannot open {} for writing", cfg.output_path.string()));
  }
  return run_bo(cfg, objective, [&out](const TrajectoryRecord& rec) {
    out << to_json_line(rec) << '\n';
    out.flush();
  });
}

std::filesystem::path trajectory_filename(const RunConfig& cfg) {
  return fmt::format("{}_seed{}.jsonl", cfg.id, cfg.seed);
}

std::vector<SummaryRow> summarize(
    const std::vector<std::pair<std::string, std::vector<TrajectoryRecord>>>& runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const std::vector<TrajectoryRecord>*>> groups;
  for (const auto& [id, recs] : runs) {
    if (!groups.count(id)) order.push_back(id);
    groups[id].push_back(&recs);
  }
  std::vector<SummaryRow> rows;
  for (const auto& id : order) {
    const auto& group = groups[id];
    std::size_t length = std::numeric_limits<std::size_t>::max();
    for (const auto* recs : group) length = std::min(length, recs->size());
    for (std::size_t t = 0; t < length; ++t) {
      std::vector<double> values;
      for (const auto* recs : group) values.push_back((*recs)[t].incumbent);
      const double n = static_cast<double>(values.size());
      const double sem = values.size() > 1 ? sample_stddev(values) / std::sqrt(n) : 0.0;
      rows.push_back({static_cast<int>(t + 1), id, mean(values), sem,
                      static_cast<int>(values.size())});
    }
  }
  return rows;
}

SuiteResult run_suite(const std::vector<RunConfig>& configs, int parallelism,
                      const std::filesystem::path& out_dir) {
  if (configs.empty()) throw Error(ErrorKind::InvalidConfig, "suite: no runs to execute");
  for (const auto& cfg : configs) cfg.validate();
  std::filesystem::create_directories(out_dir);

  const std::size_t n = configs.size();
  std::vector<std::optional<std::vector<TrajectoryRecord>>> results(n);
  std::vector<std::string> errors(n);
  std::vector<std::filesystem::path> paths(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      RunConfig cfg = configs[i];
      cfg.output_path = out_dir / trajectory_filename(cfg);
      paths[i] = cfg.output_path;
      try {
        results[i] = run_bo(cfg);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::clamp(parallelism, 1, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SuiteResult result;
  std::vector<std::pair<std::string, std::vector<TrajectoryRecord>>> done;
  for (std::size_t i = 0; i < n; ++i) {
    result.trajectory_files.push_back(paths[i]);
    if (results[i]) {
      done.emplace_back(configs[i].id, std::move(*results[i]));
    } else {
      result.failures.push_back({configs[i].id, configs[i].seed, errors[i]});
    }
  }
  result.summary = summarize(done);
  write_summary_csv(result.summary, out_dir / "summary.csv");
  return result;
}

}  // namespace spherebo
