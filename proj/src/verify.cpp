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

#include "spherebo/verify.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <limits>

#include "spherebo/acquisition.hpp"
#include "spherebo/errors.hpp"
#include "spherebo/experiments.hpp"
#include "spherebo/geometry.hpp"
#include "spherebo/kernels.hpp"
#include "spherebo/rng.hpp"
#include "spherebo/surrogate.hpp"

namespace spherebo {

namespace {

ProjectionFn projection_or_default(const VerifyOptions& options) {
  if (options.projection) return options.projection;
  return [](const Vector& z) {
    return map_to_sphere(z, SphericalMap{SphericalMapKind::InverseStereographic, 1.0});
  };
}

template <typename Fn>
CheckResult timed(const std::string& name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = fn();
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<std::string> verification_check_names() {
  return {"boundary-theorem", "counterexample", "taylor", "thin-shell", "duality"};
}

CheckResult check_boundary_theorem(const VerifyOptions& options) {
  RandomStream rng(options.seed, 0xB7);
  int total = 0;
  int passes = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int dim : {2, 5, 10}) {
    for (bool intercept : {true, false}) {
      for (AcquisitionKind kind : {AcquisitionKind::EI, AcquisitionKind::UCB}) {
        const auto report =
            verify_boundary_theorem(kind, dim, options.boundary_trials, intercept, rng);
        total += static_cast<int>(report.trials.size());
        passes += report.passes;
        worst = std::min(worst, report.min_sup_norm());
      }
    }
  }
  return {"", passes == total,
          fmt::format("{}/{} maximizers on the boundary, min sup-norm {:.9f}", passes, total, worst),
          0.0};
}

CheckResult check_counterexample(const VerifyOptions& options) {
  const ProjectionFn p = projection_or_default(options);
  const Vector beta = (Vector(2) << 0.5, -1.0).finished();
  auto alpha = [&](double x) { return beta.dot(p(Vector::Constant(1, x))); };

  const double expected[3][2] = {{-1.0, -0.5}, {0.5, 1.0}, {1.0, 0.5}};
  double worst_err = 0.0;
  for (const auto& e : expected) worst_err = std::max(worst_err, std::abs(alpha(e[0]) - e[1]));

  const int grid = 100000;
  double grid_best = -std::numeric_limits<double>::infinity();
  double grid_arg = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = -1.0 + 2.0 * i / (grid - 1);
    const double v = alpha(x);
    if (v > grid_best) {
      grid_best = v;
      grid_arg = x;
    }
  }
  RandomStream rng(options.seed, 0xC0);
  const CandidateResult best =
      maximize_over_box([&](const Vector& x) { return alpha(x[0]); }, 1, rng);
  const double x_star = best.point[0];
  const bool interior = std::abs(x_star) < 1.0 - 1e-6;
  const bool close = std::abs(x_star - grid_arg) < 0.01;
  const bool passed = worst_err <= 1e-12 && interior && close;
  return {"", passed,
          fmt::format("max golden error {:.3g}, x* = {:.6f}, grid argmax {:.6f}", worst_err,
                      x_star, grid_arg),
          0.0};
}

CheckResult check_taylor(const VerifyOptions& options) {
  const ProjectionFn p = projection_or_default(options);
  RandomStream rng(options.seed, 0x7A);
  double worst = 0.0;
  for (int dim : {2, 60, 500}) {
    for (int k = 0; k < options.taylor_pairs; ++k) {
      // Spread the preimages so the pairs cover the whole sphere.
      const double r1 = std::exp(rng.uniform(-2.0, 2.0));
      const double r2 = std::exp(rng.uniform(-2.0, 2.0));
      const Vector z1 = rng.normal_vector(dim).normalized() * r1;
      const Vector z2 = rng.normal_vector(dim).normalized() * r2;
      const Vector u1 = p(z1);
      const Vector u2 = p(z2);
      const double rbf = std::exp(-0.5 * (u1 - u2).squaredNorm());
      const double series = rbf_on_sphere_taylor(u1.dot(u2), 30);
      const double err = std::abs(rbf - series);
      worst = std::isnan(err) ? std::numeric_limits<double>::infinity() : std::max(worst, err);
    }
  }
  return {"", worst < 1e-10, fmt::format("max |rbf - series| = {:.3g}", worst), 0.0};
}

CheckResult check_thin_shell(const VerifyOptions& options) {
  RandomStream rng(options.seed, 0x75);
  bool passed = true;
  std::string detail;
  for (int dim : {10, 100, 1000}) {
    const ThinShellResult r = thin_shell_experiment(dim, options.thin_shell_samples, rng);
    const double var = 4.0 / (5.0 * dim);
    const double sigma = std::sqrt(var / options.thin_shell_samples);
    const bool ok = std::abs(r.mean_sq_norm - 1.0) <= 4.0 * sigma &&
                    std::abs(r.var_sq_norm - var) <= 0.1 * var;
    passed = passed && ok;
    detail += fmt::format("{}D={}: mean {:.5f}, var {:.3g} (want {:.3g})",
                          detail.empty() ? "" : "; ", dim, r.mean_sq_norm, r.var_sq_norm, var);
  }
  return {"", passed, detail, 0.0};
}

CheckResult check_duality(const VerifyOptions& options) {
  RandomStream rng(options.seed, 0xD0);
  const SphericalMapKind maps[] = {SphericalMapKind::InverseStereographic,
                                   SphericalMapKind::Radial, SphericalMapKind::Normalization,
                                   SphericalMapKind::Homogeneous, SphericalMapKind::CoSine};
  double worst_mean = 0.0;
  double worst_var = 0.0;
  double worst_ev = 0.0;
  for (int inst = 0; inst < options.duality_instances; ++inst) {
    const int family = static_cast<int>(rng.below(4));
    int dim = 1 + static_cast<int>(rng.below(20));
    KernelSpec spec;
    if (family == 0) {
      spec = KernelSpec::standard_linear(dim);
    } else if (family == 1) {
      spec = KernelSpec::spherical_linear(dim, maps[rng.below(5)]);
    } else {
      const int order = family;  // 2 or 3
      if (order == 3) dim = std::min(dim, 8);
      spec = KernelSpec::spherical_poly(dim, order);
    }
    const int n = 1 + static_cast<int>(rng.below(60));
    Matrix x(n, dim);
    for (int i = 0; i < n; ++i) x.row(i) = rng.uniform_vector(dim, -1.0, 1.0).transpose();
    const Vector w = rng.normal_vector(dim);
    Vector y(n);
    for (int i = 0; i < n; ++i) y[i] = std::sin(3.0 * x.row(i).dot(w)) + 0.1 * rng.normal();

    SurrogateHyperparams hp = SurrogateHyperparams::initial(spec, HyperpriorKind::PlainLogNormal);
    for (int i = 0; i < dim; ++i) hp.scaling.ard_lengthscales[i] = std::exp(rng.uniform(-1.0, 1.0));
    for (Eigen::Index i = 0; i < hp.raw_coefficients.size(); ++i) {
      hp.raw_coefficients[i] = rng.normal();
    }
    hp.noise_variance = std::exp(rng.uniform(std::log(1e-3), std::log(1e-1)));

    const WeightPosterior wp = fit_weight_space(x, y, hp, spec);
    const FunctionPosterior fp = fit_function_space(x, y, hp, spec);
    for (int k = 0; k < 10; ++k) {
      const Vector q = rng.uniform_vector(dim, -1.0, 1.0);
      const Prediction a = wp.predict(q);
      const Prediction b = fp.predict(q);
      worst_mean = std::max(worst_mean, std::abs(a.mean - b.mean));
      worst_var = std::max(worst_var, std::abs(a.stddev * a.stddev - b.stddev * b.stddev));
    }
    const double ev_w = log_marginal_likelihood(x, y, hp, spec, InferencePath::WeightSpace);
    const double ev_f = log_marginal_likelihood(x, y, hp, spec, InferencePath::FunctionSpace);
    worst_ev = std::max(worst_ev, std::abs(ev_w - ev_f));
  }
  const bool passed = worst_mean < 1e-6 && worst_var < 1e-6 && worst_ev < 1e-6;
  return {"", passed,
          fmt::format("max gaps: mean {:.3g}, variance {:.3g}, log evidence {:.3g}", worst_mean,
                      worst_var, worst_ev),
          0.0};
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  using Check = CheckResult (*)(const VerifyOptions&);
  const std::pair<const char*, Check> checks[] = {
      {"boundary-theorem", check_boundary_theorem},
      {"counterexample", check_counterexample},
      {"taylor", check_taylor},
      {"thin-shell", check_thin_shell},
      {"duality", check_duality},
  };
  if (options.only) {
    bool known = false;
    for (const auto& [name, fn] : checks) known = known || *options.only == name;
    if (!known) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("unknown check '{}'", *options.only));
    }
  }
  std::vector<CheckResult> results;
  for (const auto& [name, fn] : checks) {
    if (options.only && *options.only != name) continue;
    results.push_back(timed(name, [&, fn = fn] {
      try {
        return fn(options);
      } catch (const std::exception& e) {
        return CheckResult{"", false, fmt::format("error: {}", e.what()), 0.0};
      }
    }));
  }
  return results;
}

}  // namespace spherebo
