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

#include "spherebo/acquisition.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "spherebo/diagnostics.hpp"
#include "spherebo/errors.hpp"
#include "spherebo/sobol.hpp"

namespace spherebo {

std::string_view to_string(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::EI: return "EI";
    case AcquisitionKind::LogEI: return "LogEI";
    case AcquisitionKind::UCB: return "UCB";
    case AcquisitionKind::Thompson: return "Thompson";
  }
  return "LogEI";
}

AcquisitionKind parse_acquisition(std::string_view name) {
  for (auto k : {AcquisitionKind::EI, AcquisitionKind::LogEI, AcquisitionKind::UCB,
                 AcquisitionKind::Thompson}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidConfig, fmt::format("unknown acquisition '{}'", name));
}

void AcquisitionSpec::validate() const {
  if (kind == AcquisitionKind::UCB && !(ucb_lambda >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "UCB lambda must be >= 0");
  }
  if ((kind == AcquisitionKind::EI || kind == AcquisitionKind::LogEI) &&
      !std::isfinite(incumbent)) {
    throw Error(ErrorKind::InvalidArgument, "EI needs a finite incumbent");
  }
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_h(double gamma) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  if (gamma >= -1.0) {
    return std::log(gamma * normal_cdf(gamma) + normal_pdf(gamma));
  }
  const double t = -gamma;
  if (gamma >= kLogEiTailSwitch) {
    // h = phi(t) - t Phi(-t); moderate cancellation only.
    return std::log(normal_pdf(t) - t * normal_cdf(-t));
  }
  // h = phi(t) (1 - t R(t)), R the Mills ratio, with
  // 1 - t R(t) ~ sum_{k>=1} (-1)^{k+1} (2k-1)!! / t^{2k}.
  const double inv_t2 = 1.0 / (t * t);
  double term = inv_t2;
  double sum = term;
  for (int k = 2; k < 60; ++k) {
    const double next = -term * (2.0 * k - 1.0) * inv_t2;
    if (std::abs(next) >= std::abs(term)) break;  // asymptotic series diverges
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return -0.5 * t * t - kHalfLog2Pi + std::log(sum);
}

double acq_value(const AcquisitionSpec& spec, double mu, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "acq_value: sigma < 0");
  switch (spec.kind) {
    case AcquisitionKind::UCB:
      return mu + spec.ucb_lambda * sigma;
    case AcquisitionKind::EI: {
      const double diff = mu - spec.incumbent;
      if (sigma == 0.0) return std::max(diff, 0.0);
      const double g = diff / sigma;
      // g Phi(g) + phi(g) > 0, but rounding in the lower tail can flip the sign.
      return std::max(0.0, sigma * (g * normal_cdf(g) + normal_pdf(g)));
    }
    case AcquisitionKind::LogEI: {
      const double diff = mu - spec.incumbent;
      if (sigma == 0.0) return diff > 0.0 ? std::log(diff) : kLogZero;
      return std::log(sigma) + log_h(diff / sigma);
    }
    case AcquisitionKind::Thompson:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "acq_value: Thompson sampling has no closed form");
}

// ---------------------------------------------------------------------------

namespace {

struct Scored {
  Vector x;
  double value;
};

Scored refine(const std::function<double(const Vector&)>& f, Vector x, double fx,
              const AcquisitionBudget& budget) {
  const auto d = x.size();
  double step = 0.25;
  Vector g(d);
  for (int it = 0; it < budget.num_steps; ++it) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double xi = x[i];
      const double hi = std::min(xi + budget.fd_step, 1.0);
      const double lo = std::max(xi - budget.fd_step, -1.0);
      x[i] = hi;
      const double fh = f(x);
      x[i] = lo;
      const double fl = f(x);
      x[i] = xi;
      g[i] = (fh - fl) / (hi - lo);
      if (!std::isfinite(g[i])) g[i] = 0.0;
      // Drop components pushing against an active bound.
      if ((xi >= 1.0 && g[i] > 0.0) || (xi <= -1.0 && g[i] < 0.0)) g[i] = 0.0;
    }
    const double gmax = g.lpNorm<Eigen::Infinity>();
    if (gmax == 0.0) break;
    const Vector direction = g / gmax;
    bool moved = false;
    while (step > 1e-10) {
      Vector candidate = (x + step * direction).cwiseMax(-1.0).cwiseMin(1.0);
      const double fc = f(candidate);
      if (fc > fx) {
        x = std::move(candidate);
        fx = fc;
        moved = true;
        step = std::min(2.0 * step, 1.0);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {std::move(x), fx};
}

}  // namespace

CandidateResult maximize_over_box(const std::function<double(const Vector&)>& f, int dim,
                                  RandomStream& rng, const AcquisitionBudget& budget) {
  if (budget.num_candidates < 1 || budget.num_refine < 1) {
    throw Error(ErrorKind::InvalidArgument, "maximize: empty budget");
  }
  SobolStream sobol(dim, rng.next_u64());
  std::vector<Scored> candidates;
  candidates.reserve(static_cast<std::size_t>(budget.num_candidates));
  for (int i = 0; i < budget.num_candidates; ++i) {
    Vector x = sobol.next_centered();
    double v = f(x);
    if (!std::isfinite(v)) v = -std::numeric_limits<double>::infinity();
    candidates.push_back({std::move(x), v});
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].value > candidates[b].value;
  });
  const auto n_refine = std::min<std::size_t>(static_cast<std::size_t>(budget.num_refine),
                                              order.size());
  Scored best{candidates[order[0]].x, candidates[order[0]].value};
  for (std::size_t r = 0; r < n_refine; ++r) {
    const Scored& start = candidates[order[r]];
    if (!std::isfinite(start.value)) break;
    Scored refined = refine(f, start.x, start.value, budget);
    if (refined.value > best.value) best = std::move(refined);
  }
  const double bf = boundary_fraction(best.x);
  return {std::move(best.x), best.value, bf};
}

// ---------------------------------------------------------------------------

ThompsonSample::ThompsonSample(KernelSpec spec, Vector weights, OutputTransform transform)
    : spec_(std::move(spec)), weights_(std::move(weights)), transform_(transform) {}

double ThompsonSample::operator()(const Eigen::Ref<const Vector>& x) const {
  return weights_.dot(feature_map(spec_, x)) * transform_.scale + transform_.offset;
}

ThompsonSample thompson_draw(const WeightPosterior& posterior, RandomStream& rng) {
  std::vector<Vector> draw = sample_weights(posterior, rng, 1);
  return ThompsonSample(posterior.spec(), std::move(draw.front()), posterior.transform());
}

ThompsonSample thompson_draw(const Posterior& posterior, RandomStream& rng) {
  if (const auto* w = std::get_if<WeightPosterior>(&posterior)) return thompson_draw(*w, rng);
  throw Error(ErrorKind::UnsupportedForFunctionSpace,
              "exact Thompson sampling needs a weight-space posterior");
}

CandidateResult maximize_acq(const Posterior& posterior, const AcquisitionSpec& spec,
                             RandomStream& rng, const AcquisitionBudget& budget) {
  spec.validate();
  const int dim = std::visit([](const auto& p) { return p.spec().input_dim(); }, posterior);
  if (spec.kind == AcquisitionKind::Thompson) {
    const ThompsonSample sample = thompson_draw(posterior, rng);
    return maximize_over_box([&](const Vector& x) { return sample(x); }, dim, rng, budget);
  }
  const auto objective = [&](const Vector& x) {
    const Prediction p = predict(posterior, x);
    return acq_value(spec, p.mean, p.stddev);
  };
  return maximize_over_box(objective, dim, rng, budget);
}

// ---------------------------------------------------------------------------

double BoundaryTheoremReport::pass_rate() const {
  return trials.empty() ? 0.0 : static_cast<double>(passes) / static_cast<double>(trials.size());
}

double BoundaryTheoremReport::min_sup_norm() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& t : trials) m = std::min(m, t.sup_norm);
  return m;
}

BoundaryTheoremReport verify_boundary_theorem(AcquisitionKind kind, int dim, int trials,
                                              bool intercept, RandomStream& rng,
                                              const AcquisitionBudget& budget) {
  if (kind != AcquisitionKind::EI && kind != AcquisitionKind::UCB) {
    throw Error(ErrorKind::InvalidArgument, "boundary theorem check covers EI and UCB");
  }
  BoundaryTheoremReport report;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * dim + 4)));
    Matrix x(n, dim);
    for (int i = 0; i < n; ++i) x.row(i) = rng.uniform_vector(dim, -1.0, 1.0).transpose();
    const Vector slope = rng.normal_vector(dim);
    Vector y = x * slope;
    for (int i = 0; i < n; ++i) y[i] += 0.5 * rng.normal();

    KernelSpec spec = KernelSpec::standard_linear(dim);
    SurrogateHyperparams hp = SurrogateHyperparams::initial(spec, HyperpriorKind::PlainLogNormal);
    hp.scaling.global_lengthscale = std::exp(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < dim; ++i) hp.scaling.ard_lengthscales[i] = std::exp(rng.uniform(-1.0, 1.0));
    hp.raw_coefficients = Vector::Zero(2);
    hp.raw_coefficients[1] = rng.uniform(-2.0, 2.0);
    if (!intercept) hp.raw_coefficients[0] = -std::numeric_limits<double>::infinity();
    hp.noise_variance = std::exp(rng.uniform(std::log(1e-3), std::log(1e-1)));
    const Posterior posterior = fit_weight_space(x, y, hp, spec);

    AcquisitionSpec acq{kind, 0.0, y.maxCoeff()};
    if (kind == AcquisitionKind::UCB) acq.ucb_lambda = rng.uniform(0.0, 3.0);
    const CandidateResult best = maximize_acq(posterior, acq, rng, budget);
    const double sup = best.point.lpNorm<Eigen::Infinity>();
    const bool ok = sup >= 1.0 - kBoundaryTheoremTolerance;
    report.trials.push_back({dim, intercept, sup, ok});
    if (ok) ++report.passes;
  }
  return report;
}

}  // namespace spherebo
