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

#include "spherebo/hyperprior.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "spherebo/errors.hpp"

namespace spherebo {
namespace {

constexpr double kGammaShape = 3.0;
constexpr double kGammaRate = 6.0;

// Regularized lower incomplete gamma P(3, x) in closed form.
double gamma3_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return 1.0 - std::exp(-x) * (1.0 + x + 0.5 * x * x);
}

}  // namespace

std::string_view to_string(HyperpriorKind kind) {
  switch (kind) {
    case HyperpriorKind::GammaPrior: return "Gamma";
    case HyperpriorKind::DSPLogNormal: return "DSPLogNormal";
    case HyperpriorKind::PlainLogNormal: return "PlainLogNormal";
  }
  return "PlainLogNormal";
}

HyperpriorKind parse_hyperprior(std::string_view name) {
  for (auto k : {HyperpriorKind::GammaPrior, HyperpriorKind::DSPLogNormal,
                 HyperpriorKind::PlainLogNormal}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidConfig, fmt::format("unknown hyperprior '{}'", name));
}

double lognormal_log_density(double x, double mu, double sigma) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  const double t = (std::log(x) - mu) / sigma;
  return -0.5 * t * t - std::log(x * sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

Hyperprior::Hyperprior(HyperpriorKind kind, int dim) : kind_(kind) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "hyperprior: dim must be >= 1");
  log_sigma_ = std::sqrt(3.0);
  log_mu_ = std::numbers::sqrt2;
  if (kind == HyperpriorKind::DSPLogNormal) log_mu_ += 0.5 * std::log(double(dim));
}

double Hyperprior::log_density(double l) const {
  if (kind_ == HyperpriorKind::GammaPrior) {
    if (!(l > 0.0)) return -std::numeric_limits<double>::infinity();
    return kGammaShape * std::log(kGammaRate) - std::lgamma(kGammaShape) +
           (kGammaShape - 1.0) * std::log(l) - kGammaRate * l;
  }
  return lognormal_log_density(l, log_mu_, log_sigma_);
}

double Hyperprior::sample(RandomStream& rng) const {
  if (kind_ == HyperpriorKind::GammaPrior) {
    // Integer shape: sum of three exponentials.
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      s -= std::log(u);
    }
    return s / kGammaRate;
  }
  return std::exp(log_mu_ + log_sigma_ * rng.normal());
}

double Hyperprior::mode() const {
  if (kind_ == HyperpriorKind::GammaPrior) return (kGammaShape - 1.0) / kGammaRate;
  return std::exp(log_mu_ - log_sigma_ * log_sigma_);
}

double Hyperprior::cdf(double l) const {
  if (kind_ == HyperpriorKind::GammaPrior) return gamma3_cdf(kGammaRate * l);
  if (!(l > 0.0)) return 0.0;
  return 0.5 * std::erfc(-(std::log(l) - log_mu_) / (log_sigma_ * std::numbers::sqrt2));
}

double Hyperprior::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "hyperprior quantile: p outside (0,1)");
  }
  // Bisection in log space; the CDF is continuous and strictly increasing.
  double lo = -60.0, hi = 60.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(std::exp(mid)) < p) lo = mid; else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace spherebo
