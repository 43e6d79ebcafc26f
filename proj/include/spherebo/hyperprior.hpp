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

#include <string_view>

#include "spherebo/rng.hpp"

namespace spherebo {

enum class HyperpriorKind {
  GammaPrior,     // l ~ Gamma(shape 3, rate 6)
  DSPLogNormal,   // l ~ LN(sqrt(2) + log(D)/2, sqrt(3))
  PlainLogNormal, // l ~ LN(sqrt(2), sqrt(3))
};

std::string_view to_string(HyperpriorKind kind);
HyperpriorKind parse_hyperprior(std::string_view name);

/// Lengthscale hyperprior for a D-dimensional problem. Log-normal
/// parameters are the mean and standard deviation of log l.
class Hyperprior {
 public:
  Hyperprior(HyperpriorKind kind, int dim);

  HyperpriorKind kind() const { return kind_; }

  double log_density(double lengthscale) const;
  double sample(RandomStream& rng) const;
  double mode() const;

  /// Quantile function; exact for the log-normals, bisection on the CDF for
  /// the gamma.
  double quantile(double p) const;

 private:
  double cdf(double lengthscale) const;

  HyperpriorKind kind_;
  double log_mu_ = 0.0;
  double log_sigma_ = 0.0;
};

/// Log-normal density with log-mean mu and log-std sigma.
double lognormal_log_density(double x, double mu, double sigma);

/// Hyperprior on the observation noise variance: LN(-4, 1).
inline constexpr double kNoiseLogMean = -4.0;
inline constexpr double kNoiseLogStd = 1.0;
inline constexpr double kMinNoiseVariance = 1e-6;

}  // namespace spherebo
