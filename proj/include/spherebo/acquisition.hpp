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

#include <functional>
#include <string_view>
#include <vector>

#include "spherebo/rng.hpp"
#include "spherebo/surrogate.hpp"

namespace spherebo {

enum class AcquisitionKind { EI, LogEI, UCB, Thompson };

std::string_view to_string(AcquisitionKind kind);
AcquisitionKind parse_acquisition(std::string_view name);

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::LogEI;
  /// Exploration weight for UCB.
  double ucb_lambda = 0.0;
  /// Best observed value (EI, LogEI).
  double incumbent = 0.0;

  void validate() const;
};

/// Stand-in for log(0) returned by LogEI when sigma = 0 and mu <= incumbent.
inline constexpr double kLogZero = -1e300;

/// Where LogEI switches to the Mills-ratio asymptotic expansion.
inline constexpr double kLogEiTailSwitch = -8.0;

double normal_pdf(double x);
double normal_cdf(double x);

/// Closed-form EI, LogEI or UCB from the predictive mean and standard
/// deviation. Throws InvalidArgument for Thompson (which has no closed form)
/// and for negative sigma.
double acq_value(const AcquisitionSpec& spec, double mu, double sigma);

/// log(gamma Phi(gamma) + phi(gamma)), accurate far into the lower tail.
double log_h(double gamma);

struct AcquisitionBudget {
  int num_candidates = 512;
  int num_refine = 10;
  int num_steps = 100;
  /// Central-difference step for the numeric gradient.
  double fd_step = 1e-6;
};

struct CandidateResult {
  Vector point;
  double value = 0.0;
  double boundary_fraction = 0.0;
};

/// Maximizes `f` over [-1,1]^D: scores a scrambled Sobol batch, then refines
/// the best few by projected ascent with numeric gradients and step halving.
/// Ties go to the lowest candidate index.
CandidateResult maximize_over_box(const std::function<double(const Vector&)>& f, int dim,
                                  RandomStream& rng, const AcquisitionBudget& budget = {});

/// Exact posterior function draw f(x) = theta^T phi(x), in output units.
class ThompsonSample {
 public:
  ThompsonSample(KernelSpec spec, Vector weights, OutputTransform transform);

  double operator()(const Eigen::Ref<const Vector>& x) const;
  const Vector& weights() const { return weights_; }

 private:
  KernelSpec spec_;
  Vector weights_;
  OutputTransform transform_;
};

ThompsonSample thompson_draw(const WeightPosterior& posterior, RandomStream& rng);

/// Throws UnsupportedForFunctionSpace for function-space posteriors.
ThompsonSample thompson_draw(const Posterior& posterior, RandomStream& rng);

/// argmax of the acquisition over [-1,1]^D; Thompson maximizes one exact draw.
CandidateResult maximize_acq(const Posterior& posterior, const AcquisitionSpec& spec,
                             RandomStream& rng, const AcquisitionBudget& budget = {});

struct BoundaryTrial {
  int dim = 0;
  bool intercept = false;
  double sup_norm = 0.0;
  bool passed = false;
};

struct BoundaryTheoremReport {
  std::vector<BoundaryTrial> trials;
  int passes = 0;
  double pass_rate() const;
  double min_sup_norm() const;
};

inline constexpr double kBoundaryTheoremTolerance = 1e-4;

/// For random standard-linear posteriors (random data, lengthscales and
/// noise), checks that the acquisition maximizer has ||x||_inf >= 1 - 1e-4.
/// `kind` must be EI or UCB; UCB draws lambda uniformly from [0, 3].
BoundaryTheoremReport verify_boundary_theorem(AcquisitionKind kind, int dim, int trials,
                                              bool intercept, RandomStream& rng,
                                              const AcquisitionBudget& budget = {1024, 20, 200});

}  // namespace spherebo
