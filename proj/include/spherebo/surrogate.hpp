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

#include <optional>
#include <variant>
#include <vector>

#include "spherebo/hyperprior.hpp"
#include "spherebo/kernels.hpp"
#include "spherebo/numerics.hpp"
#include "spherebo/rng.hpp"

namespace spherebo {

/// Learnable surrogate parameters. They overwrite the matching fields of a
/// KernelSpec at fit time (see apply_hyperparams()).
struct SurrogateHyperparams {
  ScalingConfig scaling;
  Vector raw_coefficients;
  double noise_variance = 0.0183156388887342;  // exp(-4)
  HyperpriorKind hyperprior = HyperpriorKind::PlainLogNormal;
  /// One lengthscale per dimension when true, a single shared one otherwise.
  bool ard_enabled = true;
  bool learn_global_lengthscale = false;

  /// Starting point for `spec`: its scaling, w = 0 and the noise prior's
  /// median. When the global lengthscale is 1 (no decoupling) the
  /// lengthscales start at the hyperprior mode, otherwise at 1.
  static SurrogateHyperparams initial(const KernelSpec& spec, HyperpriorKind prior);
};

KernelSpec apply_hyperparams(const KernelSpec& spec, const SurrogateHyperparams& hp);

/// y-standardization constants: y_std = (y - offset) / scale.
struct OutputTransform {
  double offset = 0.0;
  double scale = 1.0;

  /// Zero mean, unit (population) variance; the variance is floored at 1e-12.
  static OutputTransform fit(const Eigen::Ref<const Vector>& y);
  Vector apply(const Eigen::Ref<const Vector>& y) const;
};

inline constexpr double kTargetVarianceFloor = 1e-12;

struct Prediction {
  double mean = 0.0;
  /// Predictive standard deviation, observation noise included.
  double stddev = 0.0;
};

/// Gaussian posterior over the weights of f(x) = theta^T phi(x) under the
/// prior theta ~ N(0, I); the sqrt(b_i) scalings inside phi carry the prior
/// variances. Quantities are in standardized output space until predict().
class WeightPosterior {
 public:
  WeightPosterior(KernelSpec spec, Vector mean, Matrix covariance_factor,
                  double noise_variance, OutputTransform transform);

  const KernelSpec& spec() const { return spec_; }
  const Vector& mean() const { return mean_; }
  /// Upper-triangular C with posterior covariance S = C C^T.
  const Matrix& covariance_factor() const { return covariance_factor_; }
  Matrix covariance() const;
  double noise_variance() const { return noise_variance_; }
  const OutputTransform& transform() const { return transform_; }
  Eigen::Index feature_dim() const { return mean_.size(); }

  Prediction predict(const Eigen::Ref<const Vector>& x) const;

  /// Standardized-space latent mean and variance at a feature vector.
  double latent_mean(const Eigen::Ref<const Vector>& phi) const;
  double latent_variance(const Eigen::Ref<const Vector>& phi) const;

 private:
  KernelSpec spec_;
  Vector mean_;
  Matrix covariance_factor_;
  double noise_variance_;
  OutputTransform transform_;
};

/// Exact GP posterior with constant prior mean (the training mean).
class FunctionPosterior {
 public:
  FunctionPosterior(KernelSpec spec, Matrix inputs, CholeskyFactor factor,
                    Vector alpha, double noise_variance, OutputTransform transform);

  const KernelSpec& spec() const { return spec_; }
  const Matrix& inputs() const { return inputs_; }
  const CholeskyFactor& factor() const { return factor_; }
  const Vector& alpha() const { return alpha_; }
  double noise_variance() const { return noise_variance_; }
  const OutputTransform& transform() const { return transform_; }

  Prediction predict(const Eigen::Ref<const Vector>& x) const;

  /// Standardized-space latent mean and variance.
  std::pair<double, double> latent(const Eigen::Ref<const Vector>& x) const;

 private:
  KernelSpec spec_;
  Matrix inputs_;
  Matrix embeddings_;
  CholeskyFactor factor_;
  Vector alpha_;
  double noise_variance_;
  OutputTransform transform_;
  Vector coefficients_;
};

using Posterior = std::variant<WeightPosterior, FunctionPosterior>;

/// Largest explicit feature dimension used for weight-space inference.
inline constexpr std::size_t kMaxWeightSpaceFeatures = 4096;

/// Whether fit_posterior() would use weight-space inference for `spec`.
bool uses_weight_space(const KernelSpec& spec);

/// Bayesian linear regression on explicit features, O(n F^2 + F^3). X is
/// n x D (n may be 0, giving the prior). Throws RankTooLargeToMaterialize
/// for infinite-rank or oversized feature maps.
WeightPosterior fit_weight_space(const Eigen::Ref<const Matrix>& x,
                                 const Eigen::Ref<const Vector>& y,
                                 const SurrogateHyperparams& hp, const KernelSpec& spec);

/// Exact GP regression via Cholesky of K + noise I, O(n^3).
FunctionPosterior fit_function_space(const Eigen::Ref<const Matrix>& x,
                                     const Eigen::Ref<const Vector>& y,
                                     const SurrogateHyperparams& hp,
                                     const KernelSpec& spec);

/// Weight space when possible, function space otherwise.
Posterior fit_posterior(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                        const SurrogateHyperparams& hp, const KernelSpec& spec);

Prediction predict(const Posterior& posterior, const Eigen::Ref<const Vector>& x);

enum class InferencePath { Automatic, WeightSpace, FunctionSpace };

struct EvidenceResult {
  double log_evidence = 0.0;
  double jitter = 0.0;
};

/// Log marginal likelihood of the standardized targets.
EvidenceResult log_marginal_likelihood_detail(const Eigen::Ref<const Matrix>& x,
                                              const Eigen::Ref<const Vector>& y,
                                              const SurrogateHyperparams& hp,
                                              const KernelSpec& spec,
                                              InferencePath path = InferencePath::Automatic);

double log_marginal_likelihood(const Eigen::Ref<const Matrix>& x,
                               const Eigen::Ref<const Vector>& y,
                               const SurrogateHyperparams& hp, const KernelSpec& spec,
                               InferencePath path = InferencePath::Automatic);

/// Log hyperprior density of the lengthscales and the noise variance.
double log_hyperprior(const SurrogateHyperparams& hp);

struct HyperfitOptions {
  int num_starts = 4;
  int max_iterations = 200;
  double fd_step = 1e-4;
  double tolerance = 1e-7;
};

struct HyperfitResult {
  SurrogateHyperparams hyperparams;
  double objective = 0.0;
  bool diverged = false;
};

/// MAP hyperparameters: maximizes evidence plus log hyperprior over the
/// log-parameters by multi-start L-BFGS ascent with central-difference
/// gradients and a backtracking line search. Starts are hp0 plus
/// (num_starts - 1) hyperprior draws. Returns hp0 when every start is
/// non-finite.
HyperfitResult fit_hyperparams_detail(const Eigen::Ref<const Matrix>& x,
                                      const Eigen::Ref<const Vector>& y,
                                      const SurrogateHyperparams& hp0, const KernelSpec& spec,
                                      RandomStream& rng, const HyperfitOptions& options = {});

SurrogateHyperparams fit_hyperparams(const Eigen::Ref<const Matrix>& x,
                                     const Eigen::Ref<const Vector>& y,
                                     const SurrogateHyperparams& hp0, const KernelSpec& spec,
                                     RandomStream& rng, const HyperfitOptions& options = {});

/// i.i.d. exact draws theta ~ N(mean, C C^T).
std::vector<Vector> sample_weights(const WeightPosterior& posterior, RandomStream& rng,
                                   int count);

}  // namespace spherebo
