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

#include "spherebo/surrogate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "spherebo/errors.hpp"

namespace spherebo {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_training_data(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                         const KernelSpec& spec) {
  if (x.rows() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("fit: {} inputs but {} targets", x.rows(), y.size()));
  }
  if (x.rows() > 0 && x.cols() != spec.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("fit: inputs have {} columns, kernel expects {}", x.cols(),
                            spec.input_dim()));
  }
  require_finite(x, "fit inputs");
  require_finite(y, "fit targets");
}

double noise_of(const SurrogateHyperparams& hp) {
  return std::max(hp.noise_variance, kMinNoiseVariance);
}

}  // namespace

SurrogateHyperparams SurrogateHyperparams::initial(const KernelSpec& spec,
                                                   HyperpriorKind prior) {
  SurrogateHyperparams hp;
  hp.scaling = spec.scaling;
  hp.hyperprior = prior;
  hp.raw_coefficients = Vector::Zero(spec.num_coefficients());
  for (Eigen::Index i = 0; i < spec.raw_coefficients.size() && i < hp.raw_coefficients.size();
       ++i) {
    // Keep pinned (-inf) coefficients pinned.
    if (std::isinf(spec.raw_coefficients[i])) hp.raw_coefficients[i] = spec.raw_coefficients[i];
  }
  const double start = spec.scaling.global_lengthscale == 1.0
                           ? Hyperprior(prior, spec.input_dim()).mode()
                           : 1.0;
  hp.scaling.ard_lengthscales.setConstant(start);
  return hp;
}

KernelSpec apply_hyperparams(const KernelSpec& spec, const SurrogateHyperparams& hp) {
  KernelSpec out = spec;
  out.scaling = hp.scaling;
  out.raw_coefficients = hp.raw_coefficients;
  out.validate();
  return out;
}

OutputTransform OutputTransform::fit(const Eigen::Ref<const Vector>& y) {
  if (y.size() == 0) return {};
  const double m = y.mean();
  const double var = (y.array() - m).square().mean();
  return {m, std::sqrt(std::max(var, kTargetVarianceFloor))};
}

Vector OutputTransform::apply(const Eigen::Ref<const Vector>& y) const {
  return ((y.array() - offset) / scale).matrix();
}

// ---------------------------------------------------------------------------
// WeightPosterior

WeightPosterior::WeightPosterior(KernelSpec spec, Vector mean, Matrix covariance_factor,
                                 double noise_variance, OutputTransform transform)
    : spec_(std::move(spec)),
      mean_(std::move(mean)),
      covariance_factor_(std::move(covariance_factor)),
      noise_variance_(noise_variance),
      transform_(transform) {
  if (covariance_factor_.rows() != mean_.size() || covariance_factor_.cols() != mean_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weight posterior: factor/mean size mismatch");
  }
}

Matrix WeightPosterior::covariance() const {
  const auto c = covariance_factor_.triangularView<Eigen::Upper>().toDenseMatrix();
  return c * c.transpose();
}

double WeightPosterior::latent_mean(const Eigen::Ref<const Vector>& phi) const {
  return mean_.dot(phi);
}

double WeightPosterior::latent_variance(const Eigen::Ref<const Vector>& phi) const {
  return (covariance_factor_.triangularView<Eigen::Upper>().transpose() * phi).squaredNorm();
}

Prediction WeightPosterior::predict(const Eigen::Ref<const Vector>& x) const {
  const Vector phi = feature_map(spec_, x);
  const double m = latent_mean(phi);
  const double v = latent_variance(phi) + noise_variance_;
  return {m * transform_.scale + transform_.offset, std::sqrt(v) * transform_.scale};
}

// ---------------------------------------------------------------------------
// FunctionPosterior

FunctionPosterior::FunctionPosterior(KernelSpec spec, Matrix inputs, CholeskyFactor factor,
                                     Vector alpha, double noise_variance,
                                     OutputTransform transform)
    : spec_(std::move(spec)),
      inputs_(std::move(inputs)),
      factor_(std::move(factor)),
      alpha_(std::move(alpha)),
      noise_variance_(noise_variance),
      transform_(transform) {
  embeddings_ = embed_rows(spec_, inputs_);
  coefficients_ = spec_.coefficients();
}

std::pair<double, double> FunctionPosterior::latent(const Eigen::Ref<const Vector>& x) const {
  const Vector e = embed(spec_, x);
  const double prior = kernel_from_embeddings(spec_, coefficients_, e, e);
  if (inputs_.rows() == 0) return {0.0, prior};
  Vector kstar(inputs_.rows());
  for (Eigen::Index i = 0; i < inputs_.rows(); ++i) {
    kstar[i] = kernel_from_embeddings(spec_, coefficients_, e, embeddings_.row(i).transpose());
  }
  const double m = kstar.dot(alpha_);
  const double v = prior - factor_.solve_lower(kstar).squaredNorm();
  return {m, std::max(v, 0.0)};
}

Prediction FunctionPosterior::predict(const Eigen::Ref<const Vector>& x) const {
  const auto [m, v] = latent(x);
  return {m * transform_.scale + transform_.offset,
          std::sqrt(v + noise_variance_) * transform_.scale};
}

// ---------------------------------------------------------------------------
// Fitting

bool uses_weight_space(const KernelSpec& spec) {
  if (!spec.finite_rank()) return false;
  try {
    return feature_dim(spec) <= kMaxWeightSpaceFeatures;
  } catch (const Error&) {
    return false;
  }
}

namespace {

struct WeightSpaceSystem {
  CholeskyFactor precision;  // A = I + Phi^T Phi / noise
  Vector mean;
  Vector ys;
  Vector b;  // Phi^T ys / noise
  OutputTransform transform;
};

WeightSpaceSystem solve_weight_space(const Eigen::Ref<const Matrix>& x,
                                     const Eigen::Ref<const Vector>& y, const KernelSpec& spec,
                                     double noise) {
  const auto f = static_cast<Eigen::Index>(feature_dim(spec));
  WeightSpaceSystem sys;
  sys.transform = OutputTransform::fit(y);
  sys.ys = sys.transform.apply(y);
  Matrix a = Matrix::Identity(f, f);
  sys.b = Vector::Zero(f);
  if (x.rows() > 0) {
    const Matrix phi = feature_rows(spec, x);
    a.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose(), 1.0 / noise);
    a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
    sys.b = phi.transpose() * sys.ys / noise;
  }
  sys.precision = cholesky(a);
  sys.mean = sys.precision.solve(sys.b);
  return sys;
}

struct FunctionSpaceSystem {
  CholeskyFactor factor;
  Vector alpha;
  Vector ys;
  OutputTransform transform;
};

FunctionSpaceSystem solve_function_space(const Eigen::Ref<const Matrix>& x,
                                         const Eigen::Ref<const Vector>& y,
                                         const KernelSpec& spec, double noise) {
  FunctionSpaceSystem sys;
  sys.transform = OutputTransform::fit(y);
  sys.ys = sys.transform.apply(y);
  Matrix k = gram(spec, x);
  k.diagonal().array() += noise;
  sys.factor = cholesky(k);
  sys.alpha = sys.factor.solve(sys.ys);
  return sys;
}

}  // namespace

WeightPosterior fit_weight_space(const Eigen::Ref<const Matrix>& x,
                                 const Eigen::Ref<const Vector>& y,
                                 const SurrogateHyperparams& hp, const KernelSpec& spec) {
  const KernelSpec s = apply_hyperparams(spec, hp);
  check_training_data(x, y, s);
  if (!s.finite_rank() || feature_dim(s) > kMaxWeightSpaceFeatures) {
    throw Error(ErrorKind::RankTooLargeToMaterialize,
                fmt::format("{} kernel is not materializable for weight-space inference",
                            to_string(s.family)));
  }
  const double noise = noise_of(hp);
  WeightSpaceSystem sys = solve_weight_space(x, y, s, noise);
  const auto f = sys.mean.size();
  // C = L^{-T}, so C C^T = (L L^T)^{-1}.
  Matrix linv = sys.precision.lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(f, f));
  return WeightPosterior(s, std::move(sys.mean), linv.transpose(), noise, sys.transform);
}

FunctionPosterior fit_function_space(const Eigen::Ref<const Matrix>& x,
                                     const Eigen::Ref<const Vector>& y,
                                     const SurrogateHyperparams& hp, const KernelSpec& spec) {
  const KernelSpec s = apply_hyperparams(spec, hp);
  check_training_data(x, y, s);
  const double noise = noise_of(hp);
  FunctionSpaceSystem sys = solve_function_space(x, y, s, noise);
  return FunctionPosterior(s, Matrix(x), std::move(sys.factor), std::move(sys.alpha), noise,
                           sys.transform);
}

Posterior fit_posterior(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                        const SurrogateHyperparams& hp, const KernelSpec& spec) {
  if (uses_weight_space(apply_hyperparams(spec, hp))) return fit_weight_space(x, y, hp, spec);
  return fit_function_space(x, y, hp, spec);
}

Prediction predict(const Posterior& posterior, const Eigen::Ref<const Vector>& x) {
  return std::visit([&](const auto& p) { return p.predict(x); }, posterior);
}

EvidenceResult log_marginal_likelihood_detail(const Eigen::Ref<const Matrix>& x,
                                              const Eigen::Ref<const Vector>& y,
                                              const SurrogateHyperparams& hp,
                                              const KernelSpec& spec, InferencePath path) {
  const KernelSpec s = apply_hyperparams(spec, hp);
  check_training_data(x, y, s);
  const double noise = noise_of(hp);
  const auto n = static_cast<double>(x.rows());
  if (path == InferencePath::Automatic) {
    path = uses_weight_space(s) ? InferencePath::WeightSpace : InferencePath::FunctionSpace;
  }
  if (path == InferencePath::WeightSpace) {
    // Matrix inversion lemma: y^T (K + s I)^{-1} y = y^T y / s - b^T A^{-1} b and
    // log|K + s I| = log|A| + n log s with A = I + Phi^T Phi / s, b = Phi^T y / s.
    const WeightSpaceSystem sys = solve_weight_space(x, y, s, noise);
    const double quad = sys.ys.squaredNorm() / noise - sys.b.dot(sys.mean);
    const double logdet = sys.precision.log_det() + n * std::log(noise);
    return {-0.5 * quad - 0.5 * logdet - 0.5 * n * kLog2Pi, sys.precision.jitter_used};
  }
  const FunctionSpaceSystem sys = solve_function_space(x, y, s, noise);
  return {-0.5 * sys.ys.dot(sys.alpha) - 0.5 * sys.factor.log_det() - 0.5 * n * kLog2Pi,
          sys.factor.jitter_used};
}

double log_marginal_likelihood(const Eigen::Ref<const Matrix>& x,
                               const Eigen::Ref<const Vector>& y,
                               const SurrogateHyperparams& hp, const KernelSpec& spec,
                               InferencePath path) {
  return log_marginal_likelihood_detail(x, y, hp, spec, path).log_evidence;
}

double log_hyperprior(const SurrogateHyperparams& hp) {
  const Hyperprior prior(hp.hyperprior, hp.scaling.dim());
  double total = 0.0;
  if (hp.ard_enabled) {
    for (Eigen::Index i = 0; i < hp.scaling.ard_lengthscales.size(); ++i) {
      total += prior.log_density(hp.scaling.ard_lengthscales[i]);
    }
  } else {
    total += prior.log_density(hp.scaling.ard_lengthscales[0]);
  }
  total += lognormal_log_density(hp.noise_variance, kNoiseLogMean, kNoiseLogStd);
  return total;
}

// ---------------------------------------------------------------------------
// Hyperparameter fitting

namespace {

constexpr double kLogLengthscaleMin = -6.907755278982137;  // log 1e-3
constexpr double kLogLengthscaleMax = 9.210340371976184;   // log 1e4
constexpr double kRawCoefficientBound = 15.0;
constexpr double kLogNoiseMin = -13.815510557964274;       // log 1e-6
constexpr double kLogNoiseMax = 2.302585092994046;         // log 10

// Maps hyperparameters to an unconstrained-ish vector:
// [log a]? , log l (D or 1), finite raw coefficients, log noise.
class ParamLayout {
 public:
  explicit ParamLayout(const SurrogateHyperparams& base) : base_(base) {
    for (Eigen::Index i = 0; i < base.raw_coefficients.size(); ++i) {
      if (std::isfinite(base.raw_coefficients[i])) free_coefficients_.push_back(i);
    }
    num_lengthscales_ = base.ard_enabled ? base.scaling.dim() : 1;
    size_ = (base.learn_global_lengthscale ? 1 : 0) + num_lengthscales_ +
            static_cast<int>(free_coefficients_.size()) + 1;
    lower_ = Vector(size_);
    upper_ = Vector(size_);
    int pos = 0;
    if (base.learn_global_lengthscale) {
      lower_[pos] = kLogLengthscaleMin;
      upper_[pos++] = kLogLengthscaleMax;
    }
    for (int i = 0; i < num_lengthscales_; ++i) {
      lower_[pos] = kLogLengthscaleMin;
      upper_[pos++] = kLogLengthscaleMax;
    }
    for (std::size_t i = 0; i < free_coefficients_.size(); ++i) {
      lower_[pos] = -kRawCoefficientBound;
      upper_[pos++] = kRawCoefficientBound;
    }
    lower_[pos] = kLogNoiseMin;
    upper_[pos] = kLogNoiseMax;
  }

  int size() const { return size_; }

  Vector pack(const SurrogateHyperparams& hp) const {
    Vector t(size_);
    int pos = 0;
    if (base_.learn_global_lengthscale) t[pos++] = std::log(hp.scaling.global_lengthscale);
    if (base_.ard_enabled) {
      for (int i = 0; i < num_lengthscales_; ++i) {
        t[pos++] = std::log(hp.scaling.ard_lengthscales[i]);
      }
    } else {
      t[pos++] = hp.scaling.ard_lengthscales.array().log().mean();
    }
    for (Eigen::Index idx : free_coefficients_) t[pos++] = hp.raw_coefficients[idx];
    t[pos] = std::log(std::max(hp.noise_variance, kMinNoiseVariance));
    return clamp(t);
  }

  SurrogateHyperparams unpack(const Vector& t) const {
    SurrogateHyperparams hp = base_;
    int pos = 0;
    if (base_.learn_global_lengthscale) hp.scaling.global_lengthscale = std::exp(t[pos++]);
    if (base_.ard_enabled) {
      for (int i = 0; i < num_lengthscales_; ++i) {
        hp.scaling.ard_lengthscales[i] = std::exp(t[pos++]);
      }
    } else {
      hp.scaling.ard_lengthscales.setConstant(std::exp(t[pos++]));
    }
    for (Eigen::Index idx : free_coefficients_) hp.raw_coefficients[idx] = t[pos++];
    hp.noise_variance = std::exp(t[pos]);
    return hp;
  }

  Vector clamp(const Vector& t) const { return t.cwiseMax(lower_).cwiseMin(upper_); }

 private:
  SurrogateHyperparams base_;
  std::vector<Eigen::Index> free_coefficients_;
  int num_lengthscales_ = 0;
  int size_ = 0;
  Vector lower_;
  Vector upper_;
};

class MapObjective {
 public:
  MapObjective(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
               const KernelSpec& spec, const ParamLayout& layout)
      : x_(x), y_(y), spec_(spec), layout_(layout) {}

  double operator()(const Vector& t) const {
    try {
      const SurrogateHyperparams hp = layout_.unpack(t);
      const double value = log_marginal_likelihood(x_, y_, hp, spec_) + log_hyperprior(hp);
      return std::isfinite(value) ? value : kNegInf;
    } catch (const Error&) {
      return kNegInf;
    }
  }

  Vector gradient(const Vector& t, double step) const {
    Vector g(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      Vector tp = t, tm = t;
      tp[i] += step;
      tm[i] -= step;
      g[i] = ((*this)(tp) - (*this)(tm)) / (2.0 * step);
    }
    return g;
  }

 private:
  const Eigen::Ref<const Matrix>& x_;
  const Eigen::Ref<const Vector>& y_;
  const KernelSpec& spec_;
  const ParamLayout& layout_;
};

struct AscentResult {
  Vector point;
  double value = kNegInf;
};

// L-BFGS on -objective with a projected backtracking (Armijo) line search.
AscentResult lbfgs_ascent(const MapObjective& objective, const ParamLayout& layout, Vector t,
                          const HyperfitOptions& options) {
  constexpr int kMemory = 8;
  t = layout.clamp(t);
  double f = -objective(t);
  if (!std::isfinite(f)) return {t, kNegInf};
  Vector g = -objective.gradient(t, options.fd_step);
  if (!g.allFinite()) return {t, -f};
  std::deque<std::pair<Vector, Vector>> memory;  // (s, y)
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-8) break;
    // Two-loop recursion for d = -H g.
    Vector q = g;
    std::vector<double> alphas(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
      const auto& [s, yv] = memory[k];
      alphas[k] = s.dot(q) / yv.dot(s);
      q -= alphas[k] * yv;
    }
    if (!memory.empty()) {
      const auto& [s, yv] = memory.back();
      q *= s.dot(yv) / yv.squaredNorm();
    } else {
      q /= std::max(1.0, g.lpNorm<Eigen::Infinity>());
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const auto& [s, yv] = memory[k];
      const double beta = yv.dot(q) / yv.dot(s);
      q += (alphas[k] - beta) * s;
    }
    Vector d = -q;
    if (!(d.dot(g) < 0.0)) {
      memory.clear();
      d = -g / std::max(1.0, g.lpNorm<Eigen::Infinity>());
    }
    double step = 1.0;
    bool accepted = false;
    Vector t_new;
    double f_new = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      t_new = layout.clamp(t + step * d);
      f_new = -objective(t_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * g.dot(t_new - t)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (memory.empty()) break;
      memory.clear();
      continue;
    }
    const Vector g_new = -objective.gradient(t_new, options.fd_step);
    const Vector s = t_new - t;
    const Vector yv = g_new - g;
    const double improvement = f - f_new;
    t = t_new;
    f = f_new;
    g = g_new;
    if (!g.allFinite()) break;
    if (s.dot(yv) > 1e-12) {
      memory.emplace_back(s, yv);
      if (memory.size() > kMemory) memory.pop_front();
    }
    if (improvement < options.tolerance * (1.0 + std::abs(f))) break;
  }
  return {t, -f};
}

}  // namespace

HyperfitResult fit_hyperparams_detail(const Eigen::Ref<const Matrix>& x,
                                      const Eigen::Ref<const Vector>& y,
                                      const SurrogateHyperparams& hp0, const KernelSpec& spec,
                                      RandomStream& rng, const HyperfitOptions& options) {
  if (x.rows() < 2) {
    throw Error(ErrorKind::InvalidArgument, "fit_hyperparams: need at least two observations");
  }
  const ParamLayout layout(hp0);
  const MapObjective objective(x, y, spec, layout);
  const Hyperprior prior(hp0.hyperprior, hp0.scaling.dim());

  std::vector<Vector> starts;
  starts.push_back(layout.pack(hp0));
  for (int s = 1; s < options.num_starts; ++s) {
    SurrogateHyperparams draw = hp0;
    if (hp0.ard_enabled) {
      for (Eigen::Index i = 0; i < draw.scaling.ard_lengthscales.size(); ++i) {
        draw.scaling.ard_lengthscales[i] = prior.sample(rng);
      }
    } else {
      draw.scaling.ard_lengthscales.setConstant(prior.sample(rng));
    }
    draw.noise_variance = std::exp(kNoiseLogMean + kNoiseLogStd * rng.normal());
    starts.push_back(layout.pack(draw));
  }

  AscentResult best;
  for (const Vector& start : starts) {
    AscentResult r = lbfgs_ascent(objective, layout, start, options);
    if (r.value > best.value) best = std::move(r);
  }
  if (!std::isfinite(best.value)) return {hp0, kNegInf, true};
  return {layout.unpack(best.point), best.value, false};
}

SurrogateHyperparams fit_hyperparams(const Eigen::Ref<const Matrix>& x,
                                     const Eigen::Ref<const Vector>& y,
                                     const SurrogateHyperparams& hp0, const KernelSpec& spec,
                                     RandomStream& rng, const HyperfitOptions& options) {
  return fit_hyperparams_detail(x, y, hp0, spec, rng, options).hyperparams;
}

std::vector<Vector> sample_weights(const WeightPosterior& posterior, RandomStream& rng,
                                   int count) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const auto c = posterior.covariance_factor().triangularView<Eigen::Upper>();
  for (int i = 0; i < count; ++i) {
    const Vector eps = rng.normal_vector(posterior.feature_dim());
    out.push_back(posterior.mean() + c * eps);
  }
  return out;
}

}  // namespace spherebo
