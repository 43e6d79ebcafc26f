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

#include "spherebo/kernels.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "spherebo/errors.hpp"

namespace spherebo {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::StandardLinear: return "StandardLinear";
    case KernelFamily::SphericalLinear: return "SphericalLinear";
    case KernelFamily::SphericalPoly: return "SphericalPoly";
    case KernelFamily::RBF: return "RBF";
    case KernelFamily::RBFOnSphere: return "RBFOnSphere";
  }
  return "SphericalLinear";
}

KernelFamily parse_kernel_family(std::string_view name) {
  for (auto f : {KernelFamily::StandardLinear, KernelFamily::SphericalLinear,
                 KernelFamily::SphericalPoly, KernelFamily::RBF,
                 KernelFamily::RBFOnSphere}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::InvalidConfig, fmt::format("unknown kernel family '{}'", name));
}

KernelSpec KernelSpec::standard_linear(int dim) {
  return KernelSpec{KernelFamily::StandardLinear, 1, Vector::Zero(2),
                    SphericalMapKind::None, ScalingConfig::dimension_scaled(dim)};
}

KernelSpec KernelSpec::spherical_linear(int dim, SphericalMapKind map) {
  return KernelSpec{KernelFamily::SphericalLinear, 1, Vector::Zero(2), map,
                    ScalingConfig::dimension_scaled(dim)};
}

KernelSpec KernelSpec::spherical_poly(int dim, int order) {
  return KernelSpec{KernelFamily::SphericalPoly, order, Vector::Zero(order + 1),
                    SphericalMapKind::InverseStereographic,
                    ScalingConfig::dimension_scaled(dim)};
}

KernelSpec KernelSpec::rbf(int dim) {
  return KernelSpec{KernelFamily::RBF, 1, Vector(0), SphericalMapKind::None,
                    ScalingConfig::dimension_scaled(dim)};
}

KernelSpec KernelSpec::rbf_on_sphere(int dim) {
  return KernelSpec{KernelFamily::RBFOnSphere, 1, Vector(0),
                    SphericalMapKind::InverseStereographic,
                    ScalingConfig::dimension_scaled(dim)};
}

int KernelSpec::num_coefficients() const {
  switch (family) {
    case KernelFamily::StandardLinear:
    case KernelFamily::SphericalLinear:
      return 2;
    case KernelFamily::SphericalPoly:
      return order + 1;
    case KernelFamily::RBF:
    case KernelFamily::RBFOnSphere:
      return 0;
  }
  return 0;
}

Vector KernelSpec::coefficients() const { return softmax(raw_coefficients); }

SphericalMap KernelSpec::map() const {
  if (family == KernelFamily::StandardLinear || family == KernelFamily::RBF) {
    return SphericalMap{SphericalMapKind::None, 1.0};
  }
  return SphericalMap::for_scaling(map_kind, scaling);
}

bool KernelSpec::finite_rank() const {
  return family == KernelFamily::StandardLinear ||
         family == KernelFamily::SphericalLinear ||
         family == KernelFamily::SphericalPoly;
}

void KernelSpec::validate() const {
  scaling.validate();
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "kernel: order must be >= 1");
  if (raw_coefficients.size() != num_coefficients()) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("kernel: {} expects {} raw coefficients, got {}",
                            to_string(family), num_coefficients(),
                            raw_coefficients.size()));
  }
}

Vector softmax(const Eigen::Ref<const Vector>& w) {
  if (w.size() == 0) return Vector(0);
  const double top = w.maxCoeff();
  if (!std::isfinite(top)) {
    throw Error(ErrorKind::InvalidArgument, "softmax: no finite coefficient");
  }
  // std::exp keeps exp(-inf) exactly zero; the vectorized path does not.
  Vector e(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) e[i] = std::exp(w[i] - top);
  return e / e.sum();
}

Vector embed(const KernelSpec& spec, const Eigen::Ref<const Vector>& x) {
  const Vector z = scale(to_model_coordinates(x, spec.scaling), spec.scaling);
  const SphericalMap map = spec.map();
  if (map.kind == SphericalMapKind::None) return z;
  return map_to_sphere(z, map);
}

Matrix embed_rows(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x) {
  const SphericalMap map = spec.map();
  const int out = map.output_dim(static_cast<int>(x.cols()));
  Matrix e(x.rows(), out);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    e.row(i) = embed(spec, x.row(i).transpose()).transpose();
  }
  return e;
}

double kernel_from_embeddings(const KernelSpec& spec, const Vector& b,
                              const Eigen::Ref<const Vector>& e1,
                              const Eigen::Ref<const Vector>& e2) {
  switch (spec.family) {
    case KernelFamily::StandardLinear:
    case KernelFamily::SphericalLinear:
      return b[0] + b[1] * e1.dot(e2);
    case KernelFamily::SphericalPoly: {
      const double s = e1.dot(e2);
      // Horner evaluation of sum_i b_i s^i.
      double acc = 0.0;
      for (Eigen::Index i = b.size() - 1; i >= 0; --i) acc = acc * s + b[i];
      return acc;
    }
    case KernelFamily::RBF:
    case KernelFamily::RBFOnSphere:
      return std::exp(-0.5 * (e1 - e2).squaredNorm());
  }
  return 0.0;
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& x2) {
  return kernel_from_embeddings(spec, spec.coefficients(), embed(spec, x),
                                embed(spec, x2));
}

Matrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& a,
            const Eigen::Ref<const Matrix>& b) {
  const Matrix ea = embed_rows(spec, a);
  const Matrix eb = embed_rows(spec, b);
  const Vector coef = spec.coefficients();
  switch (spec.family) {
    case KernelFamily::StandardLinear:
    case KernelFamily::SphericalLinear: {
      Matrix k = coef[1] * (ea * eb.transpose());
      k.array() += coef[0];
      return k;
    }
    case KernelFamily::SphericalPoly: {
      const Matrix s = ea * eb.transpose();
      Matrix k = Matrix::Constant(s.rows(), s.cols(), coef[coef.size() - 1]);
      for (Eigen::Index i = coef.size() - 2; i >= 0; --i) {
        k = (k.array() * s.array() + coef[i]).matrix();
      }
      return k;
    }
    case KernelFamily::RBF:
    case KernelFamily::RBFOnSphere: {
      const Vector na = ea.rowwise().squaredNorm();
      const Vector nb = eb.rowwise().squaredNorm();
      Matrix d2 = -2.0 * (ea * eb.transpose());
      d2.colwise() += na;
      d2.rowwise() += nb.transpose();
      return (-0.5 * d2.array().max(0.0)).exp().matrix();
    }
  }
  return Matrix();
}

Matrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x) {
  Matrix k = gram(spec, x, x);
  // Exact symmetry; the RBF diagonal is exactly one.
  k = 0.5 * (k + k.transpose()).eval();
  if (spec.family == KernelFamily::RBF || spec.family == KernelFamily::RBFOnSphere) {
    k.diagonal().setOnes();
  }
  return k;
}

namespace {

int embedding_dim(const KernelSpec& spec) {
  return spec.map().output_dim(spec.input_dim());
}

}  // namespace

std::size_t feature_dim(const KernelSpec& spec) {
  if (!spec.finite_rank()) {
    throw Error(ErrorKind::RankTooLargeToMaterialize,
                fmt::format("{} kernel has no finite feature map", to_string(spec.family)));
  }
  const double e = embedding_dim(spec);
  const int m = spec.family == KernelFamily::SphericalPoly ? spec.order : 1;
  if (m >= 2 && std::pow(e, m) > kMaxMaterializedRank) {
    throw Error(ErrorKind::RankTooLargeToMaterialize,
                fmt::format("order-{} features in {} dimensions exceed {:g}", m, e,
                            kMaxMaterializedRank));
  }
  std::size_t total = 1;
  std::size_t block = 1;
  for (int i = 1; i <= m; ++i) {
    block *= static_cast<std::size_t>(e);
    total += block;
  }
  return total;
}

Vector feature_map(const KernelSpec& spec, const Eigen::Ref<const Vector>& x) {
  const std::size_t f = feature_dim(spec);
  const Vector e = embed(spec, x);
  const Vector b = spec.coefficients();
  Vector out(static_cast<Eigen::Index>(f));
  out[0] = std::sqrt(b[0]);
  Eigen::Index pos = 1;
  Vector block = e;
  for (Eigen::Index i = 1; i < b.size(); ++i) {
    if (i > 1) {
      // block <- block (x) e
      Vector next(block.size() * e.size());
      for (Eigen::Index j = 0; j < block.size(); ++j) {
        next.segment(j * e.size(), e.size()) = block[j] * e;
      }
      block = std::move(next);
    }
    out.segment(pos, block.size()) = std::sqrt(b[i]) * block;
    pos += block.size();
  }
  return out;
}

Matrix feature_rows(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x) {
  const auto f = static_cast<Eigen::Index>(feature_dim(spec));
  Matrix phi(x.rows(), f);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    phi.row(i) = feature_map(spec, x.row(i).transpose()).transpose();
  }
  return phi;
}

double rbf_on_sphere_taylor(double s, int truncation) {
  double term = 1.0;  // s^i / i!
  double sum = 1.0;
  for (int i = 1; i <= truncation; ++i) {
    term *= s / i;
    sum += term;
  }
  return sum / std::numbers::e;
}

}  // namespace spherebo
