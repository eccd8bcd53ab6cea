// Copyright 2026 The DivBS Authors
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

#include "divbs/linalg.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "divbs/error.h"

namespace divbs {

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::size_t dim,
                             std::vector<double> values,
                             std::optional<std::vector<std::int32_t>> row_labels)
    : n_rows_(n_rows), dim_(dim), values_(std::move(values)), labels_(std::move(row_labels)) {
  if (n_rows_ == 0 || dim_ == 0) {
    throw ContractViolation("FeatureMatrix: n_rows and dim must be at least 1");
  }
  if (values_.size() != n_rows_ * dim_) {
    throw ContractViolation("FeatureMatrix: expected " + std::to_string(n_rows_ * dim_) +
                            " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ContractViolation("FeatureMatrix: non-finite value at row " +
                              std::to_string(i / dim_) + ", column " +
                              std::to_string(i % dim_));
    }
  }
  if (labels_ && labels_->size() != n_rows_) {
    throw ContractViolation("FeatureMatrix: row_labels has length " +
                            std::to_string(labels_->size()) + ", expected " +
                            std::to_string(n_rows_));
  }
}

FeatureMatrix FeatureMatrix::Scaled(double factor) const {
  std::vector<double> scaled(values_);
  for (double& x : scaled) x *= factor;
  return FeatureMatrix(n_rows_, dim_, std::move(scaled), labels_);
}

FeatureMatrix FeatureMatrix::RowNormalized() const {
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    std::span<double> r(out.data() + i * dim_, dim_);
    const double n = Norm(r);
    if (n > 0.0) {
      for (double& x : r) x /= n;
    }
  }
  return FeatureMatrix(n_rows_, dim_, std::move(out), labels_);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractViolation("Dot: length mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

Vector RowDots(const FeatureMatrix& features, std::span<const double> v) {
  const std::size_t n = features.n_rows();
  const std::size_t dim = features.dim();
  if (v.size() != dim) {
    throw ContractViolation("RowDots: vector length " + std::to_string(v.size()) +
                            " does not match feature dim " + std::to_string(dim));
  }
  constexpr std::size_t kBlock = 8;
  Vector out(n, 0.0);
  const double* base = features.values().data();
  std::size_t d = 0;
  for (; d + kBlock <= n; d += kBlock) {
    std::array<double, kBlock> acc{};
    const double* rows = base + d * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      const double vj = v[j];
      for (std::size_t b = 0; b < kBlock; ++b) acc[b] += rows[b * dim + j] * vj;
    }
    std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
  }
  for (; d < n; ++d) out[d] = Dot(features.row(d), v);
  return out;
}

Vector BatchSum(const FeatureMatrix& features) {
  Vector sum(features.dim(), 0.0);
  for (std::size_t i = 0; i < features.n_rows(); ++i) {
    const auto r = features.row(i);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += r[j];
  }
  return sum;
}

void SubtractScaled(std::span<double> y, double alpha, std::span<const double> x) {
  if (y.size() != x.size()) {
    throw ContractViolation("SubtractScaled: length mismatch");
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= alpha * x[i];
}

bool IsDependent(double residual_norm, double source_norm, double eps) {
  return residual_norm <= eps * std::max(1.0, source_norm);
}

OrthonormalBasis::OrthonormalBasis(std::size_t dim, double eps) : dim_(dim), eps_(eps) {
  if (dim_ == 0) throw ContractViolation("OrthonormalBasis: dim must be at least 1");
  if (!(eps_ >= 0.0) || !std::isfinite(eps_)) {
    throw ContractViolation("OrthonormalBasis: eps must be finite and nonnegative");
  }
}

Vector OrthonormalBasis::Residual(std::span<const double> v) const {
  if (v.size() != dim_) {
    throw ContractViolation("Residual: vector length " + std::to_string(v.size()) +
                            " does not match basis dim " + std::to_string(dim_));
  }
  Vector res(v.begin(), v.end());
  for (const Vector& e : vectors_) SubtractScaled(res, Dot(e, res), e);
  return res;
}

std::optional<Vector> OrthonormalBasis::Extend(std::span<const double> v) {
  Vector res = Residual(v);
  if (vectors_.size() >= dim_) return std::nullopt;
  const double res_norm = Norm(res);
  if (IsDependent(res_norm, Norm(v), eps_)) return std::nullopt;
  for (double& x : res) x /= res_norm;
  vectors_.push_back(res);
  return res;
}

void OrthonormalBasis::AppendUnchecked(Vector unit) {
  if (unit.size() != dim_) throw ContractViolation("AppendUnchecked: dim mismatch");
  if (vectors_.size() >= dim_) throw ContractViolation("AppendUnchecked: basis is full");
  vectors_.push_back(std::move(unit));
}

Vector Residual(std::span<const double> v, const OrthonormalBasis& basis) {
  return basis.Residual(v);
}

std::optional<Vector> ExtendBasis(OrthonormalBasis& basis, std::span<const double> v) {
  return basis.Extend(v);
}

}  // namespace divbs
