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

// Dense vector primitives and an incrementally grown orthonormal basis.
//
// All reductions run in ascending index order so that results are
// bit-reproducible for identical inputs.

#ifndef DIVBS_LINALG_H_
#define DIVBS_LINALG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace divbs {

using Vector = std::vector<double>;

inline constexpr double kDefaultEps = 1e-10;

// N x D row-major matrix of per-sample selection features, with optional
// integer group labels per row. Every value is finite.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t n_rows, std::size_t dim, std::vector<double> values,
                std::optional<std::vector<std::int32_t>> row_labels = std::nullopt);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const { return values_; }

  bool has_labels() const { return labels_.has_value(); }
  const std::optional<std::vector<std::int32_t>>& row_labels() const {
    return labels_;
  }

  // Copy with every value multiplied by `factor` (labels preserved).
  FeatureMatrix Scaled(double factor) const;
  // Copy with every nonzero row divided by its Euclidean norm.
  FeatureMatrix RowNormalized() const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t n_rows_;
  std::size_t dim_;
  std::vector<double> values_;
  std::optional<std::vector<std::int32_t>> labels_;
};

// Inner product, summed in ascending index order. Throws ContractViolation on
// length mismatch.
double Dot(std::span<const double> a, std::span<const double> b);

double Norm(std::span<const double> v);

// out[d] = Dot(features.row(d), v) for every row, bitwise identical to calling
// Dot row by row. Rows are processed in interleaved blocks so independent
// accumulators overlap.
Vector RowDots(const FeatureMatrix& features, std::span<const double> v);

// Column-wise sum over all rows, rows added in ascending order.
Vector BatchSum(const FeatureMatrix& features);

// y -= alpha * x
void SubtractScaled(std::span<double> y, double alpha, std::span<const double> x);

// True when a residual of norm `residual_norm` left over from a vector of norm
// `source_norm` counts as linearly dependent: residual <= eps * max(1, source).
bool IsDependent(double residual_norm, double source_norm, double eps);

class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(std::size_t dim, double eps = kDefaultEps);

  std::size_t dim() const { return dim_; }
  double eps() const { return eps_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  std::span<const double> vector(std::size_t i) const { return vectors_[i]; }

  // v minus its projections onto the basis, removed one basis vector at a time
  // in basis order (modified Gram-Schmidt).
  Vector Residual(std::span<const double> v) const;

  // Appends and returns the normalized residual of v, or returns nothing and
  // leaves the basis untouched when v is dependent under eps.
  std::optional<Vector> Extend(std::span<const double> v);

  // Appends an already orthonormalized vector without checks. Used by callers
  // that computed the residual themselves through the same sequence of
  // operations as Residual().
  void AppendUnchecked(Vector unit);

 private:
  std::size_t dim_;
  double eps_;
  std::vector<Vector> vectors_;
};

// Free-function spellings of the basis operations.
Vector Residual(std::span<const double> v, const OrthonormalBasis& basis);
std::optional<Vector> ExtendBasis(OrthonormalBasis& basis, std::span<const double> v);

}  // namespace divbs

#endif  // DIVBS_LINALG_H_
