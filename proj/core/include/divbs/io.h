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

// Feature file formats and small output writers.
//
// Binary layout (all integers little-endian):
//   offset  0  8 bytes   magic "DIVBSFM1"
//   offset  8  uint64    n_rows
//   offset 16  uint64    dim
//   offset 24  uint8     has_labels (0 or 1)
//   offset 25  n_rows*dim IEEE-754 binary64, row-major
//   then, if has_labels, n_rows int32 labels
//
// CSV: one row per sample. An optional header line (any non-numeric token)
// names the columns; a final header token `label` marks an int32 label column.

#ifndef DIVBS_IO_H_
#define DIVBS_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divbs/linalg.h"

namespace divbs::io {

inline constexpr std::string_view kBinaryMagic = "DIVBSFM1";
inline constexpr std::size_t kBinaryHeaderSize = 25;

enum class FeatureFormat { kBinary, kCsv };

// ".csv" (any case) selects CSV; everything else is binary.
FeatureFormat FormatForPath(const std::filesystem::path& path);

std::uint64_t BinaryFileSize(std::uint64_t n_rows, std::uint64_t dim, bool has_labels);

std::string EncodeBinary(const FeatureMatrix& matrix);
// Throws LoadError with a byte offset.
FeatureMatrix DecodeBinary(std::string_view bytes);

// Values use the shortest decimal form that round-trips exactly.
std::string EncodeCsv(const FeatureMatrix& matrix);
// Throws LoadError with a 1-based line number.
FeatureMatrix DecodeCsv(std::string_view text);

FeatureMatrix ReadFeatures(const std::filesystem::path& path);
void WriteFeatures(const FeatureMatrix& matrix, const std::filesystem::path& path);

// A binary feature file with dim 1, or text holding one number per token
// (comma/whitespace separated; a non-numeric first line is a header).
std::vector<double> ReadScores(const std::filesystem::path& path);

std::string ReadFileBytes(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

// Shortest round-trip decimal rendering of a double.
std::string FormatDouble(double value);

// Scatter of 2-D labelled points: CSV with columns x,y,label,selected.
std::string ScatterCsv(const FeatureMatrix& points, std::span<const std::size_t> selected);
std::string ScatterSvg(const FeatureMatrix& points, std::span<const std::size_t> selected,
                       std::string_view title = "");

// Value of DIVBS_EPS if set. Throws ContractViolation when it does not parse
// as a finite nonnegative number.
std::optional<double> EpsFromEnvironment();

}  // namespace divbs::io

#endif  // DIVBS_IO_H_
