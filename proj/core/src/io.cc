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

#include "divbs/io.h"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <utility>

#include "divbs/error.h"

namespace divbs::io {
namespace {

using Kind = LoadError::LocationKind;

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t GetU64(std::string_view bytes, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[off + i])) << (8 * i);
  }
  return v;
}

std::uint32_t GetU32(std::string_view bytes, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + i])) << (8 * i);
  }
  return v;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool ParseNumber(std::string_view token, T& out) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

// Splits text into lines (handles \n and \r\n), keeping line numbers.
std::vector<std::pair<std::size_t, std::string_view>> Lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(number++, line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

}  // namespace

FeatureFormat FormatForPath(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv" ? FeatureFormat::kCsv : FeatureFormat::kBinary;
}

std::uint64_t BinaryFileSize(std::uint64_t n_rows, std::uint64_t dim, bool has_labels) {
  return kBinaryHeaderSize + 8 * n_rows * dim + (has_labels ? 4 * n_rows : 0);
}

std::string EncodeBinary(const FeatureMatrix& matrix) {
  std::string out;
  out.reserve(BinaryFileSize(matrix.n_rows(), matrix.dim(), matrix.has_labels()));
  out.append(kBinaryMagic);
  PutU64(out, matrix.n_rows());
  PutU64(out, matrix.dim());
  out.push_back(matrix.has_labels() ? 1 : 0);
  for (double v : matrix.values()) PutU64(out, std::bit_cast<std::uint64_t>(v));
  if (matrix.has_labels()) {
    for (std::int32_t label : *matrix.row_labels()) PutU32(out, static_cast<std::uint32_t>(label));
  }
  return out;
}

FeatureMatrix DecodeBinary(std::string_view bytes) {
  if (bytes.size() < kBinaryMagic.size() || bytes.substr(0, kBinaryMagic.size()) != kBinaryMagic) {
    throw LoadError("bad magic at byte offset 0 (expected \"DIVBSFM1\")", Kind::kByteOffset, 0);
  }
  if (bytes.size() < kBinaryHeaderSize) {
    throw LoadError("truncated header: file ends at byte offset " + std::to_string(bytes.size()),
                    Kind::kByteOffset, bytes.size());
  }
  const std::uint64_t n_rows = GetU64(bytes, 8);
  const std::uint64_t dim = GetU64(bytes, 16);
  const auto flag = static_cast<unsigned char>(bytes[24]);
  if (n_rows == 0) throw LoadError("n_rows is 0 at byte offset 8", Kind::kByteOffset, 8);
  if (dim == 0) throw LoadError("dim is 0 at byte offset 16", Kind::kByteOffset, 16);
  if (flag > 1) {
    throw LoadError("has_labels byte must be 0 or 1 at byte offset 24", Kind::kByteOffset, 24);
  }
  const bool has_labels = flag == 1;
  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint64_t>::max() / 16;
  if (n_rows > kLimit / dim) {
    throw LoadError("n_rows * dim overflows (header at byte offset 8)", Kind::kByteOffset, 8);
  }
  const std::uint64_t expected = BinaryFileSize(n_rows, dim, has_labels);
  if (bytes.size() < expected) {
    throw LoadError("truncated payload: expected " + std::to_string(expected) +
                        " bytes, file ends at byte offset " + std::to_string(bytes.size()),
                    Kind::kByteOffset, bytes.size());
  }
  if (bytes.size() > expected) {
    throw LoadError("unexpected trailing data at byte offset " + std::to_string(expected),
                    Kind::kByteOffset, expected);
  }
  std::vector<double> values(n_rows * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t off = kBinaryHeaderSize + 8 * i;
    values[i] = std::bit_cast<double>(GetU64(bytes, off));
    if (!std::isfinite(values[i])) {
      throw LoadError("non-finite value at byte offset " + std::to_string(off),
                      Kind::kByteOffset, off);
    }
  }
  std::optional<std::vector<std::int32_t>> labels;
  if (has_labels) {
    labels.emplace(n_rows);
    const std::size_t base = kBinaryHeaderSize + 8 * values.size();
    for (std::size_t i = 0; i < n_rows; ++i) {
      (*labels)[i] = static_cast<std::int32_t>(GetU32(bytes, base + 4 * i));
    }
  }
  return FeatureMatrix(n_rows, dim, std::move(values), std::move(labels));
}

std::string FormatDouble(double value) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw ContractViolation("FormatDouble: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string EncodeCsv(const FeatureMatrix& matrix) {
  std::string out;
  for (std::size_t j = 0; j < matrix.dim(); ++j) {
    if (j > 0) out.push_back(',');
    out += "f" + std::to_string(j);
  }
  if (matrix.has_labels()) out += ",label";
  out.push_back('\n');
  for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
    const auto row = matrix.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out.push_back(',');
      out += FormatDouble(row[j]);
    }
    if (matrix.has_labels()) {
      out.push_back(',');
      out += std::to_string((*matrix.row_labels())[i]);
    }
    out.push_back('\n');
  }
  return out;
}

FeatureMatrix DecodeCsv(std::string_view text) {
  const auto lines = Lines(text);
  std::size_t first = 0;
  while (first < lines.size() && Trim(lines[first].second).empty()) ++first;
  if (first == lines.size()) throw LoadError("CSV has no rows", Kind::kLine, 1);

  bool has_labels = false;
  std::size_t columns = 0;
  std::size_t data_start = first;
  {
    const auto tokens = SplitCommas(lines[first].second);
    bool numeric = true;
    for (std::string_view t : tokens) {
      double dummy;
      if (!ParseNumber(t, dummy)) {
        // "inf"/"nan" never reach here since from_chars accepts them.
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      has_labels = tokens.back() == "label";
      columns = tokens.size();
      data_start = first + 1;
    }
  }

  std::vector<double> values;
  std::vector<std::int32_t> labels;
  std::size_t n_rows = 0;
  for (std::size_t li = data_start; li < lines.size(); ++li) {
    const auto& [number, line] = lines[li];
    if (Trim(line).empty()) continue;
    const auto tokens = SplitCommas(line);
    if (columns == 0) columns = tokens.size();
    if (tokens.size() != columns) {
      throw LoadError("line " + std::to_string(number) + ": expected " + std::to_string(columns) +
                          " columns, found " + std::to_string(tokens.size()),
                      Kind::kLine, number);
    }
    const std::size_t n_features = has_labels ? columns - 1 : columns;
    for (std::size_t j = 0; j < n_features; ++j) {
      double v;
      if (!ParseNumber(tokens[j], v)) {
        throw LoadError("line " + std::to_string(number) + ": cannot parse \"" +
                            std::string(tokens[j]) + "\" as a number",
                        Kind::kLine, number);
      }
      if (!std::isfinite(v)) {
        throw LoadError("line " + std::to_string(number) + ": non-finite value", Kind::kLine,
                        number);
      }
      values.push_back(v);
    }
    if (has_labels) {
      std::int32_t label;
      if (!ParseNumber(tokens.back(), label)) {
        throw LoadError("line " + std::to_string(number) + ": label \"" +
                            std::string(tokens.back()) + "\" is not a 32-bit integer",
                        Kind::kLine, number);
      }
      labels.push_back(label);
    }
    ++n_rows;
  }
  const std::size_t dim = has_labels ? columns - 1 : columns;
  if (n_rows == 0) throw LoadError("CSV has no data rows", Kind::kLine, lines[first].first);
  if (dim == 0) throw LoadError("CSV has no feature columns", Kind::kLine, lines[first].first);
  std::optional<std::vector<std::int32_t>> maybe_labels;
  if (has_labels) maybe_labels = std::move(labels);
  return FeatureMatrix(n_rows, dim, std::move(values), std::move(maybe_labels));
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string(), Kind::kByteOffset, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

FeatureMatrix ReadFeatures(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  return FormatForPath(path) == FeatureFormat::kCsv ? DecodeCsv(bytes) : DecodeBinary(bytes);
}

void WriteFeatures(const FeatureMatrix& matrix, const std::filesystem::path& path) {
  WriteFileAtomic(path, FormatForPath(path) == FeatureFormat::kCsv ? EncodeCsv(matrix)
                                                                   : EncodeBinary(matrix));
}

std::vector<double> ReadScores(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  if (std::string_view(bytes).substr(0, kBinaryMagic.size()) == kBinaryMagic) {
    const FeatureMatrix m = DecodeBinary(bytes);
    if (m.dim() != 1) {
      throw LoadError("score file must have dim 1, found " + std::to_string(m.dim()),
                      Kind::kByteOffset, 16);
    }
    return {m.values().begin(), m.values().end()};
  }
  std::vector<double> scores;
  bool first_content_line = true;
  for (const auto& [number, line] : Lines(bytes)) {
    std::string_view rest = line;
    std::vector<std::string_view> tokens;
    while (true) {
      const std::size_t start = rest.find_first_not_of(" \t,");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      const std::size_t end = std::min(rest.find_first_of(" \t,"), rest.size());
      tokens.push_back(rest.substr(0, end));
      rest.remove_prefix(end);
    }
    if (tokens.empty()) continue;
    std::vector<double> parsed;
    bool ok = true;
    for (std::string_view t : tokens) {
      double v;
      if (!ParseNumber(t, v)) {
        ok = false;
        break;
      }
      parsed.push_back(v);
    }
    if (!ok) {
      if (first_content_line) {
        first_content_line = false;
        continue;
      }
      throw LoadError("line " + std::to_string(number) + ": cannot parse score",
                      Kind::kLine, number);
    }
    first_content_line = false;
    for (double v : parsed) {
      if (!std::isfinite(v)) {
        throw LoadError("line " + std::to_string(number) + ": non-finite score", Kind::kLine,
                        number);
      }
      scores.push_back(v);
    }
  }
  if (scores.empty()) throw LoadError("score file holds no values", Kind::kLine, 1);
  return scores;
}

std::string ScatterCsv(const FeatureMatrix& points, std::span<const std::size_t> selected) {
  std::vector<bool> flag(points.n_rows(), false);
  for (std::size_t idx : selected) {
    if (idx >= points.n_rows()) throw ContractViolation("ScatterCsv: index out of range");
    flag[idx] = true;
  }
  std::string out = "x,y,label,selected\n";
  for (std::size_t i = 0; i < points.n_rows(); ++i) {
    const auto r = points.row(i);
    out += FormatDouble(r[0]) + "," + FormatDouble(points.dim() > 1 ? r[1] : 0.0) + ",";
    out += points.has_labels() ? std::to_string((*points.row_labels())[i]) : "0";
    out += flag[i] ? ",1\n" : ",0\n";
  }
  return out;
}

std::string ScatterSvg(const FeatureMatrix& points, std::span<const std::size_t> selected,
                       std::string_view title) {
  static constexpr std::array<std::string_view, 4> kColors{"#d62728", "#1f77b4", "#2ca02c",
                                                           "#e6c619"};
  constexpr double kSize = 600.0;
  constexpr double kMargin = 30.0;
  std::vector<bool> flag(points.n_rows(), false);
  for (std::size_t idx : selected) {
    if (idx >= points.n_rows()) throw ContractViolation("ScatterSvg: index out of range");
    flag[idx] = true;
  }
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (std::size_t i = 0; i < points.n_rows(); ++i) {
    const auto r = points.row(i);
    const double y = points.dim() > 1 ? r[1] : 0.0;
    lo_x = std::min(lo_x, r[0]);
    hi_x = std::max(hi_x, r[0]);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  const double span_x = std::max(hi_x - lo_x, 1e-12);
  const double span_y = std::max(hi_y - lo_y, 1e-12);
  auto px = [&](double x) { return kMargin + (x - lo_x) / span_x * (kSize - 2 * kMargin); };
  auto py = [&](double y) { return kSize - kMargin - (y - lo_y) / span_y * (kSize - 2 * kMargin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
         "viewBox=\"0 0 600 600\">\n"
      << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"300\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">"
        << title << "</text>\n";
  }
  // Unselected points first so the selection is drawn on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < points.n_rows(); ++i) {
      if (flag[i] != (pass == 1)) continue;
      const auto r = points.row(i);
      const std::int32_t label = points.has_labels() ? (*points.row_labels())[i] : 0;
      const std::string_view color = kColors[static_cast<std::size_t>(label) % kColors.size()];
      svg << "<circle cx=\"" << FormatDouble(px(r[0])) << "\" cy=\""
          << FormatDouble(py(points.dim() > 1 ? r[1] : 0.0)) << "\" ";
      if (flag[i]) {
        svg << "r=\"4\" fill=\"" << color << "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
      } else {
        svg << "r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.2\"/>\n";
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::optional<double> EpsFromEnvironment() {
  const char* raw = std::getenv("DIVBS_EPS");
  if (raw == nullptr) return std::nullopt;
  double v;
  if (!ParseNumber(Trim(raw), v) || !std::isfinite(v) || v < 0.0) {
    throw ContractViolation(std::string("DIVBS_EPS must be a finite nonnegative number, got \"") +
                            raw + "\"");
  }
  return v;
}

}  // namespace divbs::io
