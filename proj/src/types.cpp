// Copyright 2026 The cassiclass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cassi/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "cassi/error.hpp"

namespace cassi {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kDegenerateRegion: return "degenerate-region";
    case ErrorCode::kDegeneratePixel: return "degenerate-pixel";
    case ErrorCode::kRankDeficient: return "rank-deficient";
    case ErrorCode::kInsufficientSample: return "insufficient-sample";
    case ErrorCode::kUndefinedAngle: return "undefined-angle";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNotFound: return "not-found";
  }
  return "unknown";
}

namespace {

void require_positive(std::size_t rows, std::size_t cols, std::size_t bands, const char* what) {
  if (rows == 0 || cols == 0 || bands == 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": every dimension must be positive");
  }
}

}  // namespace

HyperCube::HyperCube(std::size_t rows, std::size_t cols, std::size_t bands)
    : rows_(rows), cols_(cols), bands_(bands), data_(rows * cols * bands, 0.0) {
  require_positive(rows, cols, bands, "HyperCube");
}

HyperCube::HyperCube(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<double> data)
    : rows_(rows), cols_(cols), bands_(bands), data_(std::move(data)) {
  require_positive(rows, cols, bands, "HyperCube");
  if (data_.size() != rows * cols * bands) {
    throw Error(ErrorCode::kInvalidArgument, "HyperCube: data size " + std::to_string(data_.size()) +
                                                 " does not match " + std::to_string(rows * cols * bands));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "HyperCube: non-finite value");
  }
}

std::size_t HyperCube::out_of_range_count() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](double v) { return v < 0.0 || v > 1.0; }));
}

MaskSet::MaskSet(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count)
    : rows_(rows), cols_(cols), bands_(bands), count_(count) {
  require_positive(rows, cols, bands, "MaskSet");
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "MaskSet: at least one acquisition is required");
  bits_.assign(count * rows * width(), 0);
}

MaskSet MaskSet::all_open(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count) {
  MaskSet masks(rows, cols, bands, count);
  std::fill(masks.bits_.begin(), masks.bits_.end(), 1);
  masks.nominal_open_fraction = 1.0;
  return masks;
}

double MaskSet::open_fraction() const {
  if (bits_.empty()) return 0.0;
  const auto ones = std::count(bits_.begin(), bits_.end(), std::uint8_t{1});
  return static_cast<double>(ones) / static_cast<double>(bits_.size());
}

LabelMap::LabelMap(std::size_t rows, std::size_t cols, std::vector<int> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
  if (labels_.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidArgument, "LabelMap: " + std::to_string(labels_.size()) +
                                                 " labels for a " + std::to_string(rows) + "x" +
                                                 std::to_string(cols) + " grid");
  }
}

int LabelMap::max_label() const {
  return labels_.empty() ? kOutside : *std::max_element(labels_.begin(), labels_.end());
}

std::vector<Pixel> LabelMap::pixels_of(int label) const {
  std::vector<Pixel> out;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (labels_[r * cols_ + c] == label) out.push_back({r, c});
    }
  }
  return out;
}

std::vector<int> LabelMap::region_ids() const {
  std::set<int> ids;
  for (int v : labels_) {
    if (v > 0) ids.insert(v);
  }
  return {ids.begin(), ids.end()};
}

std::string format_number(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace cassi
