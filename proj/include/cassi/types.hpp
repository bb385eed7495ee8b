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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cassi {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// A reflectance spectrum over the W bands of a cube.
using Spectrum = std::vector<double>;

struct Pixel {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;  // row-major order
};

/// R x C x W reflectance cube stored band-interleaved-by-pixel: the spectrum
/// of a pixel is contiguous.
class HyperCube {
 public:
  HyperCube() = default;
  HyperCube(std::size_t rows, std::size_t cols, std::size_t bands);
  HyperCube(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t bands() const noexcept { return bands_; }
  std::size_t pixel_count() const noexcept { return rows_ * cols_; }

  double& at(std::size_t r, std::size_t c, std::size_t w) { return data_[(r * cols_ + c) * bands_ + w]; }
  double at(std::size_t r, std::size_t c, std::size_t w) const { return data_[(r * cols_ + c) * bands_ + w]; }

  std::span<double> spectrum(std::size_t r, std::size_t c) {
    return {data_.data() + (r * cols_ + c) * bands_, bands_};
  }
  std::span<const double> spectrum(std::size_t r, std::size_t c) const {
    return {data_.data() + (r * cols_ + c) * bands_, bands_};
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Number of finite values outside [0, 1]. Real datasets are allowed to
  /// carry some; callers decide whether to warn.
  std::size_t out_of_range_count() const;

  friend bool operator==(const HyperCube&, const HyperCube&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t bands_ = 0;
  std::vector<double> data_;
};

/// A binary coded aperture per acquisition. Each mask spans R x (C + W - 1)
/// columns; band w of scene column c sees mask column c + w.
class MaskSet {
 public:
  MaskSet() = default;
  MaskSet(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count);

  static MaskSet all_open(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t bands() const noexcept { return bands_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t width() const noexcept { return cols_ + bands_ - 1; }

  std::uint8_t at(std::size_t a, std::size_t r, std::size_t j) const {
    return bits_[(a * rows_ + r) * width() + j];
  }
  void set(std::size_t a, std::size_t r, std::size_t j, bool open) {
    bits_[(a * rows_ + r) * width() + j] = open ? 1 : 0;
  }

  /// Transmission of band w at scene pixel (r, c) in acquisition a.
  std::uint8_t sees(std::size_t a, std::size_t r, std::size_t c, std::size_t w) const {
    return at(a, r, c + w);
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  double open_fraction() const;

  // Generation metadata, echoed in the mask manifest.
  double nominal_open_fraction = 0.5;
  std::uint64_t seed = 0;

  friend bool operator==(const MaskSet& a, const MaskSet& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bands_ == b.bands_ &&
           a.count_ == b.count_ && a.bits_ == b.bits_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t bands_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// A coded frames indexed (r, c, a), contiguous per pixel, plus the
/// panchromatic image.
struct AcquisitionStack {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t count = 0;
  std::vector<double> coded;
  std::vector<double> pan;
  double noise_sigma = 0.0;

  double coded_at(std::size_t r, std::size_t c, std::size_t a) const {
    return coded[(r * cols + c) * count + a];
  }
  std::span<const double> pixel_data(std::size_t r, std::size_t c) const {
    return {coded.data() + (r * cols + c) * count, count};
  }
  double pan_at(std::size_t r, std::size_t c) const { return pan[r * cols + c]; }

  friend bool operator==(const AcquisitionStack&, const AcquisitionStack&) = default;
};

/// Region assignment: k >= 1 region id, 0 unclassified, -1 outside the region
/// of interest.
class LabelMap {
 public:
  static constexpr int kUnclassified = 0;
  static constexpr int kOutside = -1;

  LabelMap() = default;
  LabelMap(std::size_t rows, std::size_t cols, int fill = kUnclassified)
      : rows_(rows), cols_(cols), labels_(rows * cols, fill) {}
  LabelMap(std::size_t rows, std::size_t cols, std::vector<int> labels);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  int& at(std::size_t r, std::size_t c) { return labels_[r * cols_ + c]; }
  int at(std::size_t r, std::size_t c) const { return labels_[r * cols_ + c]; }
  int at(Pixel p) const { return at(p.row, p.col); }

  std::span<const int> values() const noexcept { return labels_; }

  int max_label() const;
  /// Pixels carrying `label`, row-major.
  std::vector<Pixel> pixels_of(int label) const;
  /// Distinct positive labels in ascending order.
  std::vector<int> region_ids() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> labels_;
};

}  // namespace cassi
