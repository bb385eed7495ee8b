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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cassi/metrics.hpp"
#include "cassi/types.hpp"

namespace cassi::io {

enum class Interleave { kBsq, kBil, kBip };

struct EnviHeader {
  std::size_t samples = 0;  ///< columns
  std::size_t lines = 0;    ///< rows
  std::size_t bands = 0;
  Interleave interleave = Interleave::kBsq;
  int data_type = 5;  ///< 4 float32, 5 float64, 12 uint16
  int byte_order = 0;  ///< 0 little endian, 1 big endian
  std::size_t header_offset = 0;
  /// Keys this reader does not interpret, kept verbatim (lower-cased key).
  std::map<std::string, std::string> extra;
};

EnviHeader parse_envi_header(std::string_view text);
std::string format_envi_header(const EnviHeader& header);
std::size_t bytes_per_sample(int data_type);

/// Decodes a raster into (r, c, w) order. Integer rasters are divided by
/// `divisor`, or by their maximum value when none is given.
HyperCube read_envi(std::string_view header_text, std::span<const std::uint8_t> data,
                    std::optional<double> divisor = std::nullopt);

struct EnviImage {
  std::string header;
  std::vector<std::uint8_t> data;
};

/// Float64, little endian. Lossless.
EnviImage write_envi(const HyperCube& cube, Interleave interleave = Interleave::kBsq,
                     const std::map<std::string, std::string>& extra = {});

/// `path` is the .hdr file; the raster is the same stem with no extension,
/// .img, .raw, .dat or .bin, whichever exists first.
HyperCube read_envi_file(const std::filesystem::path& header_path, std::optional<double> divisor = std::nullopt,
                         EnviHeader* header_out = nullptr);
void write_envi_file(const std::filesystem::path& header_path, const HyperCube& cube,
                     const std::map<std::string, std::string>& extra = {});

LabelMap parse_label_csv(std::string_view text);
std::string format_label_csv(const LabelMap& labels);
LabelMap read_label_csv(const std::filesystem::path& path);
void write_label_csv(const std::filesystem::path& path, const LabelMap& labels);
/// Public ground truths use 0 for "not labeled"; that becomes kOutside.
LabelMap from_dataset_convention(const LabelMap& raw);

/// Masks: `dir/masks.txt` manifest plus `dir/mask_NNN.bin` packed bits, one
/// file per acquisition.
void write_masks(const std::filesystem::path& dir, const MaskSet& masks);
MaskSet read_masks(const std::filesystem::path& dir);
std::vector<std::uint8_t> pack_mask(const MaskSet& masks, std::size_t acquisition);

/// Acquisitions: coded frames and pan as float64 ENVI pairs in `dir`.
void write_acquisition(const std::filesystem::path& dir, const AcquisitionStack& acq);
AcquisitionStack read_acquisition(const std::filesystem::path& dir);

/// One spectrum per column, header row of names.
std::string format_spectra_csv(const std::vector<std::string>& names, const std::vector<Spectrum>& spectra);
void write_spectra_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                       const std::vector<Spectrum>& spectra);
std::vector<Spectrum> read_spectra_csv(const std::filesystem::path& path, std::vector<std::string>* names = nullptr);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;  ///< row-major
  Rgb at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
};

/// Region k uses palette entry (k - 1) mod 256; 0 is white and -1 black.
Rgb palette_color(int label);
Image render_label_map(const LabelMap& labels);
/// Ramp from gray at 0 through red and yellow to white at vmax; sentinel
/// (negative) pixels are black.
Rgb ramp_color(double t);
Image render_sam_map(std::span<const double> values, std::size_t rows, std::size_t cols, double vmax);
/// Grid rows stacked top to bottom, each cell `cell` pixels square, scaled to
/// the largest probability.
Image render_grid(const HistogramGrid& grid, std::size_t cell = 8);

std::string encode_ppm(const Image& image);
void write_ppm(const std::filesystem::path& path, const Image& image);

std::string read_text(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace cassi::io
