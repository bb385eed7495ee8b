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

#include "cassi/forward_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "cassi/error.hpp"
#include "cassi/metrics.hpp"

namespace cassi {

namespace {

// Domain tags keep the counter-hashed streams of masks, coded noise and pan
// noise disjoint even when they share a seed.
constexpr std::uint64_t kMaskStream = 0x6d61736b;
constexpr std::uint64_t kCodedStream = 0x636f6465;
constexpr std::uint64_t kPanStream = 0x70616e;

void check_compatible(const HyperCube& cube, const MaskSet& masks) {
  if (masks.rows() != cube.rows() || masks.cols() != cube.cols() || masks.bands() != cube.bands()) {
    throw Error(ErrorCode::kInvalidArgument,
                "acquire: masks are " + std::to_string(masks.rows()) + "x" + std::to_string(masks.width()) +
                    " for W=" + std::to_string(masks.bands()) + ", cube needs " + std::to_string(cube.rows()) +
                    "x" + std::to_string(cube.cols() + cube.bands() - 1) + " for W=" +
                    std::to_string(cube.bands()));
  }
}

double coded_sample(const MaskSet& masks, std::size_t a, std::size_t r, std::size_t c,
                    std::span<const double> spectrum) {
  double sum = 0.0;
  for (std::size_t w = 0; w < spectrum.size(); ++w) {
    if (masks.sees(a, r, c, w)) sum += spectrum[w];
  }
  return sum;
}

}  // namespace

MaskSet gen_masks(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count,
                  double open_fraction, std::uint64_t rng_seed) {
  if (!(open_fraction > 0.0 && open_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gen_masks: open_fraction must lie in (0, 1)");
  }
  MaskSet masks(rows, cols, bands, count);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < masks.width(); ++j) {
        masks.set(a, r, j, to_unit(hash_counter({rng_seed, kMaskStream, a, r, j})) < open_fraction);
      }
    }
  }
  masks.nominal_open_fraction = open_fraction;
  masks.seed = rng_seed;
  return masks;
}

AcquisitionStack acquire(const HyperCube& cube, const MaskSet& masks, double noise_sigma,
                         std::uint64_t rng_seed) {
  check_compatible(cube, masks);
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "acquire: noise_sigma must be finite and nonnegative");
  }
  AcquisitionStack acq;
  acq.rows = cube.rows();
  acq.cols = cube.cols();
  acq.count = masks.count();
  acq.noise_sigma = noise_sigma;
  acq.coded.resize(acq.rows * acq.cols * acq.count);
  acq.pan.resize(acq.rows * acq.cols);
  for (std::size_t r = 0; r < acq.rows; ++r) {
    for (std::size_t c = 0; c < acq.cols; ++c) {
      const auto spectrum = cube.spectrum(r, c);
      for (std::size_t a = 0; a < acq.count; ++a) {
        double value = coded_sample(masks, a, r, c, spectrum);
        if (noise_sigma > 0.0) value += noise_sigma * counter_normal(rng_seed, kCodedStream, r, c, a);
        acq.coded[(r * acq.cols + c) * acq.count + a] = value;
      }
      double total = 0.0;
      for (double v : spectrum) total += v;
      if (noise_sigma > 0.0) total += noise_sigma * counter_normal(rng_seed, kPanStream, r, c, 0);
      acq.pan[r * acq.cols + c] = total;
    }
  }
  return acq;
}

std::vector<double> predict_pixel(const MaskSet& masks, Pixel pixel, std::span<const double> spectrum,
                                  double psi) {
  if (pixel.row >= masks.rows() || pixel.col >= masks.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "predict_pixel: pixel (" + std::to_string(pixel.row) + ", " +
                                                 std::to_string(pixel.col) + ") out of bounds");
  }
  if (spectrum.size() != masks.bands()) {
    throw Error(ErrorCode::kInvalidArgument, "predict_pixel: spectrum length " +
                                                 std::to_string(spectrum.size()) + " != W " +
                                                 std::to_string(masks.bands()));
  }
  std::vector<double> out(masks.count());
  for (std::size_t a = 0; a < masks.count(); ++a) {
    out[a] = psi * coded_sample(masks, a, pixel.row, pixel.col, spectrum);
  }
  return out;
}

double coded_signal_rms(const HyperCube& cube, const MaskSet& masks) {
  const AcquisitionStack clean = acquire(cube, masks, 0.0, 0);
  double sum = 0.0;
  for (double v : clean.coded) sum += v * v;
  return std::sqrt(sum / static_cast<double>(clean.coded.size()));
}

double noise_sigma_for_snr(const HyperCube& cube, const MaskSet& masks, double snr_db) {
  return coded_signal_rms(cube, masks) * std::pow(10.0, -snr_db / 20.0);
}

Spectrum random_smooth_spectrum(std::size_t bands, Rng& rng, double peak) {
  const std::size_t bumps = 2 + rng.below(3);
  const double span = static_cast<double>(bands > 1 ? bands - 1 : 1);
  Spectrum s(bands, 0.0);
  for (std::size_t b = 0; b < bumps; ++b) {
    const double center = rng.uniform(0.0, span);
    const double width = rng.uniform(span / 12.0, span / 4.0) + 0.5;
    const double amplitude = rng.uniform(0.3, 1.0);
    for (std::size_t w = 0; w < bands; ++w) {
      const double x = (static_cast<double>(w) - center) / width;
      s[w] += amplitude * std::exp(-0.5 * x * x);
    }
  }
  const double top = *std::max_element(s.begin(), s.end());
  constexpr double kBaseline = 0.05;
  for (double& v : s) v = kBaseline + (peak - kBaseline) * v / top;
  return s;
}

namespace {

LabelMap rectangular_layout(std::size_t rows, std::size_t cols, std::size_t k) {
  std::size_t band_count = 1;
  while ((band_count + 1) * (band_count + 1) <= k) ++band_count;
  LabelMap labels(rows, cols);
  int next_id = 1;
  for (std::size_t b = 0; b < band_count; ++b) {
    const std::size_t in_band = k / band_count + (b < k % band_count ? 1 : 0);
    const std::size_t r0 = b * rows / band_count;
    const std::size_t r1 = (b + 1) * rows / band_count;
    for (std::size_t t = 0; t < in_band; ++t) {
      const std::size_t c0 = t * cols / in_band;
      const std::size_t c1 = (t + 1) * cols / in_band;
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) labels.at(r, c) = next_id;
      }
      ++next_id;
    }
  }
  return labels;
}

LabelMap voronoi_layout(std::size_t rows, std::size_t cols, std::size_t k, std::size_t seed_count, Rng& rng) {
  seed_count = std::max(seed_count, k);
  std::vector<std::pair<double, double>> seeds(seed_count);
  for (auto& s : seeds) s = {rng.uniform(0.0, static_cast<double>(rows)), rng.uniform(0.0, static_cast<double>(cols))};
  LabelMap labels(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < seed_count; ++i) {
        const double dr = static_cast<double>(r) + 0.5 - seeds[i].first;
        const double dc = static_cast<double>(c) + 0.5 - seeds[i].second;
        const double d = dr * dr + dc * dc;
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      labels.at(r, c) = static_cast<int>(best % k) + 1;
    }
  }
  return labels;
}

}  // namespace

SyntheticScene synth_scene(const SceneSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0 || spec.bands == 0 || spec.class_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synth_scene: dimensions and class count must be positive");
  }
  if (spec.class_count > spec.rows * spec.cols) {
    throw Error(ErrorCode::kInvalidArgument, "synth_scene: more classes than pixels");
  }
  if (!(spec.intensity_spread >= 0.0 && spec.intensity_spread < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "synth_scene: intensity spread must lie in [0, 1)");
  }
  if (!(spec.outlier_rate >= 0.0 && spec.outlier_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "synth_scene: outlier rate must lie in [0, 1)");
  }

  Rng rng(spec.rng_seed);
  SyntheticScene scene;
  // Peak chosen so that psi * s stays within [0, 1].
  const double peak = 0.95 / (1.0 + spec.intensity_spread);
  constexpr int kMaxDraws = 1000;
  while (scene.references.size() < spec.class_count) {
    Spectrum candidate;
    bool accepted = false;
    for (int draw = 0; draw < kMaxDraws && !accepted; ++draw) {
      candidate = random_smooth_spectrum(spec.bands, rng, peak);
      accepted = std::all_of(scene.references.begin(), scene.references.end(),
                             [&](const Spectrum& s) { return sam(s, candidate) >= spec.min_class_angle; });
    }
    if (!accepted) {
      throw Error(ErrorCode::kInvalidArgument, "synth_scene: cannot draw " + std::to_string(spec.class_count) +
                                                   " spectra separated by " +
                                                   std::to_string(spec.min_class_angle) + " rad");
    }
    scene.references.push_back(std::move(candidate));
  }

  scene.labels = spec.geometry == SceneGeometry::kRectangular
                     ? rectangular_layout(spec.rows, spec.cols, spec.class_count)
                     : voronoi_layout(spec.rows, spec.cols, spec.class_count, spec.voronoi_seeds, rng);

  scene.cube = HyperCube(spec.rows, spec.cols, spec.bands);
  scene.psi.resize(spec.rows * spec.cols);
  // Antithetic pairs (u, 2 - u) in row-major order within each class keep the
  // class mean of psi at exactly 1, the normalization psi is identifiable
  // under. An odd class leaves its last pixel at 1.
  std::vector<std::size_t> remaining(spec.class_count, 0);
  for (int k : scene.labels.values()) ++remaining[static_cast<std::size_t>(k - 1)];
  std::vector<std::optional<double>> pending(spec.class_count);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const auto k = static_cast<std::size_t>(scene.labels.at(r, c) - 1);
      double psi = 1.0;
      if (pending[k]) {
        psi = 2.0 - *pending[k];
        pending[k].reset();
      } else if (remaining[k] > 1 && spec.intensity_spread > 0.0) {
        psi = rng.uniform(1.0 - spec.intensity_spread, 1.0 + spec.intensity_spread);
        pending[k] = psi;
      }
      --remaining[k];
      scene.psi[r * spec.cols + c] = psi;
      const Spectrum& ref = scene.references[k];
      auto out = scene.cube.spectrum(r, c);
      for (std::size_t w = 0; w < spec.bands; ++w) out[w] = psi * ref[w];
    }
  }

  if (spec.outlier_rate > 0.0) {
    OutlierInjection injected = inject_outliers(scene.cube, scene.labels, spec.outlier_rate, mix64(spec.rng_seed));
    scene.cube = std::move(injected.cube);
    scene.outliers = std::move(injected.altered);
  }
  return scene;
}

OutlierInjection inject_outliers(const HyperCube& cube, const LabelMap& labels, double rate,
                                 std::uint64_t rng_seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "inject_outliers: rate must lie in [0, 1)");
  }
  if (labels.rows() != cube.rows() || labels.cols() != cube.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "inject_outliers: label map does not match cube");
  }
  OutlierInjection out{cube, {}};
  std::vector<Pixel> labeled;
  for (std::size_t r = 0; r < labels.rows(); ++r) {
    for (std::size_t c = 0; c < labels.cols(); ++c) {
      if (labels.at(r, c) > 0) labeled.push_back({r, c});
    }
  }
  const auto n_altered = static_cast<std::size_t>(std::floor(rate * static_cast<double>(labeled.size())));
  if (n_altered == 0) return out;

  Rng rng(rng_seed);
  // Partial Fisher-Yates: the first n_altered entries are a uniform sample.
  for (std::size_t i = 0; i < n_altered; ++i) {
    const std::size_t j = i + rng.below(labeled.size() - i);
    std::swap(labeled[i], labeled[j]);
  }
  out.altered.assign(labeled.begin(), labeled.begin() + static_cast<std::ptrdiff_t>(n_altered));
  std::sort(out.altered.begin(), out.altered.end());

  std::map<int, Spectrum> medians;
  for (const Pixel& p : out.altered) {
    const int k = labels.at(p);
    if (!medians.contains(k)) medians.emplace(k, median_spectrum(cube, labels.pixels_of(k)));
  }
  constexpr double kMinAngle = 0.1;
  for (const Pixel& p : out.altered) {
    const Spectrum& median = medians.at(labels.at(p));
    Spectrum replacement = random_smooth_spectrum(cube.bands(), rng);
    while (sam(replacement, median) <= kMinAngle) replacement = random_smooth_spectrum(cube.bands(), rng);
    std::copy(replacement.begin(), replacement.end(), out.cube.spectrum(p.row, p.col).begin());
  }
  return out;
}

}  // namespace cassi
