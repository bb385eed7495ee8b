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
#include <span>
#include <vector>

#include "cassi/rng.hpp"
#include "cassi/types.hpp"

namespace cassi {

/// Independent Bernoulli(open_fraction) masks, deterministic in rng_seed.
MaskSet gen_masks(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count,
                  double open_fraction, std::uint64_t rng_seed);

/// Ideal double-disperser acquisition: each coded sample is the mask-weighted
/// sum of the pixel's own spectrum, plus i.i.d. Gaussian detector noise. The
/// panchromatic image is the unmasked band sum with the same noise level.
/// Noise for sample (r, c, a) depends only on (rng_seed, r, c, a).
AcquisitionStack acquire(const HyperCube& cube, const MaskSet& masks, double noise_sigma,
                         std::uint64_t rng_seed);

/// Noise-free coded data predicted for one pixel, psi * H_n * spectrum.
std::vector<double> predict_pixel(const MaskSet& masks, Pixel pixel, std::span<const double> spectrum,
                                  double psi);

/// Root mean square of the noise-free coded samples, the signal reference
/// used when noise is specified as an SNR in dB.
double coded_signal_rms(const HyperCube& cube, const MaskSet& masks);
double noise_sigma_for_snr(const HyperCube& cube, const MaskSet& masks, double snr_db);

enum class SceneGeometry { kRectangular, kVoronoi };

struct SceneSpec {
  std::size_t rows = 96;
  std::size_t cols = 96;
  std::size_t bands = 32;
  std::size_t class_count = 4;
  SceneGeometry geometry = SceneGeometry::kRectangular;
  std::size_t voronoi_seeds = 12;
  double intensity_spread = 0.05;  ///< psi ~ Uniform[1 - spread, 1 + spread], class mean 1
  double outlier_rate = 0.0;
  /// Reference spectra are redrawn until every pair is at least this far apart
  /// in spectral angle.
  double min_class_angle = 0.1;
  std::uint64_t rng_seed = 1;
};

struct SyntheticScene {
  HyperCube cube;
  LabelMap labels;                   ///< true class ids 1..K
  std::vector<Spectrum> references;  ///< references[k - 1] is class k
  std::vector<double> psi;           ///< generator intensity per pixel, row-major
  std::vector<Pixel> outliers;       ///< pixels replaced by inject_outliers
};

/// Smooth spectrum: normalized sum of 2-4 Gaussian bumps over band index,
/// with values in [baseline, peak].
Spectrum random_smooth_spectrum(std::size_t bands, Rng& rng, double peak = 0.9);

SyntheticScene synth_scene(const SceneSpec& spec);

struct OutlierInjection {
  HyperCube cube;
  std::vector<Pixel> altered;  ///< row-major
};

/// Replaces floor(rate * labeled) labeled pixels with unrelated smooth spectra
/// that sit more than 0.1 rad from their class median.
OutlierInjection inject_outliers(const HyperCube& cube, const LabelMap& labels, double rate,
                                 std::uint64_t rng_seed);

}  // namespace cassi
