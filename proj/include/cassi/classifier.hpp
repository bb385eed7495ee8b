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

#include <optional>
#include <span>
#include <vector>

#include "cassi/reconstruct.hpp"
#include "cassi/types.hpp"

namespace cassi {

struct GaussianityResult {
  bool pass = false;
  double statistic = 0.0;  ///< Jarque-Bera
};

/// Upper 1 - alpha quantile of chi-square with two degrees of freedom,
/// -2 ln(alpha). 4.605 / 5.991 / 9.210 at alpha = 0.10 / 0.05 / 0.01.
double chi2_2dof_quantile(double alpha);

/// Upper 1 - alpha quantile of chi-square with `dof` degrees of freedom.
double chi2_quantile(double dof, double alpha);

/// Jarque-Bera normality test. Needs at least 20 samples; a sample with zero
/// variance passes with statistic 0 (degenerate Gaussian).
GaussianityResult gaussianity_test(std::span<const double> samples, double alpha);

struct ClassifierParams {
  std::size_t block_size = 4;      ///< P, seed blocks are P x P
  double threshold = 0.2;          ///< T, gate on |1 - psi|
  double alpha = 0.05;
  std::optional<double> mu;       ///< nullopt: scale-relative default
  std::size_t refresh_every = 64;  ///< pixels accepted between refits
  double merge_theta = 0.05;       ///< radians
  /// Significance of the per-pixel residual gate during growth; nullopt means
  /// alpha / 10. The gate trims residual tails, so at alpha itself large
  /// regions drift away from Gaussian and stop growing early.
  std::optional<double> gate_alpha;
};

double growth_gate_alpha(const ClassifierParams& params);

/// Throws kInvalidParameter for violated parameter invariants, including
/// P^2 > W / A.
void validate(const ClassifierParams& params, std::size_t bands, std::size_t acquisitions);

struct RegionDiagnostics {
  int id = 0;
  std::size_t size = 0;
  double gaussianity_stat = 0.0;
  double residual_rms = 0.0;
  double clamped_mass = 0.0;
};

struct ClassificationResult {
  LabelMap labels;
  std::vector<RegionModel> models;  ///< models[k - 1] describes region k
  ClassifierParams params;
  std::vector<RegionDiagnostics> diagnostics;
};

/// Fits a full region model: pan intensities, spectrum, one refine pass,
/// residual statistics. Returns nullopt when the region is degenerate.
std::optional<RegionModel> fit_region(const AcquisitionStack& acq, const MaskSet& masks,
                                      std::vector<Pixel> pixels, const ClassifierParams& params);

/// True iff the model's residuals pass the Gaussianity test and every pixel
/// satisfies |1 - psi| < T.
bool region_conditions_hold(const RegionModel& model, const ClassifierParams& params);

/// Seed blocks in row-major scan order. `roi` marks pixels outside the region
/// of interest with LabelMap::kOutside; other values are ignored.
std::vector<RegionModel> detect_seeds(const AcquisitionStack& acq, const MaskSet& masks,
                                      const ClassifierParams& params, const LabelMap& roi);

/// Grows region `id` (already painted in `labels`) over 4-connected
/// unlabeled pixels.
void grow_region(const AcquisitionStack& acq, const MaskSet& masks, RegionModel& model, int id,
                 LabelMap& labels, const ClassifierParams& params);

/// Merges adjacent regions to a fixpoint and relabels ids contiguously.
/// models[k - 1] must describe label k in `labels`.
ClassificationResult merge_regions(const AcquisitionStack& acq, const MaskSet& masks,
                                   std::vector<RegionModel> models, LabelMap labels,
                                   const ClassifierParams& params);

/// Seed detection, growth in id order, then merging. `roi` is optional; when
/// present its kOutside pixels are excluded.
ClassificationResult classify(const AcquisitionStack& acq, const MaskSet& masks,
                              const ClassifierParams& params, const LabelMap* roi = nullptr);

}  // namespace cassi
