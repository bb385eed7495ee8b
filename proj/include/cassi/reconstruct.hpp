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

#include "cassi/types.hpp"

namespace cassi {

/// Per-pixel intensity coefficients over a region, aligned with `pixels`.
struct IntensityField {
  std::vector<Pixel> pixels;
  std::vector<double> psi;
};

struct RegionModel {
  std::vector<Pixel> pixels;  ///< row-major
  Spectrum spectrum;
  std::vector<double> psi;    ///< aligned with pixels
  double residual_rms = 0.0;
  double gaussianity_stat = 0.0;
  double clamped_mass = 0.0;  ///< sum of |negative entries| zeroed after the solve
  double mu = 0.0;            ///< regularization weight actually used
};

/// psi_n = pan(n) / mean over the region of pan.
IntensityField estimate_psi_pan(const AcquisitionStack& acq, std::span<const Pixel> region);

struct SpectrumEstimate {
  Spectrum spectrum;
  double clamped_mass = 0.0;
  double mu = 0.0;
  /// |region| * A < W; the solve then leans entirely on the smoothness prior.
  bool underdetermined = false;
};

/// Default smoothness weight: 1e-3 * trace(sum psi^2 H^T H) / W.
double default_mu(const AcquisitionStack& acq, const MaskSet& masks, const IntensityField& field);

/// Tikhonov least squares with a second-difference penalty,
///   argmin_s sum_n |d_n - psi_n H_n s|^2 + mu |D2 s|^2,
/// solved through the W x W normal equations, then clamped at zero.
/// Throws kRankDeficient when the normal matrix is singular (mu = 0 with a
/// sensing matrix that does not span all bands).
SpectrumEstimate estimate_spectrum(const AcquisitionStack& acq, const MaskSet& masks,
                                   const IntensityField& field, std::optional<double> mu = std::nullopt);

/// Scalar least-squares intensity for one pixel given a spectrum.
double refine_psi(const AcquisitionStack& acq, const MaskSet& masks, std::span<const double> spectrum,
                  Pixel pixel);

struct Residuals {
  std::vector<double> values;  ///< d_hat - d, pixels row-major, A samples each
  double rms = 0.0;
};

Residuals residuals(const AcquisitionStack& acq, const MaskSet& masks, const RegionModel& model);

/// Value of the regularized objective for given intensities and spectrum.
double region_objective(const AcquisitionStack& acq, const MaskSet& masks, std::span<const Pixel> pixels,
                        std::span<const double> psi, std::span<const double> spectrum, double mu);

/// |d_n - psi * d_hat_n|^2 for one pixel.
double pixel_residual_norm2(const AcquisitionStack& acq, const MaskSet& masks,
                            std::span<const double> spectrum, Pixel pixel, double psi);

}  // namespace cassi
