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

#include "cassi/reconstruct.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "cassi/error.hpp"
#include "cassi/forward_sim.hpp"

namespace cassi {

namespace {

void check_shapes(const AcquisitionStack& acq, const MaskSet& masks) {
  if (acq.rows != masks.rows() || acq.cols != masks.cols() || acq.count != masks.count()) {
    throw Error(ErrorCode::kInvalidArgument, "acquisition and masks disagree on R, C or A");
  }
}

/// Stacked design matrix with one row psi_n * H_n(a, :) per sample, and the
/// matching data vector.
struct Stacked {
  Eigen::MatrixXd design;
  Eigen::VectorXd data;
};

Stacked stack_region(const AcquisitionStack& acq, const MaskSet& masks, std::span<const Pixel> pixels,
                     std::span<const double> psi) {
  const std::size_t A = masks.count();
  const std::size_t W = masks.bands();
  Stacked s{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pixels.size() * A), static_cast<Eigen::Index>(W)),
            Eigen::VectorXd(static_cast<Eigen::Index>(pixels.size() * A))};
  for (std::size_t n = 0; n < pixels.size(); ++n) {
    const Pixel p = pixels[n];
    for (std::size_t a = 0; a < A; ++a) {
      const auto row = static_cast<Eigen::Index>(n * A + a);
      for (std::size_t w = 0; w < W; ++w) {
        if (masks.sees(a, p.row, p.col, w)) s.design(row, static_cast<Eigen::Index>(w)) = psi[n];
      }
      s.data(row) = acq.coded_at(p.row, p.col, a);
    }
  }
  return s;
}

Eigen::MatrixXd second_difference_gram(std::size_t bands) {
  const auto W = static_cast<Eigen::Index>(bands);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(W, W);
  for (Eigen::Index i = 0; i + 2 < W; ++i) {
    const double coeffs[3] = {1.0, -2.0, 1.0};
    for (int u = 0; u < 3; ++u) {
      for (int v = 0; v < 3; ++v) gram(i + u, i + v) += coeffs[u] * coeffs[v];
    }
  }
  return gram;
}

double second_difference_norm2(std::span<const double> s) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 < s.size(); ++i) {
    const double d = s[i] - 2.0 * s[i + 1] + s[i + 2];
    sum += d * d;
  }
  return sum;
}

}  // namespace

IntensityField estimate_psi_pan(const AcquisitionStack& acq, std::span<const Pixel> region) {
  if (region.empty()) throw Error(ErrorCode::kInvalidArgument, "estimate_psi_pan: empty region");
  double mean = 0.0;
  for (const Pixel& p : region) mean += acq.pan_at(p.row, p.col);
  mean /= static_cast<double>(region.size());
  if (mean == 0.0 || !std::isfinite(mean)) {
    throw Error(ErrorCode::kDegenerateRegion, "estimate_psi_pan: panchromatic mean over the region is zero");
  }
  IntensityField field;
  field.pixels.assign(region.begin(), region.end());
  field.psi.reserve(region.size());
  for (const Pixel& p : region) field.psi.push_back(acq.pan_at(p.row, p.col) / mean);
  return field;
}

double default_mu(const AcquisitionStack& acq, const MaskSet& masks, const IntensityField& field) {
  check_shapes(acq, masks);
  // trace(sum psi^2 H^T H) = sum_n psi_n^2 * (number of open mask entries seen by n).
  double trace = 0.0;
  for (std::size_t n = 0; n < field.pixels.size(); ++n) {
    const Pixel p = field.pixels[n];
    std::size_t open = 0;
    for (std::size_t a = 0; a < masks.count(); ++a) {
      for (std::size_t w = 0; w < masks.bands(); ++w) open += masks.sees(a, p.row, p.col, w);
    }
    trace += field.psi[n] * field.psi[n] * static_cast<double>(open);
  }
  return 1e-3 * trace / static_cast<double>(masks.bands());
}

SpectrumEstimate estimate_spectrum(const AcquisitionStack& acq, const MaskSet& masks,
                                   const IntensityField& field, std::optional<double> mu) {
  check_shapes(acq, masks);
  if (field.pixels.empty()) throw Error(ErrorCode::kInvalidArgument, "estimate_spectrum: empty region");
  if (field.psi.size() != field.pixels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "estimate_spectrum: intensity field is incomplete");
  }
  if (mu && !(*mu >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "estimate_spectrum: mu must be >= 0");

  const std::size_t W = masks.bands();
  const Stacked s = stack_region(acq, masks, field.pixels, field.psi);
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(s.design.cols(), s.design.cols());
  normal.selfadjointView<Eigen::Lower>().rankUpdate(s.design.transpose());
  normal.triangularView<Eigen::StrictlyUpper>() = normal.transpose();
  const Eigen::VectorXd rhs = s.design.transpose() * s.data;

  SpectrumEstimate est;
  est.mu = mu ? *mu : 1e-3 * normal.trace() / static_cast<double>(W);
  est.underdetermined = field.pixels.size() * masks.count() < W;
  const double scale = normal.trace() / static_cast<double>(W);

  Eigen::MatrixXd system = normal;
  if (est.mu > 0.0) system += est.mu * second_difference_gram(W);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  const double min_pivot = ldlt.vectorD().cwiseAbs().minCoeff();
  if (ldlt.info() != Eigen::Success || !(scale > 0.0) || min_pivot <= 1e-10 * scale) {
    throw Error(ErrorCode::kRankDeficient,
                "estimate_spectrum: normal matrix is singular (mu = " + std::to_string(est.mu) +
                    "); the coded samples do not determine every band, use mu > 0");
  }
  const Eigen::VectorXd solution = ldlt.solve(rhs);
  est.spectrum.resize(W);
  for (std::size_t w = 0; w < W; ++w) {
    const double v = solution(static_cast<Eigen::Index>(w));
    if (v < 0.0) {
      est.clamped_mass += -v;
      est.spectrum[w] = 0.0;
    } else {
      est.spectrum[w] = v;
    }
  }
  return est;
}

double refine_psi(const AcquisitionStack& acq, const MaskSet& masks, std::span<const double> spectrum,
                  Pixel pixel) {
  check_shapes(acq, masks);
  const std::vector<double> unit = predict_pixel(masks, pixel, spectrum, 1.0);
  const auto data = acq.pixel_data(pixel.row, pixel.col);
  double dot = 0.0;
  double norm2 = 0.0;
  for (std::size_t a = 0; a < unit.size(); ++a) {
    dot += unit[a] * data[a];
    norm2 += unit[a] * unit[a];
  }
  if (norm2 == 0.0) {
    throw Error(ErrorCode::kDegeneratePixel, "refine_psi: predicted data at pixel (" + std::to_string(pixel.row) +
                                                 ", " + std::to_string(pixel.col) +
                                                 ") is zero; the masks block every band there");
  }
  return dot / norm2;
}

double pixel_residual_norm2(const AcquisitionStack& acq, const MaskSet& masks, std::span<const double> spectrum,
                            Pixel pixel, double psi) {
  const std::vector<double> predicted = predict_pixel(masks, pixel, spectrum, psi);
  const auto data = acq.pixel_data(pixel.row, pixel.col);
  double sum = 0.0;
  for (std::size_t a = 0; a < predicted.size(); ++a) {
    const double d = predicted[a] - data[a];
    sum += d * d;
  }
  return sum;
}

Residuals residuals(const AcquisitionStack& acq, const MaskSet& masks, const RegionModel& model) {
  check_shapes(acq, masks);
  if (model.psi.size() != model.pixels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "residuals: model intensities do not cover its region");
  }
  Residuals out;
  out.values.reserve(model.pixels.size() * masks.count());
  double sum = 0.0;
  for (std::size_t n = 0; n < model.pixels.size(); ++n) {
    const Pixel p = model.pixels[n];
    const std::vector<double> predicted = predict_pixel(masks, p, model.spectrum, model.psi[n]);
    const auto data = acq.pixel_data(p.row, p.col);
    for (std::size_t a = 0; a < predicted.size(); ++a) {
      const double d = predicted[a] - data[a];
      out.values.push_back(d);
      sum += d * d;
    }
  }
  out.rms = out.values.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(out.values.size()));
  return out;
}

double region_objective(const AcquisitionStack& acq, const MaskSet& masks, std::span<const Pixel> pixels,
                        std::span<const double> psi, std::span<const double> spectrum, double mu) {
  double total = 0.0;
  for (std::size_t n = 0; n < pixels.size(); ++n) {
    total += pixel_residual_norm2(acq, masks, spectrum, pixels[n], psi[n]);
  }
  return total + mu * second_difference_norm2(spectrum);
}

}  // namespace cassi
