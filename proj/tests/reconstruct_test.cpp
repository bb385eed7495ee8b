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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cassi/error.hpp"
#include "cassi/forward_sim.hpp"
#include "cassi/rng.hpp"
#include "oracles.hpp"

namespace cassi {
namespace {

AcquisitionStack pan_only(std::size_t rows, std::size_t cols, std::vector<double> pan) {
  AcquisitionStack acq;
  acq.rows = rows;
  acq.cols = cols;
  acq.count = 1;
  acq.coded.assign(rows * cols, 0.0);
  acq.pan = std::move(pan);
  return acq;
}

std::vector<Pixel> block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) {
  std::vector<Pixel> out;
  for (std::size_t r = r0; r < r0 + h; ++r)
    for (std::size_t c = c0; c < c0 + w; ++c) out.push_back({r, c});
  return out;
}

double relative_error(const Spectrum& a, const Spectrum& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

/// Region of `rows x cols` pixels, each psi_n * s, with masks and an exact
/// (noise `sigma`) acquisition.
struct Fixture {
  HyperCube cube;
  MaskSet masks;
  AcquisitionStack acq;
  Spectrum spectrum;
  std::vector<double> psi;
  std::vector<Pixel> pixels;
};

Fixture make_fixture(std::size_t rows, std::size_t cols, std::size_t bands, std::size_t count, double sigma,
                     std::uint64_t seed) {
  Fixture f;
  Rng rng(seed);
  f.spectrum = random_smooth_spectrum(bands, rng, 0.8);
  f.cube = HyperCube(rows, cols, bands);
  f.pixels = block(0, 0, rows, cols);
  for (const Pixel& p : f.pixels) {
    const double psi = rng.uniform(0.9, 1.1);
    f.psi.push_back(psi);
    for (std::size_t w = 0; w < bands; ++w) f.cube.at(p.row, p.col, w) = psi * f.spectrum[w];
  }
  f.masks = gen_masks(rows, cols, bands, count, 0.5, seed + 1);
  f.acq = acquire(f.cube, f.masks, sigma, seed + 2);
  return f;
}

TEST(EstimatePsiPan, MeanOneRegionIsReturnedUnchanged) {
  const AcquisitionStack acq = pan_only(1, 3, {0.9, 1.0, 1.1});
  const IntensityField field = estimate_psi_pan(acq, block(0, 0, 1, 3));
  ASSERT_EQ(field.psi.size(), 3u);
  EXPECT_NEAR(field.psi[0], 0.9, 1e-15);
  EXPECT_NEAR(field.psi[1], 1.0, 1e-15);
  EXPECT_NEAR(field.psi[2], 1.1, 1e-15);
}

TEST(EstimatePsiPan, ConstantPanGivesUnitIntensity) {
  const AcquisitionStack acq = pan_only(2, 2, {3.7, 3.7, 3.7, 3.7});
  for (double psi : estimate_psi_pan(acq, block(0, 0, 2, 2)).psi) EXPECT_EQ(psi, 1.0);
}

TEST(EstimatePsiPan, ZeroMeanIsDegenerate) {
  const AcquisitionStack acq = pan_only(1, 2, {0.0, 0.0});
  try {
    estimate_psi_pan(acq, block(0, 0, 1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateRegion);
  }
}

TEST(EstimatePsiPan, RecoversGeneratorIntensityOnAClass) {
  SceneSpec spec;
  spec.rows = 24;
  spec.cols = 24;
  spec.intensity_spread = 0.1;
  const SyntheticScene scene = synth_scene(spec);
  const MaskSet masks = gen_masks(spec.rows, spec.cols, spec.bands, 2, 0.5, 3);
  const AcquisitionStack acq = acquire(scene.cube, masks, 0.0, 1);
  for (int k : scene.labels.region_ids()) {
    const auto region = scene.labels.pixels_of(k);
    const IntensityField field = estimate_psi_pan(acq, region);
    for (std::size_t i = 0; i < region.size(); ++i) {
      EXPECT_NEAR(field.psi[i], scene.psi[region[i].row * spec.cols + region[i].col], 1e-12);
    }
  }
}

TEST(EstimateSpectrum, NoiselessOverdeterminedRegionIsExact) {
  // 16 pixels x 3 acquisitions = 48 equations for 12 unknowns.
  const Fixture f = make_fixture(4, 4, 12, 3, 0.0, 5);
  const SpectrumEstimate est = estimate_spectrum(f.acq, f.masks, {f.pixels, f.psi}, 1e-8);
  EXPECT_FALSE(est.underdetermined);
  EXPECT_EQ(est.mu, 1e-8);
  EXPECT_LT(relative_error(est.spectrum, f.spectrum), 1e-6);
}

TEST(EstimateSpectrum, RankDeficientWithoutRegularization) {
  // All-open masks give every pixel the same row of ones.
  HyperCube cube(3, 3, 6);
  for (double& v : cube.data()) v = 0.4;
  const MaskSet masks = MaskSet::all_open(3, 3, 6, 2);
  const AcquisitionStack acq = acquire(cube, masks, 0.0, 1);
  const auto pixels = block(0, 0, 3, 3);
  try {
    estimate_spectrum(acq, masks, estimate_psi_pan(acq, pixels), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
    EXPECT_NE(std::string(e.what()).find("mu"), std::string::npos);
  }
}

TEST(EstimateSpectrum, HeavyRegularizationGivesAffineSpectrum) {
  const Fixture f = make_fixture(6, 6, 16, 4, 0.01, 9);
  const SpectrumEstimate est = estimate_spectrum(f.acq, f.masks, estimate_psi_pan(f.acq, f.pixels), 1e12);
  ASSERT_EQ(est.clamped_mass, 0.0);
  for (std::size_t w = 1; w + 1 < est.spectrum.size(); ++w) {
    EXPECT_LT(std::abs(est.spectrum[w - 1] - 2.0 * est.spectrum[w] + est.spectrum[w + 1]), 1e-6);
  }
}

TEST(EstimateSpectrum, DefaultMuIsScaleRelative) {
  const Fixture f = make_fixture(4, 4, 12, 3, 0.0, 5);
  const IntensityField field{f.pixels, f.psi};
  const double mu = default_mu(f.acq, f.masks, field);
  // trace(sum psi^2 H^T H) = sum_n psi_n^2 * (number of open taps of H_n).
  double trace = 0.0;
  for (std::size_t i = 0; i < f.pixels.size(); ++i)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t w = 0; w < 12; ++w) trace += f.psi[i] * f.psi[i] * f.masks.sees(a, f.pixels[i].row, f.pixels[i].col, w);
  EXPECT_NEAR(mu, 1e-3 * trace / 12.0, 1e-15 * trace);
  EXPECT_NEAR(estimate_spectrum(f.acq, f.masks, field).mu, mu, 1e-12 * mu);
}

TEST(EstimateSpectrum, FlagsUnderdeterminedRegions) {
  const Fixture f = make_fixture(1, 2, 12, 3, 0.0, 5);
  EXPECT_TRUE(estimate_spectrum(f.acq, f.masks, {f.pixels, f.psi}).underdetermined);
}

TEST(RefinePsi, ScaledPredictionGivesScale) {
  const Fixture f = make_fixture(2, 2, 8, 4, 0.0, 3);
  AcquisitionStack acq = f.acq;
  const auto unit = predict_pixel(f.masks, {1, 0}, f.spectrum, 1.0);
  for (std::size_t a = 0; a < 4; ++a) acq.coded[(1 * 2 + 0) * 4 + a] = 3.0 * unit[a];
  EXPECT_NEAR(refine_psi(acq, f.masks, f.spectrum, {1, 0}), 3.0, 1e-14);
}

TEST(RefinePsi, OrthogonalDataGivesZero) {
  MaskSet masks(1, 1, 2, 2);
  masks.set(0, 0, 0, true);  // acquisition 0 sees band 0
  masks.set(1, 0, 1, true);  // acquisition 1 sees band 1
  const Spectrum s = {1.0, 0.0};  // prediction (1, 0)
  AcquisitionStack acq;
  acq.rows = acq.cols = 1;
  acq.count = 2;
  acq.coded = {0.0, 5.0};
  acq.pan = {5.0};
  EXPECT_EQ(refine_psi(acq, masks, s, {0, 0}), 0.0);
}

TEST(RefinePsi, RecoversGeneratorIntensity) {
  SceneSpec spec;
  spec.rows = 16;
  spec.cols = 16;
  spec.intensity_spread = 0.1;
  const SyntheticScene scene = synth_scene(spec);
  const MaskSet masks = gen_masks(16, 16, spec.bands, 4, 0.5, 2);
  const AcquisitionStack acq = acquire(scene.cube, masks, 0.0, 1);
  // Plant a pixel with intensity 1.07 exactly.
  HyperCube cube = scene.cube;
  const Spectrum& ref = scene.references[static_cast<std::size_t>(scene.labels.at(5, 5) - 1)];
  for (std::size_t w = 0; w < spec.bands; ++w) cube.at(5, 5, w) = 1.07 * ref[w];
  const AcquisitionStack planted = acquire(cube, masks, 0.0, 1);
  EXPECT_NEAR(refine_psi(planted, masks, ref, {5, 5}), 1.07, 1e-12);
  for (std::size_t r = 0; r < 16; r += 5) {
    for (std::size_t c = 0; c < 16; c += 3) {
      const Spectrum& s = scene.references[static_cast<std::size_t>(scene.labels.at(r, c) - 1)];
      EXPECT_NEAR(refine_psi(acq, masks, s, {r, c}), scene.psi[r * 16 + c], 1e-12);
    }
  }
}

TEST(RefinePsi, BlockedPixelIsDegenerate) {
  const MaskSet masks(2, 2, 3, 2);  // all closed
  const Fixture f = make_fixture(2, 2, 3, 2, 0.0, 1);
  try {
    refine_psi(f.acq, masks, f.spectrum, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegeneratePixel);
  }
}

TEST(Residuals, ExactModelGivesZeros) {
  const Fixture f = make_fixture(4, 4, 12, 3, 0.0, 5);
  RegionModel model;
  model.pixels = f.pixels;
  model.spectrum = f.spectrum;
  model.psi = f.psi;
  const Residuals res = residuals(f.acq, f.masks, model);
  ASSERT_EQ(res.values.size(), 16u * 3u);
  for (double v : res.values) EXPECT_NEAR(v, 0.0, 1e-14);
  EXPECT_NEAR(res.rms, 0.0, 1e-14);
}

TEST(Residuals, NoiseLevelIsRecovered) {
  const double sigma = 0.02;
  const Fixture f = make_fixture(20, 20, 8, 4, sigma, 7);  // 1600 samples
  RegionModel model;
  model.pixels = f.pixels;
  model.spectrum = f.spectrum;
  model.psi = f.psi;
  const Residuals res = residuals(f.acq, f.masks, model);
  EXPECT_EQ(res.values.size(), f.pixels.size() * 4);
  EXPECT_NEAR(res.rms, sigma, 0.1 * sigma);
}

TEST(Residuals, PooledInRowMajorOrder) {
  const Fixture f = make_fixture(3, 3, 6, 2, 0.0, 2);
  RegionModel model;
  model.pixels = {{0, 1}, {2, 2}};
  model.spectrum = Spectrum(6, 0.0);
  model.psi = {1.0, 1.0};
  const Residuals res = residuals(f.acq, f.masks, model);
  ASSERT_EQ(res.values.size(), 4u);
  EXPECT_EQ(res.values[0], -f.acq.coded_at(0, 1, 0));
  EXPECT_EQ(res.values[3], -f.acq.coded_at(2, 2, 1));
}

}  // namespace
}  // namespace cassi
