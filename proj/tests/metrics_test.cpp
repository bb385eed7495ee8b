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

#include "cassi/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cassi/error.hpp"
#include "cassi/forward_sim.hpp"
#include "cassi/rng.hpp"

namespace cassi {
namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

/// Unit-norm spectrum at `angle` from `a`, built from a fixed positive ramp.
Spectrum rotate_away(const Spectrum& a, double angle) {
  const std::size_t W = a.size();
  Spectrum u(W);
  for (std::size_t w = 0; w < W; ++w) u[w] = static_cast<double>(w) / static_cast<double>(W) - 0.5;
  const double aa = std::inner_product(a.begin(), a.end(), a.begin(), 0.0);
  const double au = std::inner_product(a.begin(), a.end(), u.begin(), 0.0);
  for (std::size_t w = 0; w < W; ++w) u[w] -= au / aa * a[w];
  const double uu = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
  Spectrum b(W);
  for (std::size_t w = 0; w < W; ++w) {
    b[w] = std::cos(angle) * a[w] / std::sqrt(aa) + std::sin(angle) * u[w] / std::sqrt(uu);
  }
  return b;
}

TEST(Sam, UnitValues) {
  const Spectrum s = {0.1, 0.4, 0.3, 0.7};
  const Spectrum s2 = {0.2, 0.8, 0.6, 1.4};
  EXPECT_EQ(sam(s, s), 0.0);
  EXPECT_NEAR(sam(s, s2), 0.0, 1e-12);
  EXPECT_NEAR(sam(std::vector<double>{1, 0}, std::vector<double>{0, 1}), std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(sam(std::vector<double>{1, 0}, std::vector<double>{-1, 0}), std::numbers::pi, 1e-12);
}

TEST(Sam, SmallAnglesAreAccurate) {
  const Spectrum a = {0.3, 0.5, 0.2, 0.9, 0.4};
  for (double angle : {1e-9, 1e-6, 1e-3, 0.4}) EXPECT_NEAR(sam(a, rotate_away(a, angle)), angle, 1e-14 + 1e-12 * angle);
}

TEST(Sam, Errors) {
  EXPECT_EQ(code_of([] { sam(std::vector<double>{0, 0}, std::vector<double>{1, 0}); }), ErrorCode::kUndefinedAngle);
  EXPECT_EQ(code_of([] { sam(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}); }), ErrorCode::kInvalidArgument);
}

TEST(Rmse, UnitValues) {
  const Spectrum s = {0.1, 0.4, 0.3};
  EXPECT_EQ(rmse(s, s), 0.0);
  EXPECT_EQ(rmse(std::vector<double>(7, 0.0), std::vector<double>(7, 1.0)), 1.0);
  EXPECT_NEAR(rmse(std::vector<double>{0.2, 0.4}, std::vector<double>{0.4, 0.2}), 0.2, 1e-15);
  EXPECT_EQ(code_of([] { rmse(std::vector<double>{1}, std::vector<double>{1, 2}); }), ErrorCode::kInvalidArgument);
}

TEST(MedianSpectrum, IdenticalPixelsGiveThatSpectrum) {
  HyperCube cube(2, 2, 3);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t w = 0; w < 3; ++w) cube.at(r, c, w) = 0.1 * static_cast<double>(w + 1);
  const Spectrum m = median_spectrum(cube, std::vector<Pixel>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  EXPECT_EQ(m, (Spectrum{0.1, 0.2, 0.30000000000000004}));
}

TEST(MedianSpectrum, IsRobustToOneOutlier) {
  HyperCube cube(1, 3, 1);
  cube.at(0, 0, 0) = 1;
  cube.at(0, 1, 0) = 5;
  cube.at(0, 2, 0) = 100;
  EXPECT_EQ(median_spectrum(cube, std::vector<Pixel>{{0, 0}, {0, 1}, {0, 2}}), Spectrum{5});
}

TEST(MedianSpectrum, EvenCountAveragesMiddleValues) {
  HyperCube cube(1, 4, 1);
  const double v[] = {4, 1, 3, 2};
  for (std::size_t c = 0; c < 4; ++c) cube.at(0, c, 0) = v[c];
  EXPECT_EQ(median_spectrum(cube, std::vector<Pixel>{{0, 0}, {0, 1}, {0, 2}, {0, 3}}), Spectrum{2.5});
}

TEST(MedianSpectrum, OutlierBarelyMovesAClassMedian) {
  Rng rng(5);
  const Spectrum ref = random_smooth_spectrum(16, rng);
  const Spectrum odd = random_smooth_spectrum(16, rng);
  HyperCube cube(5, 10, 16);
  std::vector<Pixel> clean, all;
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 10; ++c) {
      const bool outlier = r == 2 && c == 7;
      for (std::size_t w = 0; w < 16; ++w) cube.at(r, c, w) = outlier ? odd[w] : ref[w];
      if (!outlier) clean.push_back({r, c});
      all.push_back({r, c});
    }
  }
  const Spectrum m49 = median_spectrum(cube, clean);
  const Spectrum m50 = median_spectrum(cube, all);
  for (std::size_t w = 0; w < 16; ++w) EXPECT_NEAR(m50[w], m49[w], 1e-9);
}

TEST(MedianSpectrum, EmptyRegionIsInvalid) {
  HyperCube cube(1, 1, 2);
  EXPECT_EQ(code_of([&] { median_spectrum(cube, std::vector<Pixel>{}); }), ErrorCode::kInvalidArgument);
}

TEST(SamMap, PureScalingGivesZero) {
  SceneSpec spec;
  spec.rows = 20;
  spec.cols = 20;
  spec.intensity_spread = 0.0;
  const SyntheticScene scene = synth_scene(spec);
  LabelMap labels = scene.labels;
  labels.at(0, 0) = LabelMap::kUnclassified;
  labels.at(0, 1) = LabelMap::kOutside;
  const std::vector<double> map = sam_map(scene.cube, labels);
  EXPECT_LT(map[0], 0.0);
  EXPECT_LT(map[1], 0.0);
  for (std::size_t i = 2; i < map.size(); ++i) EXPECT_NEAR(map[i], 0.0, 1e-12);
  for (int k : labels.region_ids()) EXPECT_EQ(exceedance(scene.cube, labels.pixels_of(k), 0.1), 0.0);
}

TEST(SamMap, PixelEqualToMedianReadsZero) {
  HyperCube cube(1, 3, 2);
  const double v[3][2] = {{0.1, 0.9}, {0.5, 0.5}, {0.9, 0.1}};
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t w = 0; w < 2; ++w) cube.at(0, c, w) = v[c][w];
  const std::vector<double> map = sam_map(cube, LabelMap(1, 3, 1));
  EXPECT_EQ(map[1], 0.0);
  EXPECT_GT(map[0], 0.0);
}

TEST(SamMap, MergedMinorityClassReadsTheirSeparation) {
  Rng rng(12);
  const Spectrum a = random_smooth_spectrum(24, rng);
  const Spectrum b = rotate_away(a, 0.4);
  HyperCube cube(4, 10, 24);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 10; ++c)
      for (std::size_t w = 0; w < 24; ++w) cube.at(r, c, w) = (c < 7 ? a : b)[w];
  const LabelMap merged(4, 10, 1);
  const std::vector<double> map = sam_map(cube, merged);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 10; ++c) {
      EXPECT_NEAR(map[r * 10 + c], c < 7 ? 0.0 : 0.4, 1e-9);
    }
  }
  EXPECT_NEAR(exceedance(cube, merged.pixels_of(1), 0.1), 0.3, 1e-15);
}

TEST(Histogram, SingleBinGetsAllMass) {
  const std::vector<double> values(10, 0.25);
  const MetricHistogram h = metric_histogram(values, uniform_edges(0.0, 1.0, 4));
  EXPECT_EQ(h.probabilities, (std::vector<double>{0.0, 1.0, 0.0, 0.0}));
}

TEST(Histogram, Errors) {
  const auto edges = uniform_edges(0.0, 1.0, 4);
  EXPECT_EQ(code_of([&] { metric_histogram(std::vector<double>{}, edges); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { metric_histogram(std::vector<double>{0.5}, std::vector<double>{0.0}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { metric_histogram(std::vector<double>{0.5}, std::vector<double>{1.0, 0.0}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Histogram, UniformSamplesFillBinsEvenly) {
  Rng rng(77);
  std::vector<double> values(100000);
  for (double& v : values) v = rng.uniform();
  const MetricHistogram h = metric_histogram(values, uniform_edges(0.0, 1.0, 10));
  double total = 0.0;
  for (double p : h.probabilities) {
    EXPECT_NEAR(p, 0.1, 0.01);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Histogram, OutOfRangeValuesClampToEndBins) {
  const MetricHistogram h = metric_histogram(std::vector<double>{-3.0, 1.0, 7.0, 2.0}, uniform_edges(0.0, 2.0, 2));
  EXPECT_EQ(h.probabilities, (std::vector<double>{0.25, 0.75}));
}

TEST(Audit, ReportsPerClassStatistics) {
  Rng rng(3);
  const Spectrum a = random_smooth_spectrum(16, rng);
  const Spectrum b = rotate_away(a, 0.3);
  HyperCube cube(4, 8, 16);
  LabelMap labels(4, 8);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 8; ++c) {
      labels.at(r, c) = c < 4 ? 1 : 2;
      const bool odd = c == 0 && r == 0;
      for (std::size_t w = 0; w < 16; ++w) cube.at(r, c, w) = (odd ? b : a)[w] * (c < 4 ? 1.0 : 0.5);
    }
  }
  labels.at(3, 7) = LabelMap::kOutside;
  const AuditReport report = audit(cube, labels);
  ASSERT_EQ(report.classes.size(), 2u);
  EXPECT_EQ(report.classes[0].name, "region_1");
  EXPECT_EQ(report.classes[0].count, 16u);
  EXPECT_EQ(report.classes[1].count, 15u);
  EXPECT_NEAR(report.classes[0].exceedance, 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(report.classes[0].mean_sam, 0.3 / 16.0, 1e-9);
  EXPECT_EQ(report.classes[1].exceedance, 0.0);
  EXPECT_EQ(report.sam_map.size(), 32u);
  EXPECT_LT(report.sam_map[3 * 8 + 7], 0.0);

  std::ostringstream os;
  write_audit_csv(os, report);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "name,count,median_sam,mean_sam,exceedance@0.1,mean_rmse");
}

TEST(Sweep, ShapeAndOrdering) {
  SceneSpec spec;
  spec.rows = 32;
  spec.cols = 32;
  spec.intensity_spread = 0.0;
  const SyntheticScene scene = synth_scene(spec);
  const MaskSet masks = gen_masks(32, 32, spec.bands, 4, 0.5, 1);
  const AcquisitionStack acq = acquire(scene.cube, masks, 0.0, 1);
  const std::vector<double> t = {0.2, 0.05};
  const SweepResult sweep = sweep_histograms(scene.cube, masks, acq, t, scene.labels, ClassifierParams{});
  ASSERT_EQ(sweep.sam.rows.size(), 3u);
  ASSERT_EQ(sweep.rmse.rows.size(), 3u);
  ASSERT_EQ(sweep.region_counts.size(), 3u);
  EXPECT_EQ(sweep.region_counts.back(), 4u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(sweep.sam.rows[i][0], 1.0, 1e-12) << "row " << i;

  std::ostringstream os;
  write_grid_csv(os, sweep.sam);
  std::string line;
  std::vector<std::string> heads;
  std::istringstream in(os.str());
  while (std::getline(in, line)) heads.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(heads, (std::vector<std::string>{"row", "T=0.2", "T=0.05", "reference"}));

  const std::vector<double> ascending = {0.05, 0.2};
  EXPECT_EQ(code_of([&] { sweep_histograms(scene.cube, masks, acq, ascending, scene.labels, ClassifierParams{}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Sweep, ErrorsNameTheFailingThreshold) {
  SceneSpec spec;
  spec.rows = 16;
  spec.cols = 16;
  const SyntheticScene scene = synth_scene(spec);
  const MaskSet masks = gen_masks(16, 16, spec.bands, 4, 0.5, 1);
  const AcquisitionStack acq = acquire(scene.cube, masks, 0.0, 1);
  ClassifierParams params;
  params.block_size = 2;  // 4 <= 32 / 4
  try {
    sweep_histograms(scene.cube, masks, acq, std::vector<double>{0.3}, scene.labels, params);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidParameter);
    EXPECT_NE(std::string(e.what()).find("T=0.3"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace cassi
