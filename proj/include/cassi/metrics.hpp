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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cassi/classifier.hpp"
#include "cassi/types.hpp"

namespace cassi {

/// Spectral angle in radians, in [0, pi]. Scale invariant.
double sam(std::span<const double> a, std::span<const double> b);

double rmse(std::span<const double> a, std::span<const double> b);

/// Per-band median over region pixels; even counts average the two middle
/// values.
Spectrum median_spectrum(const HyperCube& cube, std::span<const Pixel> region);

/// Value written to sam_map for pixels that are unclassified or outside.
inline constexpr double kNoValue = -1.0;

/// SAM of each labeled pixel to its own region's median spectrum, row-major.
std::vector<double> sam_map(const HyperCube& cube, const LabelMap& labels);

/// Fraction of region pixels whose SAM to the region median exceeds the
/// threshold.
double exceedance(const HyperCube& cube, std::span<const Pixel> region, double threshold_rad);

enum class MetricKind { kSam, kRmse };
const char* metric_name(MetricKind kind) noexcept;

struct MetricHistogram {
  MetricKind metric = MetricKind::kSam;
  std::vector<double> edges;
  std::vector<double> probabilities;
};

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

/// Probability-normalized histogram; values outside the edges count in the
/// end bins. The last bin is closed on the right.
MetricHistogram metric_histogram(std::span<const double> values, std::span<const double> edges,
                                 MetricKind metric = MetricKind::kSam);

/// Per-pixel SAM and RMSE to own-region median over every labeled pixel,
/// row-major.
struct PixelMetrics {
  std::vector<double> sam;
  std::vector<double> rmse;
};
PixelMetrics labeling_metrics(const HyperCube& cube, const LabelMap& labels);

struct AuditOptions {
  double threshold_rad = 0.1;
  std::vector<double> sam_edges = uniform_edges(0.0, 0.5, 64);
  std::vector<double> rmse_edges = uniform_edges(0.0, 0.5, 64);
};

struct ClassAudit {
  int id = 0;
  std::string name;
  std::size_t count = 0;
  Spectrum median;
  double median_sam = 0.0;
  double mean_sam = 0.0;
  double exceedance = 0.0;
  double mean_rmse = 0.0;
  MetricHistogram sam_hist;
  MetricHistogram rmse_hist;
};

struct AuditReport {
  std::vector<ClassAudit> classes;
  std::vector<double> sam_map;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double threshold_rad = 0.1;
};

AuditReport audit(const HyperCube& cube, const LabelMap& labels, const AuditOptions& options = {});

/// name,count,median_sam,mean_sam,exceedance@<thr>,mean_rmse
void write_audit_csv(std::ostream& os, const AuditReport& report);

struct HistogramGrid {
  MetricKind metric = MetricKind::kSam;
  std::vector<double> t_values;  ///< descending; the reference row has no T
  std::vector<double> edges;
  std::vector<std::vector<double>> rows;  ///< t_values.size() + 1 rows, last = reference
  std::vector<double> row_means;
};

struct SweepResult {
  HistogramGrid sam;
  HistogramGrid rmse;
  std::vector<std::size_t> region_counts;  ///< one per row; the last counts reference classes
};

/// Classifies once per T (descending) and histograms per-pixel SAM / RMSE to
/// own-region median. The reference labeling also defines the region of
/// interest and supplies the last row.
SweepResult sweep_histograms(const HyperCube& cube, const MaskSet& masks, const AcquisitionStack& acq,
                             std::span<const double> t_values, const LabelMap& reference,
                             const ClassifierParams& params, const AuditOptions& options = {});

/// One row per grid row: label followed by the bin probabilities.
void write_grid_csv(std::ostream& os, const HistogramGrid& grid);

}  // namespace cassi
