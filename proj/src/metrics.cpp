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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cassi/error.hpp"

namespace cassi {

double sam(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sam: spectra have lengths " + std::to_string(a.size()) + " and " +
                                                 std::to_string(b.size()));
  }
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kUndefinedAngle, "sam: angle to a zero spectrum is undefined");
  // Half-angle form on unit vectors; acos of the cosine loses ~1e-8 rad near 0.
  const double ia = 1.0 / std::sqrt(na), ib = 1.0 / std::sqrt(nb);
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = a[i] * ia, v = b[i] * ib;
    diff += (u - v) * (u - v);
    sum += (u + v) * (u + v);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rmse: spectra have lengths " + std::to_string(a.size()) + " and " +
                                                 std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

Spectrum median_spectrum(const HyperCube& cube, std::span<const Pixel> region) {
  if (region.empty()) throw Error(ErrorCode::kInvalidArgument, "median_spectrum: empty region");
  const std::size_t n = region.size();
  Spectrum median(cube.bands());
  std::vector<double> column(n);
  for (std::size_t w = 0; w < cube.bands(); ++w) {
    for (std::size_t i = 0; i < n; ++i) column[i] = cube.at(region[i].row, region[i].col, w);
    const auto mid = column.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(column.begin(), mid, column.end());
    if (n % 2 == 1) {
      median[w] = *mid;
    } else {
      const double upper = *mid;
      const double lower = *std::max_element(column.begin(), mid);
      median[w] = 0.5 * (lower + upper);
    }
  }
  return median;
}

namespace {

std::map<int, std::vector<Pixel>> regions_of(const LabelMap& labels) {
  std::map<int, std::vector<Pixel>> regions;
  for (std::size_t r = 0; r < labels.rows(); ++r) {
    for (std::size_t c = 0; c < labels.cols(); ++c) {
      if (labels.at(r, c) > 0) regions[labels.at(r, c)].push_back({r, c});
    }
  }
  return regions;
}

void check_dims(const HyperCube& cube, const LabelMap& labels) {
  if (cube.rows() != labels.rows() || cube.cols() != labels.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "label map is " + std::to_string(labels.rows()) + "x" +
                                                 std::to_string(labels.cols()) + ", cube is " +
                                                 std::to_string(cube.rows()) + "x" + std::to_string(cube.cols()));
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> sam_map(const HyperCube& cube, const LabelMap& labels) {
  check_dims(cube, labels);
  std::vector<double> map(cube.pixel_count(), kNoValue);
  for (const auto& [id, pixels] : regions_of(labels)) {
    const Spectrum median = median_spectrum(cube, pixels);
    for (const Pixel& p : pixels) map[p.row * cube.cols() + p.col] = sam(cube.spectrum(p.row, p.col), median);
  }
  return map;
}

double exceedance(const HyperCube& cube, std::span<const Pixel> region, double threshold_rad) {
  const Spectrum median = median_spectrum(cube, region);
  std::size_t above = 0;
  for (const Pixel& p : region) {
    if (sam(cube.spectrum(p.row, p.col), median) > threshold_rad) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(region.size());
}

const char* metric_name(MetricKind kind) noexcept { return kind == MetricKind::kSam ? "SAM" : "RMSE"; }

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw Error(ErrorCode::kInvalidArgument, "uniform_edges: need bins > 0 and hi > lo");
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  return edges;
}

MetricHistogram metric_histogram(std::span<const double> values, std::span<const double> edges, MetricKind metric) {
  if (edges.size() < 2) throw Error(ErrorCode::kInvalidArgument, "metric_histogram: need at least two bin edges");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorCode::kInvalidArgument, "metric_histogram: bin edges must be strictly ascending");
  }
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "metric_histogram: no values to histogram");
  MetricHistogram hist;
  hist.metric = metric;
  hist.edges.assign(edges.begin(), edges.end());
  const std::size_t bins = edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    // upper_bound gives the first edge > v; bin = that index - 1, clamped.
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    bin = std::min(bin, bins - 1);
    ++counts[bin];
  }
  hist.probabilities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    hist.probabilities[i] = static_cast<double>(counts[i]) / static_cast<double>(values.size());
  }
  return hist;
}

PixelMetrics labeling_metrics(const HyperCube& cube, const LabelMap& labels) {
  check_dims(cube, labels);
  std::vector<double> sam_values(cube.pixel_count(), kNoValue);
  std::vector<double> rmse_values(cube.pixel_count(), kNoValue);
  for (const auto& [id, pixels] : regions_of(labels)) {
    const Spectrum median = median_spectrum(cube, pixels);
    for (const Pixel& p : pixels) {
      const std::size_t i = p.row * cube.cols() + p.col;
      sam_values[i] = sam(cube.spectrum(p.row, p.col), median);
      rmse_values[i] = rmse(cube.spectrum(p.row, p.col), median);
    }
  }
  PixelMetrics out;
  for (std::size_t i = 0; i < cube.pixel_count(); ++i) {
    if (labels.values()[i] > 0) {
      out.sam.push_back(sam_values[i]);
      out.rmse.push_back(rmse_values[i]);
    }
  }
  return out;
}

AuditReport audit(const HyperCube& cube, const LabelMap& labels, const AuditOptions& options) {
  check_dims(cube, labels);
  AuditReport report;
  report.rows = cube.rows();
  report.cols = cube.cols();
  report.threshold_rad = options.threshold_rad;
  report.sam_map.assign(cube.pixel_count(), kNoValue);
  for (const auto& [id, pixels] : regions_of(labels)) {
    ClassAudit entry;
    entry.id = id;
    entry.name = "region_" + std::to_string(id);
    entry.count = pixels.size();
    entry.median = median_spectrum(cube, pixels);
    std::vector<double> sams, rmses;
    std::size_t above = 0;
    for (const Pixel& p : pixels) {
      const double s = sam(cube.spectrum(p.row, p.col), entry.median);
      sams.push_back(s);
      rmses.push_back(rmse(cube.spectrum(p.row, p.col), entry.median));
      report.sam_map[p.row * cube.cols() + p.col] = s;
      if (s > options.threshold_rad) ++above;
    }
    entry.exceedance = static_cast<double>(above) / static_cast<double>(pixels.size());
    entry.mean_sam = mean_of(sams);
    entry.mean_rmse = mean_of(rmses);
    entry.sam_hist = metric_histogram(sams, options.sam_edges, MetricKind::kSam);
    entry.rmse_hist = metric_histogram(rmses, options.rmse_edges, MetricKind::kRmse);
    entry.median_sam = median_of(std::move(sams));
    report.classes.push_back(std::move(entry));
  }
  return report;
}

void write_audit_csv(std::ostream& os, const AuditReport& report) {
  os << "name,count,median_sam,mean_sam,exceedance@" << format_number(report.threshold_rad) << ",mean_rmse\n";
  for (const ClassAudit& c : report.classes) {
    os << c.name << ',' << c.count << ',' << format_number(c.median_sam) << ',' << format_number(c.mean_sam) << ','
       << format_number(c.exceedance) << ',' << format_number(c.mean_rmse) << '\n';
  }
}

SweepResult sweep_histograms(const HyperCube& cube, const MaskSet& masks, const AcquisitionStack& acq,
                             std::span<const double> t_values, const LabelMap& reference,
                             const ClassifierParams& params, const AuditOptions& options) {
  if (t_values.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep: at least one T value is required");
  if (!std::is_sorted(t_values.begin(), t_values.end(), std::greater<>())) {
    throw Error(ErrorCode::kInvalidArgument, "sweep: T values must be in descending order");
  }
  check_dims(cube, reference);
  SweepResult out;
  out.sam = {MetricKind::kSam, {t_values.begin(), t_values.end()}, options.sam_edges, {}, {}};
  out.rmse = {MetricKind::kRmse, {t_values.begin(), t_values.end()}, options.rmse_edges, {}, {}};
  auto add_row = [&](const PixelMetrics& m) {
    out.sam.rows.push_back(metric_histogram(m.sam, options.sam_edges, MetricKind::kSam).probabilities);
    out.sam.row_means.push_back(mean_of(m.sam));
    out.rmse.rows.push_back(metric_histogram(m.rmse, options.rmse_edges, MetricKind::kRmse).probabilities);
    out.rmse.row_means.push_back(mean_of(m.rmse));
  };
  for (double t : t_values) {
    ClassifierParams row_params = params;
    row_params.threshold = t;
    try {
      const ClassificationResult result = classify(acq, masks, row_params, &reference);
      out.region_counts.push_back(result.models.size());
      add_row(labeling_metrics(cube, result.labels));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "sweep row T=" << format_number(t) << ": " << e.what();
      throw Error(e.code(), os.str());
    }
  }
  try {
    add_row(labeling_metrics(cube, reference));
    out.region_counts.push_back(reference.region_ids().size());
  } catch (const Error& e) {
    throw Error(e.code(), std::string("sweep reference row: ") + e.what());
  }
  return out;
}

void write_grid_csv(std::ostream& os, const HistogramGrid& grid) {
  os << "row";
  for (std::size_t i = 0; i + 1 < grid.edges.size(); ++i) {
    os << ",[" << format_number(grid.edges[i]) << ';' << format_number(grid.edges[i + 1])
       << (i + 2 == grid.edges.size() ? ']' : ')');
  }
  os << '\n';
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    if (r < grid.t_values.size()) {
      os << "T=" << format_number(grid.t_values[r]);
    } else {
      os << "reference";
    }
    for (double p : grid.rows[r]) os << ',' << format_number(p);
    os << '\n';
  }
}

}  // namespace cassi
