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

#include "cassi/classifier.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "cassi/error.hpp"
#include "cassi/metrics.hpp"

namespace cassi {

namespace {

// Residuals this far below the data scale are rounding noise of an exact
// fit; their moments carry no information about Gaussianity.
constexpr double kExactFitRatio = 1e-4;

std::vector<Pixel> neighbors(Pixel p, std::size_t rows, std::size_t cols) {
  std::vector<Pixel> out;
  out.reserve(4);
  if (p.row > 0) out.push_back({p.row - 1, p.col});
  if (p.col > 0) out.push_back({p.row, p.col - 1});
  if (p.col + 1 < cols) out.push_back({p.row, p.col + 1});
  if (p.row + 1 < rows) out.push_back({p.row + 1, p.col});
  return out;
}

double data_rms(const AcquisitionStack& acq, std::span<const Pixel> pixels) {
  double sum = 0.0;
  for (const Pixel& p : pixels) {
    for (double v : acq.pixel_data(p.row, p.col)) sum += v * v;
  }
  return pixels.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(pixels.size() * acq.count));
}

/// Residual variance per coded sample, corrected for the fitted intensities
/// and spectrum.
double residual_variance(const RegionModel& model, std::size_t acquisitions, std::size_t bands) {
  const double samples = static_cast<double>(model.pixels.size() * acquisitions);
  const double fitted = static_cast<double>(model.pixels.size() + bands);
  const double dof = std::max(samples - fitted, samples / 4.0);
  return model.residual_rms * model.residual_rms * samples / dof;
}

}  // namespace

double chi2_2dof_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kInvalidParameter, "alpha must lie in (0, 1)");
  return -2.0 * std::log(alpha);
}

double chi2_quantile(double dof, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kInvalidParameter, "alpha must lie in (0, 1)");
  if (!(dof > 0.0)) throw Error(ErrorCode::kInvalidParameter, "chi-square needs positive degrees of freedom");
  const boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

GaussianityResult gaussianity_test(std::span<const double> samples, double alpha) {
  const std::size_t n = samples.size();
  if (n < 20) {
    throw Error(ErrorCode::kInsufficientSample,
                "gaussianity_test: need at least 20 samples, got " + std::to_string(n));
  }
  const double threshold = chi2_2dof_quantile(alpha);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : samples) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 == 0.0) return {true, 0.0};
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  const double jb = static_cast<double>(n) / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
  return {jb <= threshold, jb};
}

double growth_gate_alpha(const ClassifierParams& params) {
  return params.gate_alpha ? *params.gate_alpha : params.alpha / 10.0;
}

void validate(const ClassifierParams& params, std::size_t bands, std::size_t acquisitions) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidParameter, msg); };
  if (params.block_size == 0) fail("P must be positive");
  if (acquisitions == 0) fail("at least one acquisition is required");
  const std::size_t p2 = params.block_size * params.block_size;
  if (p2 * acquisitions <= bands) {
    std::ostringstream os;
    os << "P^2 > W/A violated: P=" << params.block_size << " gives P^2=" << p2 << " <= W/A=" << bands << "/"
       << acquisitions << "=" << static_cast<double>(bands) / static_cast<double>(acquisitions);
    fail(os.str());
  }
  if (!(params.threshold > 0.0)) fail("T must be positive");
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (params.refresh_every == 0) fail("refresh_G must be positive");
  if (!(params.merge_theta >= 0.0)) fail("merge_theta must be nonnegative");
  if (params.mu && !(*params.mu >= 0.0)) fail("mu must be nonnegative");
  if (params.gate_alpha && !(*params.gate_alpha > 0.0 && *params.gate_alpha < 1.0)) {
    fail("gate_alpha must lie in (0, 1)");
  }
}

std::optional<RegionModel> fit_region(const AcquisitionStack& acq, const MaskSet& masks,
                                      std::vector<Pixel> pixels, const ClassifierParams& params) {
  std::sort(pixels.begin(), pixels.end());
  RegionModel model;
  try {
    const IntensityField field = estimate_psi_pan(acq, pixels);
    SpectrumEstimate est = estimate_spectrum(acq, masks, field, params.mu);
    model.pixels = std::move(pixels);
    model.spectrum = std::move(est.spectrum);
    model.clamped_mass = est.clamped_mass;
    model.mu = est.mu;
    model.psi.reserve(model.pixels.size());
    for (const Pixel& p : model.pixels) model.psi.push_back(refine_psi(acq, masks, model.spectrum, p));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerateRegion || e.code() == ErrorCode::kRankDeficient ||
        e.code() == ErrorCode::kDegeneratePixel) {
      return std::nullopt;
    }
    throw;
  }
  const Residuals res = residuals(acq, masks, model);
  model.residual_rms = res.rms;
  if (res.values.size() < 20) {
    model.gaussianity_stat = std::numeric_limits<double>::infinity();
  } else if (res.rms <= kExactFitRatio * data_rms(acq, model.pixels)) {
    model.gaussianity_stat = 0.0;
  } else {
    model.gaussianity_stat = gaussianity_test(res.values, params.alpha).statistic;
  }
  return model;
}

bool region_conditions_hold(const RegionModel& model, const ClassifierParams& params) {
  if (!(model.gaussianity_stat <= chi2_2dof_quantile(params.alpha))) return false;
  return std::all_of(model.psi.begin(), model.psi.end(),
                     [&](double psi) { return std::abs(1.0 - psi) < params.threshold; });
}

namespace {

void check_block_size(const AcquisitionStack& acq, const ClassifierParams& params) {
  const std::size_t P = params.block_size;
  if (P == 0 || P > std::min(acq.rows, acq.cols)) {
    throw Error(ErrorCode::kInvalidParameter, "P=" + std::to_string(P) + " must lie in [1, min(R, C)]");
  }
}

/// Fits the P x P block at (r0, c0) if every pixel is still unclassified and
/// returns it when it qualifies as a seed.
std::optional<RegionModel> try_seed_block(const AcquisitionStack& acq, const MaskSet& masks, const LabelMap& labels,
                                          std::size_t r0, std::size_t c0, const ClassifierParams& params) {
  const std::size_t P = params.block_size;
  std::vector<Pixel> block;
  block.reserve(P * P);
  for (std::size_t r = r0; r < r0 + P; ++r) {
    for (std::size_t c = c0; c < c0 + P; ++c) {
      if (labels.at(r, c) != LabelMap::kUnclassified) return std::nullopt;
      block.push_back({r, c});
    }
  }
  std::optional<RegionModel> model = fit_region(acq, masks, std::move(block), params);
  if (!model || !region_conditions_hold(*model, params)) return std::nullopt;
  return model;
}

}  // namespace

std::vector<RegionModel> detect_seeds(const AcquisitionStack& acq, const MaskSet& masks,
                                      const ClassifierParams& params, const LabelMap& roi) {
  check_block_size(acq, params);
  if (roi.rows() != acq.rows || roi.cols() != acq.cols) {
    throw Error(ErrorCode::kInvalidArgument, "detect_seeds: region-of-interest map does not match the data");
  }
  LabelMap taken = roi;
  std::vector<RegionModel> seeds;
  const std::size_t P = params.block_size;
  for (std::size_t r0 = 0; r0 + P <= acq.rows; r0 += P) {
    for (std::size_t c0 = 0; c0 + P <= acq.cols; c0 += P) {
      std::optional<RegionModel> model = try_seed_block(acq, masks, taken, r0, c0, params);
      if (!model) continue;
      const int id = static_cast<int>(seeds.size()) + 1;
      for (const Pixel& p : model->pixels) taken.at(p.row, p.col) = id;
      seeds.push_back(std::move(*model));
    }
  }
  return seeds;
}

void grow_region(const AcquisitionStack& acq, const MaskSet& masks, RegionModel& model, int id,
                 LabelMap& labels, const ClassifierParams& params) {
  const std::size_t rows = labels.rows();
  const std::size_t cols = labels.cols();
  const double gate_quantile = chi2_quantile(static_cast<double>(acq.count), growth_gate_alpha(params));
  double sigma2 = residual_variance(model, acq.count, masks.bands());
  const double floor2 = std::pow(kExactFitRatio * data_rms(acq, model.pixels), 2.0);

  std::vector<char> queued(rows * cols, 0);
  std::deque<Pixel> frontier;
  auto enqueue_neighbors = [&](Pixel p) {
    for (const Pixel& q : neighbors(p, rows, cols)) {
      if (labels.at(q) == LabelMap::kUnclassified && !queued[q.row * cols + q.col]) {
        queued[q.row * cols + q.col] = 1;
        frontier.push_back(q);
      }
    }
  };
  {
    std::vector<Pixel> initial;
    for (const Pixel& p : model.pixels) {
      for (const Pixel& q : neighbors(p, rows, cols)) {
        if (labels.at(q) == LabelMap::kUnclassified) initial.push_back(q);
      }
    }
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
    for (const Pixel& q : initial) {
      queued[q.row * cols + q.col] = 1;
      frontier.push_back(q);
    }
  }

  std::vector<Pixel> members = model.pixels;
  std::vector<Pixel> batch;

  // Refits the whole region; on failure the last batch is undone and growth
  // ends.
  auto refresh = [&]() -> bool {
    std::optional<RegionModel> refit = fit_region(acq, masks, members, params);
    if (refit && region_conditions_hold(*refit, params)) {
      model = std::move(*refit);
      sigma2 = residual_variance(model, acq.count, masks.bands());
      batch.clear();
      return true;
    }
    for (const Pixel& p : batch) labels.at(p.row, p.col) = LabelMap::kUnclassified;
    members.resize(members.size() - batch.size());
    batch.clear();
    return false;
  };

  while (!frontier.empty()) {
    const Pixel n = frontier.front();
    frontier.pop_front();
    queued[n.row * cols + n.col] = 0;
    if (labels.at(n) != LabelMap::kUnclassified) continue;
    double psi = 0.0;
    try {
      psi = refine_psi(acq, masks, model.spectrum, n);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDegeneratePixel) continue;
      throw;
    }
    if (!(std::abs(1.0 - psi) < params.threshold)) continue;
    const double r2 = pixel_residual_norm2(acq, masks, model.spectrum, n, psi);
    if (r2 > std::max(sigma2, floor2) * gate_quantile) continue;

    labels.at(n.row, n.col) = id;
    members.push_back(n);
    batch.push_back(n);
    enqueue_neighbors(n);
    if (batch.size() >= params.refresh_every && !refresh()) return;
  }
  if (!batch.empty()) refresh();
}

ClassificationResult merge_regions(const AcquisitionStack& acq, const MaskSet& masks,
                                   std::vector<RegionModel> models, LabelMap labels,
                                   const ClassifierParams& params) {
  const std::size_t rows = labels.rows();
  const std::size_t cols = labels.cols();
  const std::size_t n_models = models.size();
  std::vector<char> alive(n_models, 1);

  // adjacency[i] holds 0-based indices of regions 4-adjacent to region i.
  std::vector<std::set<std::size_t>> adjacency(n_models);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const int a = labels.at(r, c);
      if (a <= 0) continue;
      const int right = c + 1 < cols ? labels.at(r, c + 1) : 0;
      const int down = r + 1 < rows ? labels.at(r + 1, c) : 0;
      for (int b : {right, down}) {
        if (b > 0 && b != a) {
          adjacency[static_cast<std::size_t>(a - 1)].insert(static_cast<std::size_t>(b - 1));
          adjacency[static_cast<std::size_t>(b - 1)].insert(static_cast<std::size_t>(a - 1));
        }
      }
    }
  }

  using Candidate = std::tuple<double, std::size_t, std::size_t>;
  std::set<Candidate> pending;
  auto consider = [&](std::size_t i, std::size_t j) {
    const double angle = sam(models[i].spectrum, models[j].spectrum);
    if (angle < params.merge_theta) pending.insert({angle, std::min(i, j), std::max(i, j)});
  };
  for (std::size_t i = 0; i < n_models; ++i) {
    for (std::size_t j : adjacency[i]) {
      if (i < j) consider(i, j);
    }
  }

  while (!pending.empty()) {
    const auto [angle, i, j] = *pending.begin();
    pending.erase(pending.begin());
    std::vector<Pixel> joint = models[i].pixels;
    joint.insert(joint.end(), models[j].pixels.begin(), models[j].pixels.end());
    std::optional<RegionModel> merged = fit_region(acq, masks, std::move(joint), params);
    if (!merged || !region_conditions_hold(*merged, params)) continue;

    for (const Pixel& p : models[j].pixels) labels.at(p.row, p.col) = static_cast<int>(i) + 1;
    models[i] = std::move(*merged);
    models[j] = RegionModel{};
    alive[j] = 0;
    std::erase_if(pending, [&](const Candidate& cand) {
      const auto [a, x, y] = cand;
      return x == i || y == i || x == j || y == j;
    });
    for (std::size_t k : adjacency[j]) {
      adjacency[k].erase(j);
      if (k != i) {
        adjacency[k].insert(i);
        adjacency[i].insert(k);
      }
    }
    adjacency[i].erase(j);
    adjacency[j].clear();
    for (std::size_t k : adjacency[i]) consider(i, k);
  }

  ClassificationResult result;
  result.params = params;
  std::vector<int> remap(n_models + 1, 0);
  int next_id = 1;
  for (std::size_t i = 0; i < n_models; ++i) {
    if (!alive[i]) continue;
    remap[i + 1] = next_id++;
    RegionDiagnostics diag;
    diag.id = remap[i + 1];
    diag.size = models[i].pixels.size();
    diag.gaussianity_stat = models[i].gaussianity_stat;
    diag.residual_rms = models[i].residual_rms;
    diag.clamped_mass = models[i].clamped_mass;
    result.diagnostics.push_back(diag);
    result.models.push_back(std::move(models[i]));
  }
  std::vector<int> relabeled(labels.values().begin(), labels.values().end());
  for (int& v : relabeled) {
    if (v > 0) v = remap[static_cast<std::size_t>(v)];
  }
  result.labels = LabelMap(rows, cols, std::move(relabeled));
  return result;
}

ClassificationResult classify(const AcquisitionStack& acq, const MaskSet& masks, const ClassifierParams& params,
                              const LabelMap* roi) {
  if (acq.rows != masks.rows() || acq.cols != masks.cols() || acq.count != masks.count()) {
    throw Error(ErrorCode::kInvalidArgument, "classify: acquisition and masks disagree on R, C or A");
  }
  validate(params, masks.bands(), masks.count());
  LabelMap labels(acq.rows, acq.cols);
  if (roi) {
    if (roi->rows() != acq.rows || roi->cols() != acq.cols) {
      throw Error(ErrorCode::kInvalidArgument, "classify: region-of-interest map does not match the data");
    }
    for (std::size_t r = 0; r < acq.rows; ++r) {
      for (std::size_t c = 0; c < acq.cols; ++c) {
        if (roi->at(r, c) == LabelMap::kOutside) labels.at(r, c) = LabelMap::kOutside;
      }
    }
  }
  check_block_size(acq, params);
  // Seeds are taken in block scan order and each one is grown before the scan
  // moves on, so later blocks only see pixels no earlier region claimed.
  std::vector<RegionModel> models;
  const std::size_t P = params.block_size;
  for (std::size_t r0 = 0; r0 + P <= acq.rows; r0 += P) {
    for (std::size_t c0 = 0; c0 + P <= acq.cols; c0 += P) {
      std::optional<RegionModel> seed = try_seed_block(acq, masks, labels, r0, c0, params);
      if (!seed) continue;
      const int id = static_cast<int>(models.size()) + 1;
      for (const Pixel& p : seed->pixels) labels.at(p.row, p.col) = id;
      grow_region(acq, masks, *seed, id, labels, params);
      models.push_back(std::move(*seed));
    }
  }
  return merge_regions(acq, masks, std::move(models), std::move(labels), params);
}

}  // namespace cassi
