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

#include "cassi/cassi.h"

#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "cassi/classifier.hpp"
#include "cassi/error.hpp"
#include "cassi/forward_sim.hpp"
#include "cassi/io.hpp"
#include "cassi/metrics.hpp"

struct cassi_cube {
  cassi::HyperCube value;
};
struct cassi_masks {
  cassi::MaskSet value;
};
struct cassi_acquisition {
  cassi::AcquisitionStack value;
};
struct cassi_labels {
  cassi::LabelMap value;
};
struct cassi_spectra {
  std::vector<std::string> names;
  std::vector<cassi::Spectrum> values;
};
struct cassi_result {
  cassi::ClassificationResult value;
};
struct cassi_audit {
  cassi::AuditReport value;
  cassi::AuditOptions options;
  std::vector<int> labels;
};
struct cassi_sweep {
  cassi::SweepResult value;
};

namespace {

thread_local std::string last_error;

cassi_status to_status(cassi::ErrorCode code) {
  using cassi::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return CASSI_ERR_INVALID_ARGUMENT;
    case ErrorCode::kUndefinedAngle: return CASSI_ERR_INVALID_ARGUMENT;
    case ErrorCode::kInvalidParameter: return CASSI_ERR_INVALID_PARAMETER;
    case ErrorCode::kDegenerateRegion: return CASSI_ERR_DEGENERATE;
    case ErrorCode::kDegeneratePixel: return CASSI_ERR_DEGENERATE;
    case ErrorCode::kRankDeficient: return CASSI_ERR_RANK_DEFICIENT;
    case ErrorCode::kInsufficientSample: return CASSI_ERR_INSUFFICIENT_SAMPLE;
    case ErrorCode::kParse: return CASSI_ERR_PARSE;
    case ErrorCode::kIo: return CASSI_ERR_IO;
    case ErrorCode::kNotFound: return CASSI_ERR_NOT_FOUND;
  }
  return CASSI_ERR_INTERNAL;
}

cassi_status fail(cassi_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

/// Runs `body`, translating exceptions into status codes.
template <typename F>
cassi_status guarded(F&& body) {
  try {
    body();
    return CASSI_OK;
  } catch (const cassi::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CASSI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CASSI_ERR_INTERNAL, e.what());
  }
}

#define CASSI_REQUIRE(cond)                                                   \
  do {                                                                        \
    if (!(cond)) return fail(CASSI_ERR_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

cassi::ClassifierParams to_params(const cassi_classifier_params& p) {
  cassi::ClassifierParams out;
  out.block_size = p.block_size;
  out.threshold = p.threshold;
  out.alpha = p.alpha;
  if (p.mu >= 0.0) out.mu = p.mu;
  out.refresh_every = p.refresh_every;
  out.merge_theta = p.merge_theta;
  if (p.gate_alpha > 0.0) out.gate_alpha = p.gate_alpha;
  return out;
}

cassi::AuditOptions to_options(const cassi_audit_options* o) {
  cassi::AuditOptions out;
  if (!o) return out;
  out.threshold_rad = o->threshold_rad;
  out.sam_edges = cassi::uniform_edges(0.0, o->sam_max, o->sam_bins);
  out.rmse_edges = cassi::uniform_edges(0.0, o->rmse_max, o->rmse_bins);
  return out;
}

void write_histogram_rows(const std::string& path, const cassi::AuditReport& report, bool rmse) {
  using cassi::format_number;
  std::ostringstream os;
  os << "class";
  if (!report.classes.empty()) {
    const auto& edges = rmse ? report.classes.front().rmse_hist.edges : report.classes.front().sam_hist.edges;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      os << ",[" << format_number(edges[i]) << ';' << format_number(edges[i + 1])
         << (i + 2 == edges.size() ? ']' : ')');
    }
  }
  os << '\n';
  for (const auto& c : report.classes) {
    os << c.name;
    for (double p : (rmse ? c.rmse_hist : c.sam_hist).probabilities) os << ',' << format_number(p);
    os << '\n';
  }
  cassi::io::write_text(path, os.str());
}

}  // namespace

extern "C" {

const char* cassi_version(void) { return CASSI_VERSION_STRING; }

const char* cassi_last_error(void) { return last_error.c_str(); }

const char* cassi_status_name(cassi_status status) {
  switch (status) {
    case CASSI_OK: return "ok";
    case CASSI_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CASSI_ERR_INVALID_PARAMETER: return "invalid-parameter";
    case CASSI_ERR_DEGENERATE: return "degenerate";
    case CASSI_ERR_RANK_DEFICIENT: return "rank-deficient";
    case CASSI_ERR_INSUFFICIENT_SAMPLE: return "insufficient-sample";
    case CASSI_ERR_PARSE: return "parse";
    case CASSI_ERR_IO: return "io";
    case CASSI_ERR_NOT_FOUND: return "not-found";
    case CASSI_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

// ---- cubes

cassi_status cassi_cube_create(size_t rows, size_t cols, size_t bands, const double* data, cassi_cube** out) {
  CASSI_REQUIRE(data && out);
  return guarded([&] {
    std::vector<double> values(data, data + rows * cols * bands);
    *out = new cassi_cube{cassi::HyperCube(rows, cols, bands, std::move(values))};
  });
}

void cassi_cube_free(cassi_cube* cube) { delete cube; }

cassi_status cassi_cube_dims(const cassi_cube* cube, size_t* rows, size_t* cols, size_t* bands) {
  CASSI_REQUIRE(cube);
  if (rows) *rows = cube->value.rows();
  if (cols) *cols = cube->value.cols();
  if (bands) *bands = cube->value.bands();
  return CASSI_OK;
}

cassi_status cassi_cube_copy_data(const cassi_cube* cube, double* out, size_t capacity) {
  CASSI_REQUIRE(cube && out);
  const auto data = cube->value.data();
  if (capacity < data.size()) {
    return fail(CASSI_ERR_INVALID_ARGUMENT, "capacity " + std::to_string(capacity) + " < " + std::to_string(data.size()));
  }
  std::copy(data.begin(), data.end(), out);
  return CASSI_OK;
}

cassi_status cassi_cube_read_envi(const char* header_path, double divisor, cassi_cube** out) {
  CASSI_REQUIRE(header_path && out);
  return guarded([&] {
    std::optional<double> d;
    if (divisor > 0.0) d = divisor;
    *out = new cassi_cube{cassi::io::read_envi_file(header_path, d)};
  });
}

cassi_status cassi_cube_write_envi(const cassi_cube* cube, const char* header_path) {
  CASSI_REQUIRE(cube && header_path);
  return guarded([&] { cassi::io::write_envi_file(header_path, cube->value); });
}

// ---- scenes

void cassi_scene_params_default(cassi_scene_params* params) {
  if (!params) return;
  const cassi::SceneSpec spec;
  params->rows = spec.rows;
  params->cols = spec.cols;
  params->bands = spec.bands;
  params->class_count = spec.class_count;
  params->geometry = CASSI_GEOMETRY_RECTANGULAR;
  params->voronoi_seeds = spec.voronoi_seeds;
  params->intensity_spread = spec.intensity_spread;
  params->outlier_rate = spec.outlier_rate;
  params->min_class_angle = spec.min_class_angle;
  params->seed = spec.rng_seed;
}

cassi_status cassi_scene_generate(const cassi_scene_params* params, cassi_cube** cube, cassi_labels** truth,
                                  cassi_spectra** references, cassi_labels** outliers) {
  CASSI_REQUIRE(params);
  return guarded([&] {
    cassi::SceneSpec spec;
    spec.rows = params->rows;
    spec.cols = params->cols;
    spec.bands = params->bands;
    spec.class_count = params->class_count;
    spec.geometry = params->geometry == CASSI_GEOMETRY_VORONOI ? cassi::SceneGeometry::kVoronoi
                                                               : cassi::SceneGeometry::kRectangular;
    spec.voronoi_seeds = params->voronoi_seeds;
    spec.intensity_spread = params->intensity_spread;
    spec.outlier_rate = params->outlier_rate;
    spec.min_class_angle = params->min_class_angle;
    spec.rng_seed = params->seed;
    cassi::SyntheticScene scene = cassi::synth_scene(spec);

    cassi::LabelMap altered(spec.rows, spec.cols, 0);
    for (const cassi::Pixel& p : scene.outliers) altered.at(p.row, p.col) = 1;
    auto refs = std::make_unique<cassi_spectra>();
    for (std::size_t k = 0; k < scene.references.size(); ++k) refs->names.push_back("class_" + std::to_string(k + 1));
    refs->values = scene.references;

    if (cube) *cube = new cassi_cube{std::move(scene.cube)};
    if (truth) *truth = new cassi_labels{std::move(scene.labels)};
    if (references) *references = refs.release();
    if (outliers) *outliers = new cassi_labels{std::move(altered)};
  });
}

// ---- masks

cassi_status cassi_masks_generate(size_t rows, size_t cols, size_t bands, size_t count, double open_fraction,
                                  uint64_t seed, cassi_masks** out) {
  CASSI_REQUIRE(out);
  return guarded([&] { *out = new cassi_masks{cassi::gen_masks(rows, cols, bands, count, open_fraction, seed)}; });
}

cassi_status cassi_masks_all_open(size_t rows, size_t cols, size_t bands, size_t count, cassi_masks** out) {
  CASSI_REQUIRE(out);
  return guarded([&] { *out = new cassi_masks{cassi::MaskSet::all_open(rows, cols, bands, count)}; });
}

void cassi_masks_free(cassi_masks* masks) { delete masks; }

cassi_status cassi_masks_dims(const cassi_masks* masks, size_t* rows, size_t* cols, size_t* bands, size_t* count) {
  CASSI_REQUIRE(masks);
  if (rows) *rows = masks->value.rows();
  if (cols) *cols = masks->value.cols();
  if (bands) *bands = masks->value.bands();
  if (count) *count = masks->value.count();
  return CASSI_OK;
}

cassi_status cassi_masks_get(const cassi_masks* masks, size_t acquisition, size_t row, size_t col, int* open) {
  CASSI_REQUIRE(masks && open);
  const auto& m = masks->value;
  if (acquisition >= m.count() || row >= m.rows() || col >= m.width()) {
    return fail(CASSI_ERR_INVALID_ARGUMENT, "mask index out of range");
  }
  *open = m.at(acquisition, row, col);
  return CASSI_OK;
}

cassi_status cassi_masks_read(const char* dir, cassi_masks** out) {
  CASSI_REQUIRE(dir && out);
  return guarded([&] { *out = new cassi_masks{cassi::io::read_masks(dir)}; });
}

cassi_status cassi_masks_write(const cassi_masks* masks, const char* dir) {
  CASSI_REQUIRE(masks && dir);
  return guarded([&] { cassi::io::write_masks(dir, masks->value); });
}

// ---- acquisitions

cassi_status cassi_acquire(const cassi_cube* cube, const cassi_masks* masks, double noise_sigma, uint64_t seed,
                           cassi_acquisition** out) {
  CASSI_REQUIRE(cube && masks && out);
  return guarded([&] { *out = new cassi_acquisition{cassi::acquire(cube->value, masks->value, noise_sigma, seed)}; });
}

cassi_status cassi_noise_sigma_for_snr(const cassi_cube* cube, const cassi_masks* masks, double snr_db,
                                       double* sigma) {
  CASSI_REQUIRE(cube && masks && sigma);
  return guarded([&] { *sigma = cassi::noise_sigma_for_snr(cube->value, masks->value, snr_db); });
}

void cassi_acquisition_free(cassi_acquisition* acq) { delete acq; }

cassi_status cassi_acquisition_dims(const cassi_acquisition* acq, size_t* rows, size_t* cols, size_t* count) {
  CASSI_REQUIRE(acq);
  if (rows) *rows = acq->value.rows;
  if (cols) *cols = acq->value.cols;
  if (count) *count = acq->value.count;
  return CASSI_OK;
}

cassi_status cassi_acquisition_coded(const cassi_acquisition* acq, size_t row, size_t col, size_t acquisition,
                                     double* value) {
  CASSI_REQUIRE(acq && value);
  const auto& a = acq->value;
  if (row >= a.rows || col >= a.cols || acquisition >= a.count) {
    return fail(CASSI_ERR_INVALID_ARGUMENT, "acquisition index out of range");
  }
  *value = a.coded_at(row, col, acquisition);
  return CASSI_OK;
}

cassi_status cassi_acquisition_pan(const cassi_acquisition* acq, size_t row, size_t col, double* value) {
  CASSI_REQUIRE(acq && value);
  if (row >= acq->value.rows || col >= acq->value.cols) return fail(CASSI_ERR_INVALID_ARGUMENT, "pixel out of range");
  *value = acq->value.pan_at(row, col);
  return CASSI_OK;
}

cassi_status cassi_acquisition_read(const char* dir, cassi_acquisition** out) {
  CASSI_REQUIRE(dir && out);
  return guarded([&] { *out = new cassi_acquisition{cassi::io::read_acquisition(dir)}; });
}

cassi_status cassi_acquisition_write(const cassi_acquisition* acq, const char* dir) {
  CASSI_REQUIRE(acq && dir);
  return guarded([&] { cassi::io::write_acquisition(dir, acq->value); });
}

// ---- labels

cassi_status cassi_labels_create(size_t rows, size_t cols, const int32_t* values, cassi_labels** out) {
  CASSI_REQUIRE(values && out);
  return guarded([&] {
    *out = new cassi_labels{cassi::LabelMap(rows, cols, std::vector<int>(values, values + rows * cols))};
  });
}

void cassi_labels_free(cassi_labels* labels) { delete labels; }

cassi_status cassi_labels_dims(const cassi_labels* labels, size_t* rows, size_t* cols) {
  CASSI_REQUIRE(labels);
  if (rows) *rows = labels->value.rows();
  if (cols) *cols = labels->value.cols();
  return CASSI_OK;
}

cassi_status cassi_labels_get(const cassi_labels* labels, size_t row, size_t col, int32_t* value) {
  CASSI_REQUIRE(labels && value);
  if (row >= labels->value.rows() || col >= labels->value.cols()) {
    return fail(CASSI_ERR_INVALID_ARGUMENT, "pixel out of range");
  }
  *value = labels->value.at(row, col);
  return CASSI_OK;
}

cassi_status cassi_labels_region_count(const cassi_labels* labels, size_t* count) {
  CASSI_REQUIRE(labels && count);
  *count = labels->value.region_ids().size();
  return CASSI_OK;
}

cassi_status cassi_labels_read_csv(const char* path, int dataset_convention, cassi_labels** out) {
  CASSI_REQUIRE(path && out);
  return guarded([&] {
    cassi::LabelMap labels = cassi::io::read_label_csv(path);
    if (dataset_convention) labels = cassi::io::from_dataset_convention(labels);
    *out = new cassi_labels{std::move(labels)};
  });
}

cassi_status cassi_labels_write_csv(const cassi_labels* labels, const char* path) {
  CASSI_REQUIRE(labels && path);
  return guarded([&] { cassi::io::write_label_csv(path, labels->value); });
}

cassi_status cassi_labels_render_ppm(const cassi_labels* labels, const char* path) {
  CASSI_REQUIRE(labels && path);
  return guarded([&] { cassi::io::write_ppm(path, cassi::io::render_label_map(labels->value)); });
}

// ---- spectra

void cassi_spectra_free(cassi_spectra* spectra) { delete spectra; }

cassi_status cassi_spectra_count(const cassi_spectra* spectra, size_t* count, size_t* bands) {
  CASSI_REQUIRE(spectra);
  if (count) *count = spectra->values.size();
  if (bands) *bands = spectra->values.empty() ? 0 : spectra->values.front().size();
  return CASSI_OK;
}

cassi_status cassi_spectra_get(const cassi_spectra* spectra, size_t index, double* out, size_t capacity) {
  CASSI_REQUIRE(spectra && out);
  if (index >= spectra->values.size()) return fail(CASSI_ERR_INVALID_ARGUMENT, "spectrum index out of range");
  const auto& s = spectra->values[index];
  if (capacity < s.size()) return fail(CASSI_ERR_INVALID_ARGUMENT, "output buffer too small");
  std::copy(s.begin(), s.end(), out);
  return CASSI_OK;
}

cassi_status cassi_spectra_write_csv(const cassi_spectra* spectra, const char* path) {
  CASSI_REQUIRE(spectra && path);
  return guarded([&] { cassi::io::write_spectra_csv(path, spectra->names, spectra->values); });
}

// ---- classification

void cassi_classifier_params_default(cassi_classifier_params* params) {
  if (!params) return;
  const cassi::ClassifierParams d;
  params->block_size = d.block_size;
  params->threshold = d.threshold;
  params->alpha = d.alpha;
  params->mu = -1.0;
  params->refresh_every = d.refresh_every;
  params->merge_theta = d.merge_theta;
  params->gate_alpha = -1.0;
}

cassi_status cassi_classifier_params_check(const cassi_classifier_params* params, size_t bands, size_t acquisitions) {
  CASSI_REQUIRE(params);
  return guarded([&] { cassi::validate(to_params(*params), bands, acquisitions); });
}

cassi_status cassi_classify(const cassi_acquisition* acq, const cassi_masks* masks,
                            const cassi_classifier_params* params, const cassi_labels* roi, cassi_result** out) {
  CASSI_REQUIRE(acq && masks && params && out);
  return guarded([&] {
    *out = new cassi_result{cassi::classify(acq->value, masks->value, to_params(*params), roi ? &roi->value : nullptr)};
  });
}

void cassi_result_free(cassi_result* result) { delete result; }

cassi_status cassi_result_region_count(const cassi_result* result, size_t* count) {
  CASSI_REQUIRE(result && count);
  *count = result->value.models.size();
  return CASSI_OK;
}

cassi_status cassi_result_labels(const cassi_result* result, cassi_labels** out) {
  CASSI_REQUIRE(result && out);
  return guarded([&] { *out = new cassi_labels{result->value.labels}; });
}

cassi_status cassi_result_spectra(const cassi_result* result, cassi_spectra** out) {
  CASSI_REQUIRE(result && out);
  return guarded([&] {
    auto s = std::make_unique<cassi_spectra>();
    for (std::size_t k = 0; k < result->value.models.size(); ++k) {
      s->names.push_back("region_" + std::to_string(k + 1));
      s->values.push_back(result->value.models[k].spectrum);
    }
    *out = s.release();
  });
}

cassi_status cassi_result_write_diagnostics(const cassi_result* result, const char* path) {
  CASSI_REQUIRE(result && path);
  return guarded([&] {
    using cassi::format_number;
    std::ostringstream os;
    os << "id,size,gaussianity_stat,residual_rms,clamped_mass,mu\n";
    for (std::size_t k = 0; k < result->value.diagnostics.size(); ++k) {
      const auto& d = result->value.diagnostics[k];
      os << d.id << ',' << d.size << ',' << format_number(d.gaussianity_stat) << ',' << format_number(d.residual_rms)
         << ',' << format_number(d.clamped_mass) << ',' << format_number(result->value.models[k].mu) << '\n';
    }
    cassi::io::write_text(path, os.str());
  });
}

// ---- metrics and audits

cassi_status cassi_sam(const double* a, const double* b, size_t n, double* radians) {
  CASSI_REQUIRE(a && b && radians);
  return guarded([&] { *radians = cassi::sam({a, n}, {b, n}); });
}

cassi_status cassi_rmse(const double* a, const double* b, size_t n, double* value) {
  CASSI_REQUIRE(a && b && value);
  return guarded([&] { *value = cassi::rmse({a, n}, {b, n}); });
}

void cassi_audit_options_default(cassi_audit_options* options) {
  if (!options) return;
  options->threshold_rad = 0.1;
  options->sam_bins = 64;
  options->sam_max = 0.5;
  options->rmse_bins = 64;
  options->rmse_max = 0.5;
}

cassi_status cassi_audit_run(const cassi_cube* cube, const cassi_labels* labels, const cassi_audit_options* options,
                             cassi_audit** out) {
  CASSI_REQUIRE(cube && labels && out);
  return guarded([&] {
    auto a = std::make_unique<cassi_audit>();
    a->options = to_options(options);
    a->value = cassi::audit(cube->value, labels->value, a->options);
    a->labels.assign(labels->value.values().begin(), labels->value.values().end());
    *out = a.release();
  });
}

void cassi_audit_free(cassi_audit* audit) { delete audit; }

cassi_status cassi_audit_class_count(const cassi_audit* audit, size_t* count) {
  CASSI_REQUIRE(audit && count);
  *count = audit->value.classes.size();
  return CASSI_OK;
}

cassi_status cassi_audit_class(const cassi_audit* audit, size_t index, cassi_class_summary* out) {
  CASSI_REQUIRE(audit && out);
  if (index >= audit->value.classes.size()) return fail(CASSI_ERR_INVALID_ARGUMENT, "class index out of range");
  const auto& c = audit->value.classes[index];
  *out = {c.id, c.count, c.median_sam, c.mean_sam, c.exceedance, c.mean_rmse};
  return CASSI_OK;
}

cassi_status cassi_audit_mean_sam(const cassi_audit* audit, double* value) {
  CASSI_REQUIRE(audit && value);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < audit->labels.size(); ++i) {
    if (audit->labels[i] > 0) {
      sum += audit->value.sam_map[i];
      ++n;
    }
  }
  if (n == 0) return fail(CASSI_ERR_INVALID_ARGUMENT, "no labeled pixels");
  *value = sum / static_cast<double>(n);
  return CASSI_OK;
}

cassi_status cassi_audit_write_csv(const cassi_audit* audit, const char* path) {
  CASSI_REQUIRE(audit && path);
  return guarded([&] {
    std::ostringstream os;
    cassi::write_audit_csv(os, audit->value);
    cassi::io::write_text(path, os.str());
  });
}

cassi_status cassi_audit_write_histograms(const cassi_audit* audit, const char* sam_path, const char* rmse_path) {
  CASSI_REQUIRE(audit && sam_path && rmse_path);
  return guarded([&] {
    write_histogram_rows(sam_path, audit->value, false);
    write_histogram_rows(rmse_path, audit->value, true);
  });
}

cassi_status cassi_audit_render_sam_map(const cassi_audit* audit, double vmax, const char* path) {
  CASSI_REQUIRE(audit && path);
  return guarded([&] {
    cassi::io::write_ppm(path, cassi::io::render_sam_map(audit->value.sam_map, audit->value.rows, audit->value.cols, vmax));
  });
}

cassi_status cassi_audit_medians(const cassi_audit* audit, cassi_spectra** out) {
  CASSI_REQUIRE(audit && out);
  return guarded([&] {
    auto s = std::make_unique<cassi_spectra>();
    for (const auto& c : audit->value.classes) {
      s->names.push_back(c.name);
      s->values.push_back(c.median);
    }
    *out = s.release();
  });
}

cassi_status cassi_sweep_run(const cassi_cube* cube, const cassi_masks* masks, const cassi_acquisition* acq,
                             const double* t_values, size_t t_count, const cassi_labels* reference,
                             const cassi_classifier_params* params, const cassi_audit_options* options,
                             cassi_sweep** out) {
  CASSI_REQUIRE(cube && masks && acq && t_values && reference && params && out);
  return guarded([&] {
    *out = new cassi_sweep{cassi::sweep_histograms(cube->value, masks->value, acq->value, {t_values, t_count},
                                                   reference->value, to_params(*params), to_options(options))};
  });
}

void cassi_sweep_free(cassi_sweep* sweep) { delete sweep; }

cassi_status cassi_sweep_shape(const cassi_sweep* sweep, size_t* rows, size_t* sam_bins, size_t* rmse_bins) {
  CASSI_REQUIRE(sweep);
  if (rows) *rows = sweep->value.sam.rows.size();
  if (sam_bins) *sam_bins = sweep->value.sam.edges.size() - 1;
  if (rmse_bins) *rmse_bins = sweep->value.rmse.edges.size() - 1;
  return CASSI_OK;
}

cassi_status cassi_sweep_row_mean(const cassi_sweep* sweep, int rmse, size_t row, double* value) {
  CASSI_REQUIRE(sweep && value);
  const auto& grid = rmse ? sweep->value.rmse : sweep->value.sam;
  if (row >= grid.row_means.size()) return fail(CASSI_ERR_INVALID_ARGUMENT, "row out of range");
  *value = grid.row_means[row];
  return CASSI_OK;
}

cassi_status cassi_sweep_region_count(const cassi_sweep* sweep, size_t row, size_t* count) {
  CASSI_REQUIRE(sweep && count);
  if (row >= sweep->value.region_counts.size()) return fail(CASSI_ERR_INVALID_ARGUMENT, "row out of range");
  *count = sweep->value.region_counts[row];
  return CASSI_OK;
}

cassi_status cassi_sweep_write_csv(const cassi_sweep* sweep, const char* sam_path, const char* rmse_path) {
  CASSI_REQUIRE(sweep && sam_path && rmse_path);
  return guarded([&] {
    std::ostringstream sam_os, rmse_os;
    cassi::write_grid_csv(sam_os, sweep->value.sam);
    cassi::write_grid_csv(rmse_os, sweep->value.rmse);
    cassi::io::write_text(sam_path, sam_os.str());
    cassi::io::write_text(rmse_path, rmse_os.str());
  });
}

cassi_status cassi_sweep_render_ppm(const cassi_sweep* sweep, const char* sam_path, const char* rmse_path) {
  CASSI_REQUIRE(sweep && sam_path && rmse_path);
  return guarded([&] {
    cassi::io::write_ppm(sam_path, cassi::io::render_grid(sweep->value.sam));
    cassi::io::write_ppm(rmse_path, cassi::io::render_grid(sweep->value.rmse));
  });
}

}  // extern "C"
