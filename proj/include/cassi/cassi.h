/* Copyright 2026 The cassiclass Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to cassiclass: coded-aperture acquisition simulation,
 * unsupervised region classification from coded data, and SAM/RMSE audits
 * of any labeling.
 *
 * Conventions:
 *  - Every function returns a cassi_status; CASSI_OK is zero.
 *  - Objects are opaque handles created through out-parameters and released
 *    with the matching *_free function. Free functions accept NULL.
 *  - On failure, cassi_last_error() describes the most recent error on the
 *    calling thread. The string stays valid until the next failing call on
 *    that thread.
 *  - Label maps use 0 for unclassified, -1 for outside the region of
 *    interest and k >= 1 for regions.
 */
#ifndef CASSI_CASSI_H
#define CASSI_CASSI_H

#include <stddef.h>
#include <stdint.h>

#if defined(CASSI_BUILDING_LIBRARY)
#define CASSI_API __attribute__((visibility("default")))
#else
#define CASSI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cassi_status {
  CASSI_OK = 0,
  CASSI_ERR_INVALID_ARGUMENT = 1,
  CASSI_ERR_INVALID_PARAMETER = 2,
  CASSI_ERR_DEGENERATE = 3,
  CASSI_ERR_RANK_DEFICIENT = 4,
  CASSI_ERR_INSUFFICIENT_SAMPLE = 5,
  CASSI_ERR_PARSE = 6,
  CASSI_ERR_IO = 7,
  CASSI_ERR_NOT_FOUND = 8,
  CASSI_ERR_INTERNAL = 9
} cassi_status;

typedef struct cassi_cube cassi_cube;
typedef struct cassi_masks cassi_masks;
typedef struct cassi_acquisition cassi_acquisition;
typedef struct cassi_labels cassi_labels;
typedef struct cassi_spectra cassi_spectra;
typedef struct cassi_result cassi_result;
typedef struct cassi_audit cassi_audit;
typedef struct cassi_sweep cassi_sweep;

CASSI_API const char* cassi_version(void);
CASSI_API const char* cassi_last_error(void);
CASSI_API const char* cassi_status_name(cassi_status status);

/* ---- cubes ---------------------------------------------------------------- */

/* `data` holds rows*cols*bands values ordered (r, c, w), w fastest. */
CASSI_API cassi_status cassi_cube_create(size_t rows, size_t cols, size_t bands, const double* data,
                                         cassi_cube** out);
CASSI_API void cassi_cube_free(cassi_cube* cube);
CASSI_API cassi_status cassi_cube_dims(const cassi_cube* cube, size_t* rows, size_t* cols, size_t* bands);
/* Copies rows*cols*bands values into `out`. */
CASSI_API cassi_status cassi_cube_copy_data(const cassi_cube* cube, double* out, size_t capacity);
/* `divisor` <= 0 selects the default (maximum value) for integer rasters. */
CASSI_API cassi_status cassi_cube_read_envi(const char* header_path, double divisor, cassi_cube** out);
CASSI_API cassi_status cassi_cube_write_envi(const cassi_cube* cube, const char* header_path);

/* ---- synthetic scenes ------------------------------------------------------- */

typedef enum cassi_geometry { CASSI_GEOMETRY_RECTANGULAR = 0, CASSI_GEOMETRY_VORONOI = 1 } cassi_geometry;

typedef struct cassi_scene_params {
  size_t rows, cols, bands;
  size_t class_count;
  cassi_geometry geometry;
  size_t voronoi_seeds;
  double intensity_spread;
  double outlier_rate;
  double min_class_angle;
  uint64_t seed;
} cassi_scene_params;

CASSI_API void cassi_scene_params_default(cassi_scene_params* params);
/* Any of the outputs may be NULL. `outliers` receives the altered pixels as a
 * label map with 1 at altered pixels and 0 elsewhere. */
CASSI_API cassi_status cassi_scene_generate(const cassi_scene_params* params, cassi_cube** cube,
                                            cassi_labels** truth, cassi_spectra** references,
                                            cassi_labels** outliers);

/* ---- masks ---------------------------------------------------------------- */

CASSI_API cassi_status cassi_masks_generate(size_t rows, size_t cols, size_t bands, size_t count,
                                            double open_fraction, uint64_t seed, cassi_masks** out);
CASSI_API cassi_status cassi_masks_all_open(size_t rows, size_t cols, size_t bands, size_t count,
                                            cassi_masks** out);
CASSI_API void cassi_masks_free(cassi_masks* masks);
CASSI_API cassi_status cassi_masks_dims(const cassi_masks* masks, size_t* rows, size_t* cols, size_t* bands,
                                        size_t* count);
CASSI_API cassi_status cassi_masks_get(const cassi_masks* masks, size_t acquisition, size_t row, size_t col,
                                       int* open);
CASSI_API cassi_status cassi_masks_read(const char* dir, cassi_masks** out);
CASSI_API cassi_status cassi_masks_write(const cassi_masks* masks, const char* dir);

/* ---- acquisitions ------------------------------------------------------------ */

CASSI_API cassi_status cassi_acquire(const cassi_cube* cube, const cassi_masks* masks, double noise_sigma,
                                     uint64_t seed, cassi_acquisition** out);
/* Noise sigma giving the requested SNR (dB) relative to the RMS coded signal. */
CASSI_API cassi_status cassi_noise_sigma_for_snr(const cassi_cube* cube, const cassi_masks* masks, double snr_db,
                                                 double* sigma);
CASSI_API void cassi_acquisition_free(cassi_acquisition* acq);
CASSI_API cassi_status cassi_acquisition_dims(const cassi_acquisition* acq, size_t* rows, size_t* cols,
                                              size_t* count);
CASSI_API cassi_status cassi_acquisition_coded(const cassi_acquisition* acq, size_t row, size_t col,
                                               size_t acquisition, double* value);
CASSI_API cassi_status cassi_acquisition_pan(const cassi_acquisition* acq, size_t row, size_t col, double* value);
CASSI_API cassi_status cassi_acquisition_read(const char* dir, cassi_acquisition** out);
CASSI_API cassi_status cassi_acquisition_write(const cassi_acquisition* acq, const char* dir);

/* ---- label maps ------------------------------------------------------------- */

CASSI_API cassi_status cassi_labels_create(size_t rows, size_t cols, const int32_t* values, cassi_labels** out);
CASSI_API void cassi_labels_free(cassi_labels* labels);
CASSI_API cassi_status cassi_labels_dims(const cassi_labels* labels, size_t* rows, size_t* cols);
CASSI_API cassi_status cassi_labels_get(const cassi_labels* labels, size_t row, size_t col, int32_t* value);
/* Number of distinct region ids (k >= 1). */
CASSI_API cassi_status cassi_labels_region_count(const cassi_labels* labels, size_t* count);
/* With `dataset_convention` nonzero, raw label 0 (unlabeled in public ground
 * truths) becomes -1. */
CASSI_API cassi_status cassi_labels_read_csv(const char* path, int dataset_convention, cassi_labels** out);
CASSI_API cassi_status cassi_labels_write_csv(const cassi_labels* labels, const char* path);
CASSI_API cassi_status cassi_labels_render_ppm(const cassi_labels* labels, const char* path);

/* ---- spectra lists ------------------------------------------------------------ */

CASSI_API void cassi_spectra_free(cassi_spectra* spectra);
CASSI_API cassi_status cassi_spectra_count(const cassi_spectra* spectra, size_t* count, size_t* bands);
CASSI_API cassi_status cassi_spectra_get(const cassi_spectra* spectra, size_t index, double* out, size_t capacity);
CASSI_API cassi_status cassi_spectra_write_csv(const cassi_spectra* spectra, const char* path);

/* ---- classification ------------------------------------------------------------ */

typedef struct cassi_classifier_params {
  size_t block_size;     /* P */
  double threshold;      /* T */
  double alpha;
  double mu;             /* < 0 selects the scale-relative default */
  size_t refresh_every;  /* G */
  double merge_theta;    /* radians */
  double gate_alpha;     /* <= 0 selects alpha / 10 */
} cassi_classifier_params;

CASSI_API void cassi_classifier_params_default(cassi_classifier_params* params);
/* Fails with CASSI_ERR_INVALID_PARAMETER when P^2 <= W/A, among others. */
CASSI_API cassi_status cassi_classifier_params_check(const cassi_classifier_params* params, size_t bands,
                                                     size_t acquisitions);
/* `roi` may be NULL; its -1 pixels are excluded. */
CASSI_API cassi_status cassi_classify(const cassi_acquisition* acq, const cassi_masks* masks,
                                      const cassi_classifier_params* params, const cassi_labels* roi,
                                      cassi_result** out);
CASSI_API void cassi_result_free(cassi_result* result);
CASSI_API cassi_status cassi_result_region_count(const cassi_result* result, size_t* count);
CASSI_API cassi_status cassi_result_labels(const cassi_result* result, cassi_labels** out);
/* Estimated (regularized) reference spectra, one per region. */
CASSI_API cassi_status cassi_result_spectra(const cassi_result* result, cassi_spectra** out);
/* CSV: id,size,gaussianity_stat,residual_rms,clamped_mass,mu */
CASSI_API cassi_status cassi_result_write_diagnostics(const cassi_result* result, const char* path);

/* ---- metrics and audits ---------------------------------------------------------- */

CASSI_API cassi_status cassi_sam(const double* a, const double* b, size_t n, double* radians);
CASSI_API cassi_status cassi_rmse(const double* a, const double* b, size_t n, double* value);

typedef struct cassi_audit_options {
  double threshold_rad;
  size_t sam_bins;
  double sam_max;
  size_t rmse_bins;
  double rmse_max;
} cassi_audit_options;

CASSI_API void cassi_audit_options_default(cassi_audit_options* options);

typedef struct cassi_class_summary {
  int32_t id;
  size_t count;
  double median_sam;
  double mean_sam;
  double exceedance;
  double mean_rmse;
} cassi_class_summary;

/* Requires the full cube. */
CASSI_API cassi_status cassi_audit_run(const cassi_cube* cube, const cassi_labels* labels,
                                       const cassi_audit_options* options, cassi_audit** out);
CASSI_API void cassi_audit_free(cassi_audit* audit);
CASSI_API cassi_status cassi_audit_class_count(const cassi_audit* audit, size_t* count);
CASSI_API cassi_status cassi_audit_class(const cassi_audit* audit, size_t index, cassi_class_summary* out);
/* Mean SAM to own-region median over every labeled pixel. */
CASSI_API cassi_status cassi_audit_mean_sam(const cassi_audit* audit, double* value);
CASSI_API cassi_status cassi_audit_write_csv(const cassi_audit* audit, const char* path);
/* Rows: one per class, bin probabilities. */
CASSI_API cassi_status cassi_audit_write_histograms(const cassi_audit* audit, const char* sam_path,
                                                    const char* rmse_path);
CASSI_API cassi_status cassi_audit_render_sam_map(const cassi_audit* audit, double vmax, const char* path);
/* Median spectra, one per class. */
CASSI_API cassi_status cassi_audit_medians(const cassi_audit* audit, cassi_spectra** out);

/* t_values must be descending. The reference labeling defines the region of
 * interest and supplies the last grid row. */
CASSI_API cassi_status cassi_sweep_run(const cassi_cube* cube, const cassi_masks* masks,
                                       const cassi_acquisition* acq, const double* t_values, size_t t_count,
                                       const cassi_labels* reference, const cassi_classifier_params* params,
                                       const cassi_audit_options* options, cassi_sweep** out);
CASSI_API void cassi_sweep_free(cassi_sweep* sweep);
/* Grid shape; rows = t_count + 1. */
CASSI_API cassi_status cassi_sweep_shape(const cassi_sweep* sweep, size_t* rows, size_t* sam_bins,
                                         size_t* rmse_bins);
CASSI_API cassi_status cassi_sweep_row_mean(const cassi_sweep* sweep, int rmse, size_t row, double* value);
CASSI_API cassi_status cassi_sweep_region_count(const cassi_sweep* sweep, size_t row, size_t* count);
CASSI_API cassi_status cassi_sweep_write_csv(const cassi_sweep* sweep, const char* sam_path, const char* rmse_path);
CASSI_API cassi_status cassi_sweep_render_ppm(const cassi_sweep* sweep, const char* sam_path, const char* rmse_path);

#ifdef __cplusplus
}
#endif

#endif /* CASSI_CASSI_H */
