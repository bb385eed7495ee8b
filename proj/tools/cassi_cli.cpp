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

// cassi: command-line front end. Links only against the C API.

#include <cassi/cassi.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using cassi_cli::ConfigError;
using cassi_cli::format_number;
using cassi_cli::RunConfig;

namespace {

// Process exit codes. Kept in sync with the --help footer.
enum Exit : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitMissingFile = 3,
  kExitParse = 4,
  kExitInvalidParameter = 5,
  kExitNumerical = 6,
};

const char* const kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  usage or configuration error (unknown key, bad value, conflicting blocks)\n"
    "  3  missing or unreadable file\n"
    "  4  input file parse failure\n"
    "  5  invalid parameter (e.g. P^2 <= W/A, dimension mismatch)\n"
    "  6  numerical failure (degenerate or rank-deficient data)\n"
    "Failures print one line on stderr:\n"
    "  error: command=<name> code=<code> exit=<n> message=\"<text>\"\n"
    "Environment:\n"
    "  CASSI_OUT_DIR  output directory; overridden by --out\n";

const char* const kDefaultOut = "cassi_out";

/// Failure carrying a process exit code and a short code name.
struct CommandError {
  int exit;
  std::string code;
  std::string message;
};

int exit_for(cassi_status status) {
  switch (status) {
    case CASSI_OK: return kExitOk;
    case CASSI_ERR_NOT_FOUND:
    case CASSI_ERR_IO: return kExitMissingFile;
    case CASSI_ERR_PARSE: return kExitParse;
    case CASSI_ERR_INVALID_ARGUMENT:
    case CASSI_ERR_INVALID_PARAMETER: return kExitInvalidParameter;
    case CASSI_ERR_DEGENERATE:
    case CASSI_ERR_RANK_DEFICIENT:
    case CASSI_ERR_INSUFFICIENT_SAMPLE: return kExitNumerical;
    case CASSI_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(cassi_status status, const std::string& what) {
  if (status == CASSI_OK) return;
  throw CommandError{exit_for(status), cassi_status_name(status), what + ": " + cassi_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Cube = std::unique_ptr<cassi_cube, Deleter<cassi_cube, cassi_cube_free>>;
using Masks = std::unique_ptr<cassi_masks, Deleter<cassi_masks, cassi_masks_free>>;
using Acquisition = std::unique_ptr<cassi_acquisition, Deleter<cassi_acquisition, cassi_acquisition_free>>;
using Labels = std::unique_ptr<cassi_labels, Deleter<cassi_labels, cassi_labels_free>>;
using Spectra = std::unique_ptr<cassi_spectra, Deleter<cassi_spectra, cassi_spectra_free>>;
using Result = std::unique_ptr<cassi_result, Deleter<cassi_result, cassi_result_free>>;
using Audit = std::unique_ptr<cassi_audit, Deleter<cassi_audit, cassi_audit_free>>;
using Sweep = std::unique_ptr<cassi_sweep, Deleter<cassi_sweep, cassi_sweep_free>>;

std::string path_str(const fs::path& p) { return p.string(); }

/// State shared by every subcommand after option parsing.
struct Context {
  RunConfig config;
  fs::path out;
};

fs::path out_dir(Context& ctx) {
  fs::create_directories(ctx.out);
  return ctx.out;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CommandError{kExitMissingFile, "io", "cannot write " + path_str(path)};
}

// The timestamp is the only line that differs between identical runs.
void write_manifest(Context& ctx, const std::string& name, const std::vector<std::string>& outputs) {
  std::ostringstream os;
  os << "# cassi run manifest\n";
  os << "command = " << name << "\n";
  os << "version = " << cassi_version() << "\n";
  os << "timestamp = " << timestamp_utc() << "\n";
  os << ctx.config.format();
  for (const auto& file : outputs) os << "output = " << file << "\n";
  write_file(out_dir(ctx) / ("manifest_" + name + ".txt"), os.str());
}

// ---- configuration accessors

cassi_scene_params scene_params(RunConfig& c) {
  cassi_scene_params p;
  cassi_scene_params_default(&p);
  p.rows = c.get_size("scene.rows", p.rows);
  p.cols = c.get_size("scene.cols", p.cols);
  p.bands = c.get_size("scene.bands", p.bands);
  p.class_count = c.get_size("scene.classes", p.class_count);
  const std::string geometry = c.get_string("scene.geometry", "rectangular");
  if (geometry == "rectangular") {
    p.geometry = CASSI_GEOMETRY_RECTANGULAR;
  } else if (geometry == "voronoi") {
    p.geometry = CASSI_GEOMETRY_VORONOI;
  } else {
    throw ConfigError("scene.geometry: expected rectangular or voronoi, got '" + geometry + "'");
  }
  p.voronoi_seeds = c.get_size("scene.voronoi_seeds", p.voronoi_seeds);
  p.intensity_spread = c.get_double("scene.delta", p.intensity_spread);
  p.outlier_rate = c.get_double("scene.outlier_rate", p.outlier_rate);
  p.min_class_angle = c.get_double("scene.min_class_angle", p.min_class_angle);
  p.seed = c.get_u64("scene.seed", p.seed);

  c.resolve("scene.rows", std::to_string(p.rows));
  c.resolve("scene.cols", std::to_string(p.cols));
  c.resolve("scene.bands", std::to_string(p.bands));
  c.resolve("scene.classes", std::to_string(p.class_count));
  c.resolve("scene.geometry", geometry);
  c.resolve("scene.voronoi_seeds", std::to_string(p.voronoi_seeds));
  c.resolve("scene.delta", format_number(p.intensity_spread));
  c.resolve("scene.outlier_rate", format_number(p.outlier_rate));
  c.resolve("scene.min_class_angle", format_number(p.min_class_angle));
  c.resolve("scene.seed", std::to_string(p.seed));
  return p;
}

cassi_classifier_params classifier_params(RunConfig& c, double threshold) {
  cassi_classifier_params p;
  cassi_classifier_params_default(&p);
  p.block_size = c.get_size("classifier.P", p.block_size);
  p.threshold = threshold;
  p.alpha = c.get_double("classifier.alpha", p.alpha);
  p.mu = c.get_double("classifier.mu", p.mu);
  p.refresh_every = c.get_size("classifier.refresh_G", p.refresh_every);
  p.merge_theta = c.get_double("classifier.merge_theta", p.merge_theta);
  p.gate_alpha = c.get_double("classifier.gate_alpha", p.gate_alpha);

  c.resolve("classifier.P", std::to_string(p.block_size));
  c.resolve("classifier.alpha", format_number(p.alpha));
  c.resolve("classifier.mu", p.mu < 0 ? "auto" : format_number(p.mu));
  c.resolve("classifier.refresh_G", std::to_string(p.refresh_every));
  c.resolve("classifier.merge_theta", format_number(p.merge_theta));
  c.resolve("classifier.gate_alpha", p.gate_alpha <= 0 ? "auto" : format_number(p.gate_alpha));
  return p;
}

cassi_audit_options audit_options(RunConfig& c) {
  cassi_audit_options o;
  cassi_audit_options_default(&o);
  o.threshold_rad = c.get_double("audit.threshold", o.threshold_rad);
  o.sam_bins = c.get_size("audit.sam_bins", o.sam_bins);
  o.sam_max = c.get_double("audit.sam_max", o.sam_max);
  o.rmse_bins = c.get_size("audit.rmse_bins", o.rmse_bins);
  o.rmse_max = c.get_double("audit.rmse_max", o.rmse_max);
  c.resolve("audit.threshold", format_number(o.threshold_rad));
  c.resolve("audit.sam_bins", std::to_string(o.sam_bins));
  c.resolve("audit.sam_max", format_number(o.sam_max));
  c.resolve("audit.rmse_bins", std::to_string(o.rmse_bins));
  c.resolve("audit.rmse_max", format_number(o.rmse_max));
  return o;
}

/// Input path: explicit config key, or the conventional file under --out.
fs::path input_path(Context& ctx, const std::string& key, const std::string& fallback_name) {
  if (ctx.config.has(key)) return ctx.config.get_string(key, "");
  const fs::path p = ctx.out / fallback_name;
  ctx.config.resolve(key, path_str(p));
  return p;
}

void require_exists(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) {
    throw CommandError{kExitMissingFile, "not-found", what + " not found: " + path_str(p)};
  }
}

Cube load_cube(Context& ctx) {
  if (ctx.config.has("paths.cube") && ctx.config.has_block("scene")) {
    throw ConfigError("paths.cube and the scene block are mutually exclusive");
  }
  const fs::path path = input_path(ctx, "paths.cube", "scene.hdr");
  require_exists(path, "cube header");
  const double divisor = ctx.config.get_double("input.divisor", 0.0);
  cassi_cube* cube = nullptr;
  check(cassi_cube_read_envi(path_str(path).c_str(), divisor, &cube), "reading cube " + path_str(path));
  return Cube(cube);
}

Labels load_labels(Context& ctx, const fs::path& path, const std::string& what) {
  require_exists(path, what);
  const bool dataset = ctx.config.get_bool("input.dataset_convention", false);
  ctx.config.resolve("input.dataset_convention", dataset ? "true" : "false");
  cassi_labels* labels = nullptr;
  check(cassi_labels_read_csv(path_str(path).c_str(), dataset ? 1 : 0, &labels), "reading " + path_str(path));
  return Labels(labels);
}

Masks load_masks(Context& ctx) {
  const fs::path dir = input_path(ctx, "paths.masks", "masks");
  require_exists(dir / "masks.txt", "mask manifest");
  cassi_masks* masks = nullptr;
  check(cassi_masks_read(path_str(dir).c_str(), &masks), "reading masks " + path_str(dir));
  return Masks(masks);
}

Acquisition load_acquisition(Context& ctx) {
  const fs::path dir = input_path(ctx, "paths.acquisition", "acquisition");
  require_exists(dir / "coded.hdr", "coded acquisition");
  cassi_acquisition* acq = nullptr;
  check(cassi_acquisition_read(path_str(dir).c_str(), &acq), "reading acquisition " + path_str(dir));
  return Acquisition(acq);
}

Masks generate_masks(Context& ctx, const cassi_cube* cube) {
  size_t rows = 0, cols = 0, bands = 0;
  check(cassi_cube_dims(cube, &rows, &cols, &bands), "cube dims");
  RunConfig& c = ctx.config;
  const size_t count = c.get_size("sim.acquisitions", 4);
  const double open = c.get_double("sim.open_fraction", 0.5);
  const uint64_t seed = c.get_u64("sim.seed", 1);
  c.resolve("sim.acquisitions", std::to_string(count));
  c.resolve("sim.open_fraction", format_number(open));
  c.resolve("sim.seed", std::to_string(seed));
  cassi_masks* masks = nullptr;
  check(cassi_masks_generate(rows, cols, bands, count, open, seed, &masks), "generating masks");
  return Masks(masks);
}

double single_threshold(RunConfig& c) {
  const std::vector<double> t = c.get_list("classifier.T", {0.2});
  if (t.size() != 1) throw ConfigError("classifier.T: classify takes a single value; use sweep for a list");
  c.resolve("classifier.T", format_number(t[0]));
  return t[0];
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

// ---- commands

void cmd_gen_scene(Context& ctx) {
  if (ctx.config.has("paths.cube")) throw ConfigError("gen-scene uses the scene block; remove paths.cube");
  cassi_scene_params params = scene_params(ctx.config);
  cassi_cube* cube_raw = nullptr;
  cassi_labels* truth_raw = nullptr;
  cassi_spectra* refs_raw = nullptr;
  cassi_labels* outliers_raw = nullptr;
  check(cassi_scene_generate(&params, &cube_raw, &truth_raw, &refs_raw, &outliers_raw), "generating scene");
  Cube cube(cube_raw);
  Labels truth(truth_raw), outliers(outliers_raw);
  Spectra refs(refs_raw);

  const fs::path out = out_dir(ctx);
  check(cassi_cube_write_envi(cube.get(), path_str(out / "scene.hdr").c_str()), "writing cube");
  check(cassi_labels_write_csv(truth.get(), path_str(out / "truth_labels.csv").c_str()), "writing labels");
  check(cassi_labels_render_ppm(truth.get(), path_str(out / "truth_labels.ppm").c_str()), "rendering labels");
  check(cassi_spectra_write_csv(refs.get(), path_str(out / "reference_spectra.csv").c_str()), "writing spectra");
  check(cassi_labels_write_csv(outliers.get(), path_str(out / "outliers.csv").c_str()), "writing outliers");
  write_manifest(ctx, "gen-scene",
                 {"scene.hdr", "scene.bin", "truth_labels.csv", "truth_labels.ppm", "reference_spectra.csv",
                  "outliers.csv"});
  std::cout << "gen-scene: " << params.rows << "x" << params.cols << "x" << params.bands << ", "
            << params.class_count << " classes -> " << path_str(out) << "\n";
}

void cmd_gen_masks(Context& ctx) {
  Cube cube = load_cube(ctx);
  Masks masks = generate_masks(ctx, cube.get());
  const fs::path dir = ctx.config.has("paths.masks") ? fs::path(ctx.config.get_string("paths.masks", ""))
                                                     : out_dir(ctx) / "masks";
  ctx.config.resolve("paths.masks", path_str(dir));
  check(cassi_masks_write(masks.get(), path_str(dir).c_str()), "writing masks");
  write_manifest(ctx, "gen-masks", {path_str(dir)});
  std::cout << "gen-masks: " << ctx.config.get_string("sim.acquisitions", "") << " masks -> " << path_str(dir) << "\n";
}

void cmd_simulate(Context& ctx) {
  RunConfig& c = ctx.config;
  if (c.has("sim.noise_sigma") && c.has("sim.snr_db")) {
    throw ConfigError("sim.noise_sigma and sim.snr_db are mutually exclusive");
  }
  const bool fixed_sigma = c.has("sim.noise_sigma");
  double sigma = fixed_sigma ? c.get_double("sim.noise_sigma", 0.0) : 0.0;
  const double snr = fixed_sigma ? 0.0 : c.get_double("sim.snr_db", 40.0);
  const uint64_t seed = c.get_u64("sim.seed", 1);
  Cube cube = load_cube(ctx);
  const fs::path mask_dir = input_path(ctx, "paths.masks", "masks");
  Masks masks;
  if (fs::exists(mask_dir / "masks.txt")) {
    masks = load_masks(ctx);
  } else {
    masks = generate_masks(ctx, cube.get());
    check(cassi_masks_write(masks.get(), path_str(mask_dir).c_str()), "writing masks");
  }
  if (!fixed_sigma) {
    c.resolve("sim.snr_db", format_number(snr));
    check(cassi_noise_sigma_for_snr(cube.get(), masks.get(), snr, &sigma), "computing noise level");
  }
  c.resolve("sim.noise_sigma", format_number(sigma));
  c.resolve("sim.seed", std::to_string(seed));

  cassi_acquisition* acq_raw = nullptr;
  check(cassi_acquire(cube.get(), masks.get(), sigma, seed, &acq_raw), "simulating acquisition");
  Acquisition acq(acq_raw);
  const fs::path dir = c.has("paths.acquisition") ? fs::path(c.get_string("paths.acquisition", ""))
                                                  : out_dir(ctx) / "acquisition";
  c.resolve("paths.acquisition", path_str(dir));
  check(cassi_acquisition_write(acq.get(), path_str(dir).c_str()), "writing acquisition");
  write_manifest(ctx, "simulate", {path_str(mask_dir), path_str(dir)});
  size_t count = 0;
  check(cassi_acquisition_dims(acq.get(), nullptr, nullptr, &count), "acquisition dims");
  std::cout << "simulate: " << count << " coded frames, noise sigma " << format_number(sigma) << " -> "
            << path_str(dir) << "\n";
}

void cmd_classify(Context& ctx) {
  RunConfig& c = ctx.config;
  cassi_classifier_params params = classifier_params(c, single_threshold(c));
  Acquisition acq = load_acquisition(ctx);
  Masks masks = load_masks(ctx);
  size_t bands = 0, count = 0;
  check(cassi_masks_dims(masks.get(), nullptr, nullptr, &bands, &count), "mask dims");
  check(cassi_classifier_params_check(&params, bands, count), "classifier block");

  Labels roi;
  if (c.has("paths.roi")) roi = load_labels(ctx, c.get_string("paths.roi", ""), "region of interest");
  cassi_result* result_raw = nullptr;
  check(cassi_classify(acq.get(), masks.get(), &params, roi.get(), &result_raw), "classifying");
  Result result(result_raw);

  cassi_labels* labels_raw = nullptr;
  check(cassi_result_labels(result.get(), &labels_raw), "result labels");
  Labels labels(labels_raw);
  cassi_spectra* spectra_raw = nullptr;
  check(cassi_result_spectra(result.get(), &spectra_raw), "result spectra");
  Spectra spectra(spectra_raw);

  const fs::path out = out_dir(ctx);
  check(cassi_labels_write_csv(labels.get(), path_str(out / "labels.csv").c_str()), "writing labels");
  check(cassi_labels_render_ppm(labels.get(), path_str(out / "labels.ppm").c_str()), "rendering labels");
  check(cassi_spectra_write_csv(spectra.get(), path_str(out / "region_spectra.csv").c_str()), "writing spectra");
  check(cassi_result_write_diagnostics(result.get(), path_str(out / "diagnostics.csv").c_str()),
        "writing diagnostics");
  write_manifest(ctx, "classify", {"labels.csv", "labels.ppm", "region_spectra.csv", "diagnostics.csv"});
  size_t regions = 0;
  check(cassi_result_region_count(result.get(), &regions), "region count");
  std::cout << "classify: " << regions << " regions at T=" << format_number(params.threshold) << " -> "
            << path_str(out) << "\n";
}

void cmd_audit(Context& ctx) {
  RunConfig& c = ctx.config;
  cassi_audit_options options = audit_options(c);
  const double vmax = c.get_double("audit.vmax", options.sam_max);
  Cube cube = load_cube(ctx);
  const fs::path label_path = input_path(ctx, "paths.labels", "labels.csv");
  Labels labels = load_labels(ctx, label_path, "label map");
  cassi_audit* audit_raw = nullptr;
  check(cassi_audit_run(cube.get(), labels.get(), &options, &audit_raw), "auditing");
  Audit audit(audit_raw);

  const std::string tag = stem_of(label_path);
  const fs::path out = out_dir(ctx);
  const std::string csv = "audit_" + tag + ".csv";
  const std::string sam_hist = "sam_hist_" + tag + ".csv";
  const std::string rmse_hist = "rmse_hist_" + tag + ".csv";
  const std::string map = "sam_map_" + tag + ".ppm";
  const std::string medians = "medians_" + tag + ".csv";
  c.resolve("audit.vmax", format_number(vmax));
  check(cassi_audit_write_csv(audit.get(), path_str(out / csv).c_str()), "writing audit");
  check(cassi_audit_write_histograms(audit.get(), path_str(out / sam_hist).c_str(),
                                     path_str(out / rmse_hist).c_str()),
        "writing histograms");
  check(cassi_audit_render_sam_map(audit.get(), vmax, path_str(out / map).c_str()), "rendering SAM map");
  cassi_spectra* medians_raw = nullptr;
  check(cassi_audit_medians(audit.get(), &medians_raw), "median spectra");
  Spectra median_spectra(medians_raw);
  check(cassi_spectra_write_csv(median_spectra.get(), path_str(out / medians).c_str()), "writing medians");
  write_manifest(ctx, "audit_" + tag, {csv, sam_hist, rmse_hist, map, medians});

  size_t classes = 0;
  check(cassi_audit_class_count(audit.get(), &classes), "class count");
  double mean_sam = 0.0;
  check(cassi_audit_mean_sam(audit.get(), &mean_sam), "mean SAM");
  std::cout << "audit: " << classes << " classes, mean SAM " << format_number(mean_sam) << " rad -> "
            << path_str(out / csv) << "\n";
}

void cmd_sweep(Context& ctx) {
  RunConfig& c = ctx.config;
  const std::vector<double> t = c.get_list("classifier.T", {0.2, 0.05});
  std::string listed;
  for (double v : t) listed += (listed.empty() ? "" : ", ") + format_number(v);
  c.resolve("classifier.T", listed);
  cassi_classifier_params params = classifier_params(c, t.front());
  cassi_audit_options options = audit_options(c);
  Cube cube = load_cube(ctx);
  Masks masks = load_masks(ctx);
  Acquisition acq = load_acquisition(ctx);
  Labels reference = load_labels(ctx, input_path(ctx, "paths.labels", "truth_labels.csv"), "reference labels");

  cassi_sweep* sweep_raw = nullptr;
  check(cassi_sweep_run(cube.get(), masks.get(), acq.get(), t.data(), t.size(), reference.get(), &params, &options,
                        &sweep_raw),
        "sweeping");
  Sweep sweep(sweep_raw);

  const fs::path out = out_dir(ctx);
  check(cassi_sweep_write_csv(sweep.get(), path_str(out / "sweep_sam.csv").c_str(),
                              path_str(out / "sweep_rmse.csv").c_str()),
        "writing sweep grids");
  check(cassi_sweep_render_ppm(sweep.get(), path_str(out / "sweep_sam.ppm").c_str(),
                               path_str(out / "sweep_rmse.ppm").c_str()),
        "rendering sweep grids");

  size_t rows = 0;
  check(cassi_sweep_shape(sweep.get(), &rows, nullptr, nullptr), "sweep shape");
  std::ostringstream summary;
  summary << "row,regions,mean_sam,mean_rmse\n";
  for (size_t i = 0; i < rows; ++i) {
    size_t regions = 0;
    double sam = 0.0, rmse = 0.0;
    check(cassi_sweep_region_count(sweep.get(), i, &regions), "sweep regions");
    check(cassi_sweep_row_mean(sweep.get(), 0, i, &sam), "sweep mean");
    check(cassi_sweep_row_mean(sweep.get(), 1, i, &rmse), "sweep mean");
    const std::string label = i < t.size() ? "T=" + format_number(t[i]) : "reference";
    summary << label << ',' << regions << ',' << format_number(sam) << ',' << format_number(rmse) << '\n';
  }
  write_file(out / "sweep_summary.csv", summary.str());
  write_manifest(ctx, "sweep",
                 {"sweep_sam.csv", "sweep_rmse.csv", "sweep_sam.ppm", "sweep_rmse.ppm", "sweep_summary.csv"});
  std::cout << "sweep: " << rows << " grid rows -> " << path_str(out) << "\n";
  std::cout << summary.str();
}

std::string quote(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out;
}

int report(const std::string& command, int exit, const std::string& code, const std::string& message) {
  std::cerr << "error: command=" << (command.empty() ? "none" : command) << " code=" << code << " exit=" << exit
            << " message=\"" << quote(message) << "\"\n";
  return exit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded-aperture hyperspectral simulation, classification and label auditing."};
  app.footer(kExitCodeHelp);
  app.set_version_flag("--version", std::string("cassi ") + cassi_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  app.add_option("--config", config_path, "Run configuration file (key = value lines)");
  app.add_option("--seed", seed, "Seed for scene.seed and sim.seed");
  app.add_option("--out", out_flag, "Output directory (overrides CASSI_OUT_DIR and paths.out)");
  app.add_option("--set", overrides, "Override one configuration entry, KEY=VALUE (repeatable)");

  struct Entry {
    const char* name;
    const char* help;
    void (*run)(Context&);
  };
  const Entry entries[] = {
      {"gen-scene", "Generate a synthetic labeled cube", cmd_gen_scene},
      {"gen-masks", "Generate random coded-aperture masks", cmd_gen_masks},
      {"simulate", "Simulate coded and panchromatic acquisitions", cmd_simulate},
      {"classify", "Classify pixels from the coded acquisitions", cmd_classify},
      {"audit", "SAM/RMSE audit of a label map against the cube", cmd_audit},
      {"sweep", "Histogram grids over a list of thresholds plus a reference labeling", cmd_sweep},
  };
  for (const Entry& e : entries) app.add_subcommand(e.name, e.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return report("", kExitUsage, "usage", e.what());
  }

  std::string command;
  void (*run)(Context&) = nullptr;
  for (const Entry& e : entries) {
    if (app.got_subcommand(e.name)) {
      command = e.name;
      run = e.run;
    }
  }

  try {
    Context ctx;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) return report(command, kExitMissingFile, "not-found", "config file not found: " + config_path);
      std::ostringstream text;
      text << in.rdbuf();
      ctx.config = RunConfig::parse(text.str(), config_path);
    }
    if (const char* env = std::getenv("CASSI_OUT_DIR"); env && *env) ctx.config.set("paths.out", env);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
      ctx.config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_flag.empty()) ctx.config.set("paths.out", out_flag);
    if (seed) {
      ctx.config.set("scene.seed", std::to_string(*seed));
      ctx.config.set("sim.seed", std::to_string(*seed));
    }
    ctx.config.resolve("paths.out", kDefaultOut);
    ctx.out = ctx.config.get_string("paths.out", kDefaultOut);
    run(ctx);
  } catch (const CommandError& e) {
    return report(command, e.exit, e.code, e.message);
  } catch (const ConfigError& e) {
    return report(command, kExitUsage, "config", e.what());
  } catch (const std::exception& e) {
    return report(command, kExitInternal, "internal", e.what());
  }
  return kExitOk;
}
