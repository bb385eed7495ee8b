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

#include "cassi/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cassi/error.hpp"

namespace cassi::io {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::kParse, msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::size_t parse_count(const std::string& value, const std::string& key, std::size_t offset) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    parse_error("ENVI header: bad integer '" + value + "' for '" + key + "' at byte " + std::to_string(offset));
  }
  return out;
}

double parse_double(std::string_view s, const std::string& where) {
  const std::string t = trim(s);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    parse_error(where + ": bad number '" + t + "'");
  }
  return out;
}

/// Splits "key = value" manifests; '#' starts a comment line.
std::map<std::string, std::string> parse_key_values(std::string_view text, const std::string& where) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) parse_error(where + ":" + std::to_string(line_no) + ": expected key = value");
    out[lower(trim(t.substr(0, eq)))] = trim(t.substr(eq + 1));
  }
  return out;
}

template <typename T>
T load_scalar(const std::uint8_t* p, bool swap) {
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), p, sizeof(T));
  if (swap) std::reverse(raw.begin(), raw.end());
  T out;
  std::memcpy(&out, raw.data(), sizeof(T));
  return out;
}

std::size_t raster_index(const EnviHeader& h, std::size_t r, std::size_t c, std::size_t w) {
  switch (h.interleave) {
    case Interleave::kBsq: return (w * h.lines + r) * h.samples + c;
    case Interleave::kBil: return (r * h.bands + w) * h.samples + c;
    case Interleave::kBip: return (r * h.samples + c) * h.bands + w;
  }
  return 0;
}

const char* interleave_name(Interleave i) {
  switch (i) {
    case Interleave::kBsq: return "bsq";
    case Interleave::kBil: return "bil";
    case Interleave::kBip: return "bip";
  }
  return "bsq";
}

}  // namespace

std::size_t bytes_per_sample(int data_type) {
  switch (data_type) {
    case 4: return 4;
    case 5: return 8;
    case 12: return 2;
    default: parse_error("ENVI: unsupported data type " + std::to_string(data_type) + " (supported: 4, 5, 12)");
  }
}

EnviHeader parse_envi_header(std::string_view text) {
  EnviHeader h;
  std::size_t pos = 0;
  bool saw_magic = false;
  bool saw_samples = false, saw_lines = false, saw_bands = false;
  while (pos < text.size()) {
    const std::size_t line_start = pos;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (!saw_magic) {
      if (line != "ENVI") parse_error("ENVI header: missing 'ENVI' magic at byte " + std::to_string(line_start));
      saw_magic = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      parse_error("ENVI header: expected 'key = value' at byte " + std::to_string(line_start));
    }
    const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!value.empty() && value.front() == '{') {
      // Brace values may span several lines.
      while (value.find('}') == std::string::npos) {
        if (pos >= text.size()) parse_error("ENVI header: unterminated '{' for '" + key + "' at byte " +
                                            std::to_string(line_start));
        std::size_t next = text.find('\n', pos);
        if (next == std::string_view::npos) next = text.size();
        value += " " + trim(text.substr(pos, next - pos));
        pos = next + 1;
      }
    }
    if (key == "samples") {
      h.samples = parse_count(value, key, line_start);
      saw_samples = true;
    } else if (key == "lines") {
      h.lines = parse_count(value, key, line_start);
      saw_lines = true;
    } else if (key == "bands") {
      h.bands = parse_count(value, key, line_start);
      saw_bands = true;
    } else if (key == "header offset") {
      h.header_offset = parse_count(value, key, line_start);
    } else if (key == "data type") {
      h.data_type = static_cast<int>(parse_count(value, key, line_start));
    } else if (key == "byte order") {
      h.byte_order = static_cast<int>(parse_count(value, key, line_start));
      if (h.byte_order > 1) parse_error("ENVI header: byte order must be 0 or 1 at byte " + std::to_string(line_start));
    } else if (key == "interleave") {
      const std::string v = lower(value);
      if (v == "bsq") h.interleave = Interleave::kBsq;
      else if (v == "bil") h.interleave = Interleave::kBil;
      else if (v == "bip") h.interleave = Interleave::kBip;
      else parse_error("ENVI header: unknown interleave '" + value + "' at byte " + std::to_string(line_start));
    } else {
      h.extra[key] = value;
    }
  }
  if (!saw_magic) parse_error("ENVI header: empty header");
  if (!saw_samples || !saw_lines || !saw_bands) parse_error("ENVI header: samples, lines and bands are required");
  if (h.samples == 0 || h.lines == 0 || h.bands == 0) parse_error("ENVI header: dimensions must be positive");
  bytes_per_sample(h.data_type);
  return h;
}

std::string format_envi_header(const EnviHeader& h) {
  std::ostringstream os;
  os << "ENVI\n"
     << "description = {cassiclass raster}\n"
     << "samples = " << h.samples << '\n'
     << "lines = " << h.lines << '\n'
     << "bands = " << h.bands << '\n'
     << "header offset = " << h.header_offset << '\n'
     << "file type = ENVI Standard\n"
     << "data type = " << h.data_type << '\n'
     << "interleave = " << interleave_name(h.interleave) << '\n'
     << "byte order = " << h.byte_order << '\n';
  for (const auto& [k, v] : h.extra) {
    if (k == "description" || k == "file type") continue;
    os << k << " = " << v << '\n';
  }
  return os.str();
}

HyperCube read_envi(std::string_view header_text, std::span<const std::uint8_t> data, std::optional<double> divisor) {
  const EnviHeader h = parse_envi_header(header_text);
  const std::size_t bps = bytes_per_sample(h.data_type);
  const std::size_t count = h.samples * h.lines * h.bands;
  const std::size_t expected = h.header_offset + count * bps;
  if (data.size() < expected) {
    throw Error(ErrorCode::kParse, "ENVI data truncated: expected " + std::to_string(expected) + " bytes, got " +
                                       std::to_string(data.size()) + " (short by " +
                                       std::to_string(expected - data.size()) + " at byte offset " +
                                       std::to_string(data.size()) + ")");
  }
  if (data.size() > expected) {
    throw Error(ErrorCode::kParse, "ENVI data too long: expected " + std::to_string(expected) + " bytes, got " +
                                       std::to_string(data.size()));
  }
  const bool file_big = h.byte_order == 1;
  const bool host_big = std::endian::native == std::endian::big;
  const bool swap = file_big != host_big;
  const std::uint8_t* base = data.data() + h.header_offset;

  std::vector<double> values(count);
  double max_value = 0.0;
  for (std::size_t r = 0; r < h.lines; ++r) {
    for (std::size_t c = 0; c < h.samples; ++c) {
      for (std::size_t w = 0; w < h.bands; ++w) {
        const std::uint8_t* p = base + raster_index(h, r, c, w) * bps;
        double v = 0.0;
        switch (h.data_type) {
          case 4: v = load_scalar<float>(p, swap); break;
          case 5: v = load_scalar<double>(p, swap); break;
          case 12: v = load_scalar<std::uint16_t>(p, swap); break;
        }
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kParse, "ENVI data: non-finite sample at byte offset " +
                                             std::to_string(h.header_offset + raster_index(h, r, c, w) * bps));
        }
        max_value = std::max(max_value, v);
        values[(r * h.samples + c) * h.bands + w] = v;
      }
    }
  }
  if (h.data_type == 12) {
    const double d = divisor ? *divisor : (max_value > 0.0 ? max_value : 1.0);
    if (!(d > 0.0)) throw Error(ErrorCode::kInvalidArgument, "read_envi: divisor must be positive");
    for (double& v : values) v /= d;
  }
  return HyperCube(h.lines, h.samples, h.bands, std::move(values));
}

EnviImage write_envi(const HyperCube& cube, Interleave interleave, const std::map<std::string, std::string>& extra) {
  EnviHeader h;
  h.samples = cube.cols();
  h.lines = cube.rows();
  h.bands = cube.bands();
  h.interleave = interleave;
  h.data_type = 5;
  h.byte_order = 0;
  h.extra = extra;
  EnviImage out;
  out.header = format_envi_header(h);
  out.data.resize(cube.data().size() * 8);
  const bool swap = std::endian::native == std::endian::big;
  for (std::size_t r = 0; r < cube.rows(); ++r) {
    for (std::size_t c = 0; c < cube.cols(); ++c) {
      for (std::size_t w = 0; w < cube.bands(); ++w) {
        std::array<std::uint8_t, 8> raw;
        const double v = cube.at(r, c, w);
        std::memcpy(raw.data(), &v, 8);
        if (swap) std::reverse(raw.begin(), raw.end());
        std::memcpy(out.data.data() + raster_index(h, r, c, w) * 8, raw.data(), 8);
      }
    }
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  const std::string s = read_text(path);
  return {s.begin(), s.end()};
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

namespace {

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

fs::path raster_path_for(const fs::path& header_path) {
  fs::path stem = header_path;
  stem.replace_extension();
  for (const char* ext : {"", ".img", ".raw", ".dat", ".bin"}) {
    fs::path candidate = stem;
    candidate += ext;
    if (candidate != header_path && fs::is_regular_file(candidate)) return candidate;
  }
  throw Error(ErrorCode::kNotFound, "no raster found next to " + header_path.string());
}

}  // namespace

HyperCube read_envi_file(const fs::path& header_path, std::optional<double> divisor, EnviHeader* header_out) {
  const std::string header = read_text(header_path);
  const std::vector<std::uint8_t> data = read_bytes(raster_path_for(header_path));
  try {
    if (header_out) *header_out = parse_envi_header(header);
    return read_envi(header, data, divisor);
  } catch (const Error& e) {
    throw Error(e.code(), header_path.string() + ": " + e.what());
  }
}

void write_envi_file(const fs::path& header_path, const HyperCube& cube, const std::map<std::string, std::string>& extra) {
  const EnviImage image = write_envi(cube, Interleave::kBsq, extra);
  fs::path raster = header_path;
  raster.replace_extension(".bin");
  write_text(header_path, image.header);
  write_bytes(raster, image.data);
}

LabelMap parse_label_csv(std::string_view text) {
  std::vector<int> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string line = trim(text.substr(pos, eol - pos));
    const std::size_t line_start = pos;
    pos = eol + 1;
    if (line.empty()) continue;
    std::size_t n = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      const std::string field = trim(std::string_view(line).substr(start, comma - start));
      int v = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        parse_error("label CSV: bad integer '" + field + "' on row " + std::to_string(rows + 1) + " (byte " +
                    std::to_string(line_start) + ")");
      }
      if (v < LabelMap::kOutside) parse_error("label CSV: label " + std::to_string(v) + " below -1");
      values.push_back(v);
      ++n;
      start = comma + 1;
    }
    if (rows == 0) cols = n;
    else if (n != cols) {
      parse_error("label CSV: row " + std::to_string(rows + 1) + " has " + std::to_string(n) + " values, expected " +
                  std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) parse_error("label CSV: empty");
  return LabelMap(rows, cols, std::move(values));
}

std::string format_label_csv(const LabelMap& labels) {
  std::string out;
  for (std::size_t r = 0; r < labels.rows(); ++r) {
    for (std::size_t c = 0; c < labels.cols(); ++c) {
      if (c) out += ',';
      out += std::to_string(labels.at(r, c));
    }
    out += '\n';
  }
  return out;
}

LabelMap read_label_csv(const fs::path& path) {
  try {
    return parse_label_csv(read_text(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw Error(e.code(), path.string() + ": " + e.what());
    throw;
  }
}

void write_label_csv(const fs::path& path, const LabelMap& labels) { write_text(path, format_label_csv(labels)); }

LabelMap from_dataset_convention(const LabelMap& raw) {
  std::vector<int> v(raw.values().begin(), raw.values().end());
  for (int& x : v) {
    if (x == 0) x = LabelMap::kOutside;
  }
  return LabelMap(raw.rows(), raw.cols(), std::move(v));
}

std::vector<std::uint8_t> pack_mask(const MaskSet& masks, std::size_t acquisition) {
  const std::size_t n = masks.rows() * masks.width();
  std::vector<std::uint8_t> out((n + 7) / 8, 0);
  for (std::size_t r = 0; r < masks.rows(); ++r) {
    for (std::size_t j = 0; j < masks.width(); ++j) {
      const std::size_t i = r * masks.width() + j;
      if (masks.at(acquisition, r, j)) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
  }
  return out;
}

namespace {

std::string mask_file_name(std::size_t a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "mask_%03zu.bin", a);
  return buf;
}

}  // namespace

void write_masks(const fs::path& dir, const MaskSet& masks) {
  std::ostringstream os;
  os << "# cassiclass mask set: packed bits, row-major over rows x width, MSB first\n"
     << "rows = " << masks.rows() << '\n'
     << "cols = " << masks.cols() << '\n'
     << "bands = " << masks.bands() << '\n'
     << "acquisitions = " << masks.count() << '\n'
     << "width = " << masks.width() << '\n'
     << "open_fraction = " << format_number(masks.nominal_open_fraction) << '\n'
     << "seed = " << masks.seed << '\n';
  for (std::size_t a = 0; a < masks.count(); ++a) {
    write_bytes(dir / mask_file_name(a), pack_mask(masks, a));
  }
  write_text(dir / "masks.txt", os.str());
}

MaskSet read_masks(const fs::path& dir) {
  const fs::path manifest = dir / "masks.txt";
  const auto kv = parse_key_values(read_text(manifest), manifest.string());
  auto need = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) parse_error(manifest.string() + ": missing '" + key + "'");
    return it->second;
  };
  const std::size_t rows = parse_count(need("rows"), "rows", 0);
  const std::size_t cols = parse_count(need("cols"), "cols", 0);
  const std::size_t bands = parse_count(need("bands"), "bands", 0);
  const std::size_t count = parse_count(need("acquisitions"), "acquisitions", 0);
  if (rows == 0 || cols == 0 || bands == 0 || count == 0) parse_error(manifest.string() + ": zero dimension");
  MaskSet masks(rows, cols, bands, count);
  if (kv.contains("width") && parse_count(kv.at("width"), "width", 0) != masks.width()) {
    parse_error(manifest.string() + ": width disagrees with cols + bands - 1");
  }
  masks.nominal_open_fraction = parse_double(need("open_fraction"), manifest.string());
  masks.seed = parse_count(need("seed"), "seed", 0);
  const std::size_t n = rows * masks.width();
  for (std::size_t a = 0; a < count; ++a) {
    const fs::path file = dir / mask_file_name(a);
    const std::vector<std::uint8_t> bytes = read_bytes(file);
    if (bytes.size() != (n + 7) / 8) {
      parse_error(file.string() + ": expected " + std::to_string((n + 7) / 8) + " bytes, got " +
                  std::to_string(bytes.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      masks.set(a, i / masks.width(), i % masks.width(), (bytes[i / 8] >> (7 - i % 8)) & 1u);
    }
  }
  return masks;
}

void write_acquisition(const fs::path& dir, const AcquisitionStack& acq) {
  const HyperCube coded(acq.rows, acq.cols, acq.count, acq.coded);
  const HyperCube pan(acq.rows, acq.cols, 1, acq.pan);
  write_envi_file(dir / "coded.hdr", coded, {{"noise sigma", format_number(acq.noise_sigma)}});
  write_envi_file(dir / "pan.hdr", pan);
}

AcquisitionStack read_acquisition(const fs::path& dir) {
  EnviHeader header;
  const HyperCube coded = read_envi_file(dir / "coded.hdr", std::nullopt, &header);
  const HyperCube pan = read_envi_file(dir / "pan.hdr");
  if (pan.rows() != coded.rows() || pan.cols() != coded.cols() || pan.bands() != 1) {
    parse_error(dir.string() + ": pan image does not match coded frames");
  }
  AcquisitionStack acq;
  acq.rows = coded.rows();
  acq.cols = coded.cols();
  acq.count = coded.bands();
  acq.coded.assign(coded.data().begin(), coded.data().end());
  acq.pan.assign(pan.data().begin(), pan.data().end());
  if (const auto it = header.extra.find("noise sigma"); it != header.extra.end()) {
    acq.noise_sigma = parse_double(it->second, (dir / "coded.hdr").string());
  }
  return acq;
}

std::string format_spectra_csv(const std::vector<std::string>& names, const std::vector<Spectrum>& spectra) {
  if (names.size() != spectra.size()) throw Error(ErrorCode::kInvalidArgument, "spectra CSV: one name per spectrum");
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  const std::size_t bands = spectra.empty() ? 0 : spectra.front().size();
  for (const Spectrum& s : spectra) {
    if (s.size() != bands) throw Error(ErrorCode::kInvalidArgument, "spectra CSV: spectra differ in length");
  }
  for (std::size_t w = 0; w < bands; ++w) {
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      if (i) out += ',';
      out += format_number(spectra[i][w]);
    }
    out += '\n';
  }
  return out;
}

void write_spectra_csv(const fs::path& path, const std::vector<std::string>& names, const std::vector<Spectrum>& spectra) {
  write_text(path, format_spectra_csv(names, spectra));
}

std::vector<Spectrum> read_spectra_csv(const fs::path& path, std::vector<std::string>* names) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) parse_error(path.string() + ": empty spectra file");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) header.push_back(trim(field));
  }
  std::vector<Spectrum> spectra(header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::size_t i = 0;
    while (std::getline(ls, field, ',')) {
      if (i >= spectra.size()) parse_error(path.string() + ": too many columns on row " + std::to_string(row));
      spectra[i++].push_back(parse_double(field, path.string() + ":" + std::to_string(row)));
    }
    if (i != spectra.size()) parse_error(path.string() + ": too few columns on row " + std::to_string(row));
  }
  if (names) *names = std::move(header);
  return spectra;
}

Rgb palette_color(int label) {
  if (label == LabelMap::kUnclassified) return {255, 255, 255};
  if (label < 0) return {0, 0, 0};
  // Golden-ratio hue stepping over 256 entries, fixed saturation and value.
  constexpr double kGolden = 0.618033988749894848;
  const auto index = static_cast<std::size_t>(label - 1) % 256;
  const double hue = std::fmod(static_cast<double>(index) * kGolden, 1.0) * 6.0;
  constexpr double kSat = 0.65;
  constexpr double kVal = 0.95;
  const int sector = static_cast<int>(hue) % 6;
  const double f = hue - std::floor(hue);
  const double p = kVal * (1.0 - kSat);
  const double q = kVal * (1.0 - kSat * f);
  const double t = kVal * (1.0 - kSat * (1.0 - f));
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = kVal, g = t, b = p; break;
    case 1: r = q, g = kVal, b = p; break;
    case 2: r = p, g = kVal, b = t; break;
    case 3: r = p, g = q, b = kVal; break;
    case 4: r = t, g = p, b = kVal; break;
    default: r = kVal, g = p, b = q; break;
  }
  auto to8 = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

Image render_label_map(const LabelMap& labels) {
  Image img{labels.cols(), labels.rows(), {}};
  img.pixels.reserve(labels.rows() * labels.cols());
  for (int v : labels.values()) img.pixels.push_back(palette_color(v));
  return img;
}

Rgb ramp_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [](double a, double b, double u) { return static_cast<std::uint8_t>(std::lround(a + (b - a) * u)); };
  if (t < 1.0 / 3.0) {
    const double u = 3.0 * t;
    return {lerp(64, 255, u), lerp(64, 0, u), lerp(64, 0, u)};
  }
  if (t < 2.0 / 3.0) {
    const double u = 3.0 * t - 1.0;
    return {255, lerp(0, 255, u), 0};
  }
  const double u = 3.0 * t - 2.0;
  return {255, 255, lerp(0, 255, u)};
}

Image render_sam_map(std::span<const double> values, std::size_t rows, std::size_t cols, double vmax) {
  if (values.size() != rows * cols) throw Error(ErrorCode::kInvalidArgument, "render_sam_map: size mismatch");
  if (!(vmax > 0.0)) throw Error(ErrorCode::kInvalidArgument, "render_sam_map: vmax must be positive");
  Image img{cols, rows, {}};
  img.pixels.reserve(values.size());
  for (double v : values) img.pixels.push_back(v < 0.0 ? Rgb{0, 0, 0} : ramp_color(v / vmax));
  return img;
}

Image render_grid(const HistogramGrid& grid, std::size_t cell) {
  const std::size_t bins = grid.edges.empty() ? 0 : grid.edges.size() - 1;
  double top = 0.0;
  for (const auto& row : grid.rows) {
    for (double p : row) top = std::max(top, p);
  }
  Image img{bins * cell, grid.rows.size() * cell, {}};
  img.pixels.resize(img.width * img.height);
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    for (std::size_t b = 0; b < bins; ++b) {
      const Rgb color = ramp_color(top > 0.0 ? grid.rows[r][b] / top : 0.0);
      for (std::size_t y = 0; y < cell; ++y) {
        for (std::size_t x = 0; x < cell; ++x) img.pixels[(r * cell + y) * img.width + b * cell + x] = color;
      }
    }
  }
  return img;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const Rgb& p : image.pixels) {
    out += static_cast<char>(p.r);
    out += static_cast<char>(p.g);
    out += static_cast<char>(p.b);
  }
  return out;
}

void write_ppm(const fs::path& path, const Image& image) { write_text(path, encode_ppm(image)); }

}  // namespace cassi::io
