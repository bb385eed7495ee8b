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

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <set>

#include "cassi/error.hpp"
#include "cassi/forward_sim.hpp"
#include "oracles.hpp"

namespace cassi::io {
namespace {

using testing::random_cube;
using testing::scratch_dir;

Error error_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorCode::kIo, "none");
}

template <typename T>
void append(std::vector<std::uint8_t>& out, T value, bool big_endian = false) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if (big_endian) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

TEST(Envi, HandwrittenBsqFloatFile) {
  const std::string header =
      "ENVI\n"
      "description = {hand\n  written}\n"
      "samples = 2\nlines = 2\nbands = 3\n"
      "header offset = 0\nfile type = ENVI Standard\n"
      "data type = 4\ninterleave = bsq\nbyte order = 0\n"
      "wavelength = {400, 500,\n 600}\n";
  // Value at (r, c, w) is w + 0.25 * (2r + c); BSQ stores band planes.
  std::vector<std::uint8_t> data;
  for (int w = 0; w < 3; ++w)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) append(data, static_cast<float>(w + 0.25 * (2 * r + c)));
  EnviHeader parsed = parse_envi_header(header);
  EXPECT_EQ(parsed.samples, 2u);
  EXPECT_EQ(parsed.data_type, 4);
  EXPECT_EQ(parsed.extra.at("wavelength").find("600") != std::string::npos, true);
  const HyperCube cube = read_envi(header, data);
  ASSERT_EQ(cube.rows(), 2u);
  ASSERT_EQ(cube.cols(), 2u);
  ASSERT_EQ(cube.bands(), 3u);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t w = 0; w < 3; ++w)
        EXPECT_EQ(cube.at(r, c, w), static_cast<double>(w) + 0.25 * static_cast<double>(2 * r + c));
}

TEST(Envi, AllInterleavesDecodeIdentically) {
  const HyperCube cube = random_cube(3, 5, 4, 21);
  for (Interleave order : {Interleave::kBsq, Interleave::kBil, Interleave::kBip}) {
    const EnviImage image = write_envi(cube, order);
    EXPECT_TRUE(read_envi(image.header, image.data) == cube);
  }
  EXPECT_NE(write_envi(cube, Interleave::kBsq).data, write_envi(cube, Interleave::kBil).data);
}

TEST(Envi, BigEndianAndOffset) {
  const std::string header = "ENVI\nsamples = 1\nlines = 1\nbands = 2\ndata type = 5\nbyte order = 1\n"
                             "header offset = 3\ninterleave = bip\n";
  std::vector<std::uint8_t> data = {0xde, 0xad, 0xbe};
  append(data, 0.125, true);
  append(data, 0.75, true);
  const HyperCube cube = read_envi(header, data);
  EXPECT_EQ(cube.at(0, 0, 0), 0.125);
  EXPECT_EQ(cube.at(0, 0, 1), 0.75);
}

TEST(Envi, IntegerRastersAreRescaled) {
  const std::string header = "ENVI\nsamples = 2\nlines = 1\nbands = 1\ndata type = 12\n";
  std::vector<std::uint8_t> data;
  append<std::uint16_t>(data, 2000);
  append<std::uint16_t>(data, 8000);
  const HyperCube by_max = read_envi(header, data);
  EXPECT_EQ(by_max.at(0, 0, 0), 0.25);
  EXPECT_EQ(by_max.at(0, 1, 0), 1.0);
  const HyperCube by_divisor = read_envi(header, data, 10000.0);
  EXPECT_EQ(by_divisor.at(0, 1, 0), 0.8);
}

TEST(Envi, TruncationNamesExpectedAndActualSizes) {
  const HyperCube cube = random_cube(2, 2, 3, 1);
  EnviImage image = write_envi(cube);
  image.data.pop_back();
  const Error e = error_of([&] { read_envi(image.header, image.data); });
  EXPECT_EQ(e.code(), ErrorCode::kParse);
  EXPECT_NE(std::string(e.what()).find("expected 96"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("got 95"), std::string::npos) << e.what();
}

TEST(Envi, MalformedHeadersReportByteOffsets) {
  const Error magic = error_of([] { parse_envi_header("samples = 1\n"); });
  EXPECT_EQ(magic.code(), ErrorCode::kParse);
  EXPECT_NE(std::string(magic.what()).find("byte 0"), std::string::npos) << magic.what();

  const Error bad_int = error_of([] { parse_envi_header("ENVI\nsamples = x\nlines = 1\nbands = 1\n"); });
  EXPECT_NE(std::string(bad_int.what()).find("byte 5"), std::string::npos) << bad_int.what();

  const Error type = error_of([] {
    read_envi("ENVI\nsamples = 1\nlines = 1\nbands = 1\ndata type = 3\n", std::vector<std::uint8_t>(4));
  });
  EXPECT_EQ(type.code(), ErrorCode::kParse);
  EXPECT_NE(std::string(type.what()).find("data type 3"), std::string::npos) << type.what();

  EXPECT_EQ(error_of([] { parse_envi_header("ENVI\nsamples = 1\nlines = 1\nbands = 1\ndescription = {open\n"); }).code(),
            ErrorCode::kParse);
}

TEST(Envi, FileRoundtripIsBitIdentical) {
  const auto dir = scratch_dir("envi");
  const HyperCube cube = random_cube(7, 6, 5, 99);
  write_envi_file(dir / "cube.hdr", cube);
  EXPECT_TRUE(std::filesystem::exists(dir / "cube.bin"));
  EnviHeader header;
  const HyperCube back = read_envi_file(dir / "cube.hdr", std::nullopt, &header);
  EXPECT_TRUE(back == cube);
  EXPECT_EQ(header.interleave, Interleave::kBsq);
  const auto first = read_bytes(dir / "cube.bin");
  write_envi_file(dir / "cube.hdr", cube);
  EXPECT_EQ(read_bytes(dir / "cube.bin"), first);
}

TEST(Envi, MissingFilesAreNotFound) {
  const auto dir = scratch_dir("envi_missing");
  const Error e = error_of([&] { read_envi_file(dir / "absent.hdr"); });
  EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  EXPECT_NE(std::string(e.what()).find("absent.hdr"), std::string::npos);
  write_text(dir / "lonely.hdr", "ENVI\nsamples = 1\nlines = 1\nbands = 1\n");
  EXPECT_EQ(error_of([&] { read_envi_file(dir / "lonely.hdr"); }).code(), ErrorCode::kNotFound);
}

TEST(Labels, CsvRoundtripKeepsSentinels) {
  LabelMap labels(3, 4);
  labels.at(0, 0) = -1;
  labels.at(1, 2) = 7;
  labels.at(2, 3) = 2;
  const std::string text = format_label_csv(labels);
  EXPECT_EQ(text.substr(0, text.find('\n')), "-1,0,0,0");
  EXPECT_TRUE(parse_label_csv(text) == labels);
  const auto dir = scratch_dir("labels");
  write_label_csv(dir / "l.csv", labels);
  EXPECT_TRUE(read_label_csv(dir / "l.csv") == labels);
}

TEST(Labels, RaggedOrNonNumericCsvIsRejected) {
  EXPECT_EQ(error_of([] { parse_label_csv("1,2\n3\n"); }).code(), ErrorCode::kParse);
  EXPECT_EQ(error_of([] { parse_label_csv("1,a\n"); }).code(), ErrorCode::kParse);
}

TEST(Labels, DatasetConventionMapsZeroToOutside) {
  const LabelMap raw(1, 3, std::vector<int>{0, 3, 1});
  EXPECT_EQ(from_dataset_convention(raw).values()[0], LabelMap::kOutside);
  EXPECT_EQ(from_dataset_convention(raw).values()[1], 3);
}

TEST(Masks, ManifestRoundtrip) {
  const MaskSet masks = gen_masks(5, 6, 7, 3, 0.4, 1234);
  const auto dir = scratch_dir("masks");
  write_masks(dir, masks);
  const std::string manifest = read_text(dir / "masks.txt");
  for (const char* key : {"rows = 5", "cols = 6", "bands = 7", "acquisitions = 3", "open_fraction = 0.4",
                          "seed = 1234", "width = 12"}) {
    EXPECT_NE(manifest.find(key), std::string::npos) << key << "\n" << manifest;
  }
  const MaskSet back = read_masks(dir);
  EXPECT_TRUE(back == masks);
  EXPECT_EQ(back.nominal_open_fraction, 0.4);
  EXPECT_EQ(back.seed, 1234u);
}

TEST(Masks, BitsArePackedMostSignificantFirst) {
  MaskSet masks(1, 8, 2, 1);  // 9 columns
  masks.set(0, 0, 0, true);
  masks.set(0, 0, 8, true);
  EXPECT_EQ(pack_mask(masks, 0), (std::vector<std::uint8_t>{0x80, 0x80}));
}

TEST(Acquisition, Roundtrip) {
  const HyperCube cube = random_cube(4, 5, 6, 3);
  const MaskSet masks = gen_masks(4, 5, 6, 3, 0.5, 3);
  const AcquisitionStack acq = acquire(cube, masks, 0.01, 3);
  const auto dir = scratch_dir("acq");
  write_acquisition(dir, acq);
  EXPECT_TRUE(read_acquisition(dir) == acq);
}

TEST(Spectra, CsvRoundtrip) {
  const std::vector<std::string> names = {"a", "b"};
  const std::vector<Spectrum> spectra = {{0.1, 0.2, 1.0 / 3.0}, {1e-300, 0.5, 0.7}};
  const auto dir = scratch_dir("spectra");
  write_spectra_csv(dir / "s.csv", names, spectra);
  std::vector<std::string> back_names;
  EXPECT_EQ(read_spectra_csv(dir / "s.csv", &back_names), spectra);
  EXPECT_EQ(back_names, names);
  EXPECT_EQ(format_spectra_csv(names, spectra).substr(0, 15), "a,b\n0.1,1e-300\n");
}

TEST(Render, UnclassifiedMapIsWhite) {
  const Image image = render_label_map(LabelMap(3, 2));
  EXPECT_EQ(image.width, 2u);
  EXPECT_EQ(image.height, 3u);
  for (const Rgb& px : image.pixels) EXPECT_EQ(px, (Rgb{255, 255, 255}));
}

TEST(Render, PaletteIsDistinctAndStable) {
  EXPECT_EQ(palette_color(0), (Rgb{255, 255, 255}));
  EXPECT_EQ(palette_color(-1), (Rgb{0, 0, 0}));
  std::set<std::tuple<int, int, int>> seen;
  for (int k = 1; k <= 256; ++k) {
    const Rgb c = palette_color(k);
    seen.insert({c.r, c.g, c.b});
    EXPECT_EQ(c, palette_color(k));
    EXPECT_EQ(c, palette_color(k + 256));
  }
  EXPECT_GE(seen.size(), 250u);
  LabelMap labels(1, 2);
  labels.at(0, 0) = 1;
  labels.at(0, 1) = 2;
  const Image image = render_label_map(labels);
  EXPECT_NE(image.at(0, 0), image.at(0, 1));
}

TEST(Render, SamRampEndpoints) {
  EXPECT_EQ(ramp_color(0.0), (Rgb{64, 64, 64}));
  EXPECT_EQ(ramp_color(1.0), (Rgb{255, 255, 255}));
  const std::vector<double> values = {0.0, 0.5, 0.25, kNoValue};
  const Image image = render_sam_map(values, 2, 2, 0.5);
  EXPECT_EQ(image.at(0, 0), ramp_color(0.0));
  EXPECT_EQ(image.at(0, 1), ramp_color(1.0));
  EXPECT_EQ(image.at(1, 1), (Rgb{0, 0, 0}));
  const Image clipped = render_sam_map(std::vector<double>{2.0}, 1, 1, 0.5);
  EXPECT_EQ(clipped.at(0, 0), ramp_color(1.0));
}

TEST(Render, PpmEncoding) {
  Image image;
  image.width = 2;
  image.height = 1;
  image.pixels = {{1, 2, 3}, {4, 5, 6}};
  const std::string ppm = encode_ppm(image);
  EXPECT_EQ(ppm, std::string("P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06", 17));
}

TEST(Render, GridHasOneBandPerRow) {
  HistogramGrid grid;
  grid.t_values = {0.2};
  grid.edges = uniform_edges(0.0, 1.0, 4);
  grid.rows = {{1.0, 0.0, 0.0, 0.0}, {0.25, 0.25, 0.25, 0.25}};
  const Image image = render_grid(grid, 3);
  EXPECT_EQ(image.width, 12u);
  EXPECT_EQ(image.height, 6u);
  EXPECT_EQ(image.at(0, 0), ramp_color(1.0));
  EXPECT_EQ(image.at(0, 3), ramp_color(0.0));
}

}  // namespace
}  // namespace cassi::io
