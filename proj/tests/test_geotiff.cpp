// Copyright 2026 The covermap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "covermap/errors.hpp"
#include "covermap/geotiff.hpp"
#include "support.hpp"

using namespace covermap;
using testsupport::make_grid;
using testsupport::TempDir;

namespace {

// Independent fixture writer: builds TIFF bytes directly, with layout choices
// deliberately different from the production writer (IFD after the pixel
// data, SHORT dimension tags, optional tiling). Used to decode-check the
// reader against bytes it did not produce.
class FixtureTiff {
public:
    void u16(std::uint16_t v) {
        bytes.push_back(static_cast<std::uint8_t>(v));
        bytes.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        u16(static_cast<std::uint16_t>(v));
        u16(static_cast<std::uint16_t>(v >> 16));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    void entry(std::uint16_t tag, std::uint16_t type, std::uint32_t count,
               std::uint32_t value) {
        u16(tag);
        u16(type);
        u32(count);
        u32(value);
    }

    std::vector<std::uint8_t> bytes;
};

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

// 2x2 u8 image [1,2,3,4], nodata 255, origin (100, 200), 10 m pixels.
std::vector<std::uint8_t> fixture_2x2_striped() {
    FixtureTiff t;
    t.u16(0x4949);
    t.u16(42);
    t.u32(8 + 4 + 24 + 48 + 4); // IFD after: pixels, scale, tiepoint, nodata text
    const std::uint32_t pixels_at = 8;
    t.bytes.insert(t.bytes.end(), {1, 2, 3, 4});
    const std::uint32_t scale_at = static_cast<std::uint32_t>(t.bytes.size());
    t.f64(10);
    t.f64(10);
    t.f64(0);
    const std::uint32_t tie_at = static_cast<std::uint32_t>(t.bytes.size());
    t.f64(0);
    t.f64(0);
    t.f64(0);
    t.f64(100);
    t.f64(200);
    t.f64(0);
    const std::uint32_t nodata_at = static_cast<std::uint32_t>(t.bytes.size());
    t.bytes.insert(t.bytes.end(), {'2', '5', '5', 0});
    t.u16(11); // entry count
    t.entry(256, 3, 1, 2);
    t.entry(257, 3, 1, 2);
    t.entry(258, 3, 1, 8);
    t.entry(259, 3, 1, 1);
    t.entry(262, 3, 1, 1);
    t.entry(273, 4, 1, pixels_at);
    t.entry(277, 3, 1, 1);
    t.entry(279, 4, 1, 4);
    t.entry(33550, 12, 3, scale_at);
    t.entry(33922, 12, 6, tie_at);
    t.entry(42113, 2, 4, nodata_at);
    t.u32(0);
    return t.bytes;
}

// 20x10 u16 image, tiled 16x16 (2 tiles, padded edges), values row*100+col.
std::vector<std::uint8_t> fixture_tiled() {
    FixtureTiff t;
    t.u16(0x4949);
    t.u16(42);
    const std::uint32_t tile_bytes = 16 * 16 * 2;
    t.u32(8 + 2 * tile_bytes + 24 + 48 + 8); // IFD offset
    std::uint32_t tile_at[2];
    for (int tile = 0; tile < 2; ++tile) {
        tile_at[tile] = static_cast<std::uint32_t>(t.bytes.size());
        for (int row = 0; row < 16; ++row) {
            for (int col = 0; col < 16; ++col) {
                const int img_row = row;
                const int img_col = tile * 16 + col;
                const bool valid = img_row < 10 && img_col < 20;
                t.u16(valid ? static_cast<std::uint16_t>(img_row * 100 + img_col) : 0);
            }
        }
    }
    const std::uint32_t scale_at = static_cast<std::uint32_t>(t.bytes.size());
    t.f64(1);
    t.f64(1);
    t.f64(0);
    const std::uint32_t tie_at = static_cast<std::uint32_t>(t.bytes.size());
    t.f64(0);
    t.f64(0);
    t.f64(0);
    t.f64(0);
    t.f64(10);
    t.f64(0);
    const std::uint32_t offsets_at = static_cast<std::uint32_t>(t.bytes.size());
    t.u32(tile_at[0]);
    t.u32(tile_at[1]);
    t.u16(13);
    t.entry(256, 3, 1, 20);
    t.entry(257, 3, 1, 10);
    t.entry(258, 3, 1, 16);
    t.entry(259, 3, 1, 1);
    t.entry(262, 3, 1, 1);
    t.entry(277, 3, 1, 1);
    t.entry(322, 3, 1, 16);
    t.entry(323, 3, 1, 16);
    t.entry(324, 4, 2, offsets_at);
    t.entry(325, 4, 2, 0); // patched below: needs an offset to two counts
    t.entry(339, 3, 1, 1);
    t.entry(33550, 12, 3, scale_at);
    t.entry(33922, 12, 6, tie_at);
    t.u32(0);
    // Two LONG byte counts do not fit inline; append and patch the entry.
    const std::uint32_t counts_at = static_cast<std::uint32_t>(t.bytes.size());
    t.u32(tile_bytes);
    t.u32(tile_bytes);
    // Entry 325 is the 10th of 13; locate its value slot from the IFD start.
    const std::size_t ifd_at = t.bytes.size() - 8 - 2 - 13 * 12 - 4;
    const std::size_t value_slot = ifd_at + 2 + 9 * 12 + 8;
    for (int i = 0; i < 4; ++i) {
        t.bytes[value_slot + i] = static_cast<std::uint8_t>(counts_at >> (8 * i));
    }
    return t.bytes;
}

} // namespace

TEST_CASE("reader decodes an independently written 2x2 fixture") {
    TempDir dir("geotiff");
    const auto path = dir.path() / "fixture.tif";
    write_bytes(path, fixture_2x2_striped());
    const CategoricalRaster r = read_geotiff(path);
    CHECK(r.grid.width == 2);
    CHECK(r.grid.height == 2);
    CHECK(r.values == std::vector<std::int32_t>{1, 2, 3, 4});
    CHECK(r.nodata == 255);
    CHECK(r.grid.origin_x == doctest::Approx(100));
    CHECK(r.grid.origin_y == doctest::Approx(200));
    CHECK(r.grid.pixel_w == doctest::Approx(10));
    CHECK(r.grid.pixel_h == doctest::Approx(10));
}

TEST_CASE("reader decodes an independently written tiled u16 fixture") {
    TempDir dir("geotiff");
    const auto path = dir.path() / "tiled.tif";
    write_bytes(path, fixture_tiled());
    const CategoricalRaster r = read_geotiff(path);
    CHECK(r.grid.width == 20);
    CHECK(r.grid.height == 10);
    for (int row = 0; row < 10; ++row) {
        for (int col = 0; col < 20; ++col) {
            REQUIRE(r.at(row, col) == row * 100 + col);
        }
    }
}

TEST_CASE("write/read round trip across content shapes and compressions") {
    TempDir dir("geotiff");
    std::mt19937_64 rng(21);
    const std::vector<std::vector<std::int32_t>> class_sets = {
        {0, 1},                 // u8
        {0, 40, 200, 65000},    // u16
        {-3, 7, 100000},        // i32
    };
    int file_idx = 0;
    for (const auto& classes : class_sets) {
        for (const TiffCompression comp : {TiffCompression::None, TiffCompression::Deflate}) {
            for (const int rows_per_strip : {3, 256}) {
                const GridSpec grid = make_grid(13, 9, -50, 77, 0.25, 1.5, "EPSG:32736");
                CategoricalRaster r =
                    testsupport::random_raster(rng, grid, classes, classes.back() + 1, 0.07);
                const auto path = dir.path() / ("rt" + std::to_string(file_idx++) + ".tif");
                GeoTiffOptions options;
                options.compression = comp;
                options.rows_per_strip = rows_per_strip;
                write_geotiff(r, path, options);
                const CategoricalRaster back = read_geotiff(path);
                REQUIRE(back.values == r.values);
                REQUIRE(back.nodata == r.nodata);
                REQUIRE(back.grid == r.grid);
            }
        }
    }
}

TEST_CASE("round trip preserves an all-nodata raster") {
    TempDir dir("geotiff");
    CategoricalRaster r;
    r.grid = make_grid(5, 4);
    r.nodata = 255;
    r.values.assign(20, 255);
    const auto path = dir.path() / "nodata.tif";
    write_geotiff(r, path);
    CHECK(read_geotiff(path).values == r.values);
}

TEST_CASE("256x256 random binary mask round-trips bit-exact") {
    TempDir dir("geotiff");
    std::mt19937_64 rng(22);
    BinaryMask m = testsupport::random_mask(rng, make_grid(256, 256), 0.03);
    const auto path = dir.path() / "mask.tif";
    write_geotiff(m, path);
    const CategoricalRaster back = read_geotiff(path);
    REQUIRE(back.values.size() == m.values.size());
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        REQUIRE(back.values[i] == static_cast<std::int32_t>(m.values[i]));
    }
    CHECK(back.nodata == 255);
}

TEST_CASE("crs id round-trips, including non-EPSG strings") {
    TempDir dir("geotiff");
    for (const std::string crs : {"EPSG:32631", "EPSG:4326", "local-meter-grid", ""}) {
        CategoricalRaster r;
        r.grid = make_grid(2, 2, 0, 2, 1, 1, crs);
        r.nodata = -1;
        r.values = {1, 2, 3, 4};
        const auto path = dir.path() / ("crs_" + std::to_string(crs.size()) + ".tif");
        write_geotiff(r, path);
        CHECK(read_geotiff(path).grid.crs_id == crs);
    }
}

TEST_CASE("reader rejects what the subset does not cover") {
    TempDir dir("geotiff");

    // Multi-band: patch SamplesPerPixel in the 2x2 fixture to 3.
    auto bytes = fixture_2x2_striped();
    // entry 277 is the 7th entry; IFD sits after pixel+scale+tie+nodata data.
    const std::size_t ifd_at = 8 + 4 + 24 + 48 + 4;
    const std::size_t samples_value = ifd_at + 2 + 6 * 12 + 8;
    bytes[samples_value] = 3;
    const auto multiband = dir.path() / "multiband.tif";
    write_bytes(multiband, bytes);
    CHECK_THROWS_WITH_AS(read_geotiff(multiband),
                         doctest::Contains("unsupported band count"), IoError);

    const auto missing = dir.path() / "missing.tif";
    CHECK_THROWS_AS(read_geotiff(missing), IoError);

    const auto not_tiff = dir.path() / "not.tif";
    write_bytes(not_tiff, {'M', 'M', 0, 42});
    CHECK_THROWS_AS(read_geotiff(not_tiff), IoError);

    // No geotransform: drop the last three entries (scale, tiepoint, nodata).
    bytes = fixture_2x2_striped();
    std::vector<std::uint8_t> trimmed(bytes.begin(), bytes.begin() + ifd_at);
    FixtureTiff t;
    t.bytes = trimmed;
    t.u16(8);
    t.entry(256, 3, 1, 2);
    t.entry(257, 3, 1, 2);
    t.entry(258, 3, 1, 8);
    t.entry(259, 3, 1, 1);
    t.entry(262, 3, 1, 1);
    t.entry(273, 4, 1, 8);
    t.entry(277, 3, 1, 1);
    t.entry(279, 4, 1, 4);
    t.u32(0);
    const auto no_transform = dir.path() / "no_transform.tif";
    write_bytes(no_transform, t.bytes);
    CHECK_THROWS_WITH_AS(read_geotiff(no_transform),
                         doctest::Contains("missing geotransform"), IoError);
}

TEST_CASE("default nodata applies only when the file has no tag") {
    TempDir dir("geotiff");
    // Fixture without a GDAL_NODATA entry but with a geotransform.
    FixtureTiff t;
    t.u16(0x4949);
    t.u16(42);
    t.u32(8 + 4 + 24 + 48);
    t.bytes.insert(t.bytes.end(), {9, 8, 7, 6});
    const std::uint32_t scale_at = static_cast<std::uint32_t>(t.bytes.size());
    t.f64(1);
    t.f64(1);
    t.f64(0);
    const std::uint32_t tie_at = static_cast<std::uint32_t>(t.bytes.size());
    for (const double v : {0.0, 0.0, 0.0, 0.0, 2.0, 0.0}) t.f64(v);
    t.u16(10);
    t.entry(256, 3, 1, 2);
    t.entry(257, 3, 1, 2);
    t.entry(258, 3, 1, 8);
    t.entry(259, 3, 1, 1);
    t.entry(262, 3, 1, 1);
    t.entry(273, 4, 1, 8);
    t.entry(277, 3, 1, 1);
    t.entry(279, 4, 1, 4);
    t.entry(33550, 12, 3, scale_at);
    t.entry(33922, 12, 6, tie_at);
    t.u32(0);
    const auto path = dir.path() / "untagged.tif";
    write_bytes(path, t.bytes);
    CHECK(read_geotiff(path, 77).nodata == 77);
    CHECK(read_geotiff(path).nodata == std::numeric_limits<std::int32_t>::min());
}
