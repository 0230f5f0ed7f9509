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

#include <random>

#include "covermap/errors.hpp"
#include "covermap/geojson.hpp"
#include "covermap/grid.hpp"
#include "covermap/textio.hpp"
#include "support.hpp"

using namespace covermap;
using testsupport::make_grid;
using testsupport::TempDir;

TEST_CASE("grid validation and pixel-center mapping") {
    GridSpec g = make_grid(4, 3, 10, 40, 2, 5);
    g.validate();
    CHECK(g.col_center_x(0) == doctest::Approx(11.0));
    CHECK(g.row_center_y(0) == doctest::Approx(37.5));
    CHECK(g.col_of_x(11.0) == 0);
    CHECK(g.row_of_y(37.5) == 0);
    CHECK(g.col_of_x(9.9) == -1);
    CHECK(g.row_of_y(40.1) == -1);

    GridSpec bad = g;
    bad.pixel_w = 0;
    CHECK_THROWS_AS(bad.validate(), ValueError);
    bad = g;
    bad.width = 0;
    CHECK_THROWS_AS(bad.validate(), ValueError);
}

TEST_CASE("resample_nearest identity and constant field") {
    std::mt19937_64 rng(7);
    const GridSpec grid = make_grid(6, 5);
    const CategoricalRaster src = testsupport::random_raster(rng, grid, {1, 2, 3}, -1, 0.1);

    const CategoricalRaster same = resample_nearest(src, grid);
    CHECK(same.values == src.values);

    CategoricalRaster one;
    one.grid = make_grid(1, 1, 0, 3, 3, 3);
    one.values = {7};
    one.nodata = -1;
    GridSpec target = make_grid(3, 3, 0, 3, 1, 1);
    const CategoricalRaster up = resample_nearest(one, target);
    CHECK(up.values == std::vector<std::int32_t>(9, 7));
}

TEST_CASE("resample_nearest duplicates 2x2 into blocks") {
    CategoricalRaster src;
    src.grid = make_grid(2, 2, 0, 2, 1, 1);
    src.values = {1, 2, 3, 4};
    src.nodata = -1;
    const GridSpec target = make_grid(4, 4, 0, 2, 0.5, 0.5);
    const CategoricalRaster out = resample_nearest(src, target);
    // Hand-enumerated nearest source centers per target pixel.
    const std::vector<std::int32_t> expected = {1, 1, 2, 2, 1, 1, 2, 2,
                                                3, 3, 4, 4, 3, 3, 4, 4};
    CHECK(out.values == expected);
}

TEST_CASE("resample_nearest marks outside-extent centers nodata and invents no codes") {
    std::mt19937_64 rng(8);
    const GridSpec grid = make_grid(4, 4, 0, 4, 1, 1);
    const CategoricalRaster src = testsupport::random_raster(rng, grid, {5, 9}, -1, 0.2);
    // Target extends one pixel beyond the source on every side.
    const GridSpec target = make_grid(6, 6, -1, 5, 1, 1);
    const CategoricalRaster out = resample_nearest(src, target);
    for (int row = 0; row < 6; ++row) {
        for (int col = 0; col < 6; ++col) {
            const std::int32_t v = out.at(row, col);
            if (row == 0 || row == 5 || col == 0 || col == 5) {
                CHECK(v == -1);
            } else {
                CHECK(v == src.at(row - 1, col - 1));
                CHECK((v == 5 || v == 9 || v == -1));
            }
        }
    }
    CHECK_THROWS_AS(resample_nearest(src, make_grid(2, 2, 0, 4, 1, 1, "EPSG:4326")),
                    GridMismatchError);
}

TEST_CASE("composing integer-factor nearest resamples equals the direct resample") {
    std::mt19937_64 rng(9);
    const GridSpec coarse = make_grid(5, 4, 0, 8, 2, 2);
    const CategoricalRaster src = testsupport::random_raster(rng, coarse, {0, 1, 2}, -1, 0.1);
    const GridSpec fine = make_grid(20, 16, 0, 8, 0.5, 0.5);   // 4x refinement
    const GridSpec middle = make_grid(10, 8, 0, 8, 1, 1);      // 2x refinement
    const CategoricalRaster direct = resample_nearest(src, fine);
    const CategoricalRaster staged = resample_nearest(resample_nearest(src, middle), fine);
    CHECK(direct.values == staged.values);
}

TEST_CASE("resample_mode aggregates by per-cell majority with ties to non-crop") {
    BinaryMask ones;
    ones.grid = make_grid(4, 4, 0, 4, 1, 1);
    ones.values.assign(16, 1);
    const BinaryMask down = resample_mode(ones, make_grid(2, 2, 0, 4, 2, 2));
    CHECK(down.values == std::vector<std::uint8_t>(4, 1));

    BinaryMask tie;
    tie.grid = make_grid(2, 2, 0, 2, 1, 1);
    tie.values = {1, 1, 0, 0};
    const BinaryMask cell = resample_mode(tie, make_grid(1, 1, 0, 2, 2, 2));
    CHECK(cell.values == std::vector<std::uint8_t>{0});
}

TEST_CASE("resample_mode matches a brute-force center-membership oracle") {
    std::mt19937_64 rng(10);
    for (int round = 0; round < 20; ++round) {
        const GridSpec src_grid = make_grid(10, 10, 0, 10, 1, 1);
        const BinaryMask src = testsupport::random_mask(rng, src_grid, 0.1);
        const GridSpec target = make_grid(5, 5, 0, 10, 2, 2);
        const BinaryMask out = resample_mode(src, target);
        for (int tr = 0; tr < 5; ++tr) {
            for (int tc = 0; tc < 5; ++tc) {
                // Oracle: scan every source center, classify by containment.
                std::uint64_t c0 = 0, c1 = 0;
                for (int r = 0; r < 10; ++r) {
                    for (int c = 0; c < 10; ++c) {
                        const double x = src_grid.col_center_x(c);
                        const double y = src_grid.row_center_y(r);
                        if (target.col_of_x(x) == tc && target.row_of_y(y) == tr) {
                            if (src.at(r, c) == 0) ++c0;
                            if (src.at(r, c) == 1) ++c1;
                        }
                    }
                }
                const std::uint8_t want =
                    (c0 + c1 == 0) ? src.nodata : static_cast<std::uint8_t>(c1 > c0);
                REQUIRE(out.at(tr, tc) == want);
            }
        }
    }
}

TEST_CASE("resample_mode rejects refinement targets") {
    BinaryMask m;
    m.grid = make_grid(4, 4, 0, 4, 1, 1);
    m.values.assign(16, 1);
    CHECK_THROWS_AS(resample_mode(m, make_grid(8, 8, 0, 4, 0.5, 0.5)), ValueError);
}

TEST_CASE("rasterize_polygon basic coverage") {
    const GridSpec grid = make_grid(4, 4, 0, 2, 0.5, 0.5);

    RegionPolygon full;
    full.rings = {{{-1, -1}, {3, -1}, {3, 3}, {-1, 3}}};
    CHECK(rasterize_polygon(full, grid).values == std::vector<std::uint8_t>(16, 1));

    RegionPolygon degenerate;
    degenerate.rings = {{{1, 1}, {1, 1}, {1, 1}}};
    CHECK(rasterize_polygon(degenerate, grid).values == std::vector<std::uint8_t>(16, 0));

    // Unit square covering the left half: left 8 pixels on, right 8 off.
    RegionPolygon half;
    half.rings = {{{0, 0}, {1, 0}, {1, 2}, {0, 2}}};
    const BinaryMask out = rasterize_polygon(half, grid);
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            CHECK(out.at(row, col) == (col < 2 ? 1 : 0));
        }
    }

    RegionPolygon bad;
    bad.rings = {{{0, 0}, {1, 1}}};
    CHECK_THROWS_AS(rasterize_polygon(bad, grid), ValueError);
}

TEST_CASE("rasterize_polygon equals the even-odd containment oracle, holes included") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> coord(-1, 9);
    const GridSpec grid = make_grid(16, 16, 0, 8, 0.5, 0.5);
    for (int round = 0; round < 25; ++round) {
        RegionPolygon poly;
        const int n_rings = 1 + (round % 3);
        for (int ring = 0; ring < n_rings; ++ring) {
            std::vector<Point> pts;
            const int n = 3 + static_cast<int>(rng() % 6);
            for (int i = 0; i < n; ++i) pts.push_back(Point{coord(rng), coord(rng)});
            poly.rings.push_back(std::move(pts));
        }
        const BinaryMask out = rasterize_polygon(poly, grid);
        for (int row = 0; row < grid.height; ++row) {
            for (int col = 0; col < grid.width; ++col) {
                const bool inside =
                    poly.contains(grid.col_center_x(col), grid.row_center_y(row));
                REQUIRE(out.at(row, col) == static_cast<std::uint8_t>(inside));
            }
        }
    }
}

TEST_CASE("rasterize_polygon counts boundary-aligned rectangles exactly") {
    const GridSpec grid = make_grid(10, 8, 0, 8, 1, 1);
    std::mt19937_64 rng(13);
    for (int round = 0; round < 20; ++round) {
        const int x0 = static_cast<int>(rng() % 9);
        const int x1 = x0 + 1 + static_cast<int>(rng() % (10 - x0 - 1 + 1));
        const int y0 = static_cast<int>(rng() % 7);
        const int y1 = y0 + 1 + static_cast<int>(rng() % (8 - y0 - 1 + 1));
        RegionPolygon rect;
        rect.rings = {{{double(x0), double(y0)},
                       {double(x1), double(y0)},
                       {double(x1), double(y1)},
                       {double(x0), double(y1)}}};
        const BinaryMask out = rasterize_polygon(rect, grid);
        std::uint64_t on = 0;
        for (const std::uint8_t v : out.values) on += v;
        REQUIRE(on == static_cast<std::uint64_t>((x1 - x0) * (y1 - y0)));
    }
}

TEST_CASE("clip masks out region zeros and is idempotent") {
    std::mt19937_64 rng(14);
    const GridSpec grid = make_grid(8, 8);
    const CategoricalRaster raster = testsupport::random_raster(rng, grid, {1, 2, 3}, -5, 0.1);

    BinaryMask all_ones;
    all_ones.grid = grid;
    all_ones.values.assign(grid.cell_count(), 1);
    CHECK(clip(raster, all_ones).values == raster.values);

    BinaryMask all_zeros;
    all_zeros.grid = grid;
    all_zeros.values.assign(grid.cell_count(), 0);
    CHECK(clip(raster, all_zeros).values == std::vector<std::int32_t>(grid.cell_count(), -5));

    BinaryMask checker;
    checker.grid = grid;
    checker.values.resize(grid.cell_count());
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) checker.at(row, col) = (row + col) % 2;
    }
    const CategoricalRaster once = clip(raster, checker);
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) {
            const std::int32_t want = checker.at(row, col) ? raster.at(row, col) : -5;
            REQUIRE(once.at(row, col) == want);
        }
    }
    CHECK(clip(once, checker).values == once.values);

    BinaryMask wrong_grid;
    wrong_grid.grid = make_grid(4, 4);
    wrong_grid.values.assign(16, 1);
    CHECK_THROWS_AS(clip(raster, wrong_grid), GridMismatchError);
}

TEST_CASE("to_mask accepts binary rasters only") {
    CategoricalRaster r;
    r.grid = make_grid(2, 1);
    r.nodata = 255;
    r.values = {1, 255};
    const BinaryMask m = to_mask(r);
    CHECK(m.values == std::vector<std::uint8_t>{1, 255});
    r.values = {1, 2};
    CHECK_THROWS_AS(to_mask(r), ValueError);
}

TEST_CASE("geojson polygon and named-region ingestion") {
    TempDir dir("geojson");
    const auto poly_path = dir.path() / "poly.geojson";
    write_text_file(poly_path, R"({
      "type": "Feature",
      "properties": {},
      "geometry": {
        "type": "MultiPolygon",
        "coordinates": [
          [[[0,0],[4,0],[4,4],[0,4],[0,0]], [[1,1],[2,1],[2,2],[1,2],[1,1]]],
          [[[6,6],[8,6],[8,8],[6,8],[6,6]]]
        ]
      }
    })");
    const RegionPolygon poly = read_geojson_polygon(poly_path);
    CHECK(poly.rings.size() == 3);
    CHECK(poly.contains(0.5, 0.5));
    CHECK_FALSE(poly.contains(1.5, 1.5)); // the hole
    CHECK(poly.contains(7, 7));
    CHECK_FALSE(poly.contains(5, 5));

    const auto regions_path = dir.path() / "regions.geojson";
    write_text_file(regions_path, R"({
      "type": "FeatureCollection",
      "features": [
        {"type": "Feature", "properties": {"name": "north"},
         "geometry": {"type": "Polygon", "coordinates": [[[0,1],[2,1],[2,2],[0,2],[0,1]]]}},
        {"type": "Feature", "properties": {"name": "south"},
         "geometry": {"type": "Polygon", "coordinates": [[[0,0],[2,0],[2,1],[0,1],[0,0]]]}}
      ]
    })");
    const auto regions = read_geojson_named_regions(regions_path);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].name == "north");
    CHECK(regions[1].name == "south");

    const auto bad_path = dir.path() / "bad.geojson";
    write_text_file(bad_path, R"({"type": "Point", "coordinates": [1, 2]})");
    CHECK_THROWS_AS(read_geojson_polygon(bad_path), SchemaError);
}
