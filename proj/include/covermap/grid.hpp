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

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace covermap {

struct Point {
    double x = 0;
    double y = 0;
};

// Axis-aligned georeferenced grid. (origin_x, origin_y) is the outer corner
// of pixel (0,0); rows run downward (y decreases as row increases), columns
// run right. pixel_w/pixel_h are stored positive.
//
// Pixel membership everywhere in the toolkit is decided by pixel-center
// tests; a point belongs to the pixel whose cell contains it under
// floor((p - origin) / size).
struct GridSpec {
    double origin_x = 0;
    double origin_y = 0;
    double pixel_w = 1;
    double pixel_h = 1;
    int width = 0;
    int height = 0;
    std::string crs_id;

    bool operator==(const GridSpec&) const = default;

    std::size_t cell_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    double col_center_x(int col) const { return origin_x + (col + 0.5) * pixel_w; }
    double row_center_y(int row) const { return origin_y - (row + 0.5) * pixel_h; }

    // Cell indices of the pixel containing (x, y); may fall outside the grid.
    std::int64_t col_of_x(double x) const {
        return static_cast<std::int64_t>(std::floor((x - origin_x) / pixel_w));
    }
    std::int64_t row_of_y(double y) const {
        return static_cast<std::int64_t>(std::floor((origin_y - y) / pixel_h));
    }

    bool in_bounds(std::int64_t row, std::int64_t col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }

    // Throws ValueError if sizes or dimensions are non-positive.
    void validate() const;
};

// Grid of integer class codes with a nodata sentinel, row-major.
struct CategoricalRaster {
    GridSpec grid;
    std::vector<std::int32_t> values;
    std::int32_t nodata = -1;

    std::int32_t at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * grid.width + col];
    }
    std::int32_t& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * grid.width + col];
    }

    // Throws ValueError if the value buffer does not match the grid.
    void validate() const;
};

// Crop/non-crop raster: every pixel is 0, 1, or nodata.
struct BinaryMask {
    GridSpec grid;
    std::vector<std::uint8_t> values;
    std::uint8_t nodata = 255;

    std::uint8_t at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * grid.width + col];
    }
    std::uint8_t& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * grid.width + col];
    }

    void validate() const;
};

// Polygon as a flat list of rings interpreted with the even-odd rule: holes
// and disjoint parts are all just rings. Rings are implicitly closed.
struct RegionPolygon {
    std::vector<std::vector<Point>> rings;

    // Throws ValueError on a ring with fewer than 3 vertices.
    void validate() const;

    // Even-odd containment test.
    bool contains(double x, double y) const;

    // Bounding box over all rings; undefined for an empty polygon.
    void bounds(double& min_x, double& min_y, double& max_x, double& max_y) const;
};

// Nearest-neighbor resample onto `target`. Each target pixel takes the value
// of the source pixel containing the target pixel's center; centers outside
// the source extent become nodata. Requires matching crs_id.
CategoricalRaster resample_nearest(const CategoricalRaster& src, const GridSpec& target);
BinaryMask resample_nearest(const BinaryMask& src, const GridSpec& target);

// Aggregating resample for masks: each target pixel is the modal class of the
// non-nodata source pixels whose centers fall inside it, nodata when no
// source center does. Ties break to 0 (non-crop). Target pixels must be at
// least as large as source pixels.
BinaryMask resample_mode(const BinaryMask& src, const GridSpec& target);

// Pixel = 1 iff the pixel center is inside the polygon (even-odd rule).
// Output has no nodata.
BinaryMask rasterize_polygon(const RegionPolygon& poly, const GridSpec& grid);

// Pixels where region == 0 become nodata; requires co-registered grids.
CategoricalRaster clip(const CategoricalRaster& raster, const BinaryMask& region);
BinaryMask clip(const BinaryMask& mask, const BinaryMask& region);

// Conversions. to_mask throws ValueError when a value is outside {0, 1,
// nodata}.
BinaryMask to_mask(const CategoricalRaster& raster);
CategoricalRaster to_raster(const BinaryMask& mask);

} // namespace covermap
