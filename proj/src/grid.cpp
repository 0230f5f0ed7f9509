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

#include "covermap/grid.hpp"

#include <algorithm>

#include "covermap/errors.hpp"
#include "covermap/kernels.hpp"

namespace covermap {

void GridSpec::validate() const {
    if (!(pixel_w > 0) || !(pixel_h > 0)) {
        throw ValueError("pixel sizes must be positive");
    }
    if (width < 1 || height < 1) {
        throw ValueError("grid dimensions must be at least 1x1");
    }
}

void CategoricalRaster::validate() const {
    grid.validate();
    if (values.size() != grid.cell_count()) {
        throw ValueError("raster value count does not match grid dimensions");
    }
}

void BinaryMask::validate() const {
    grid.validate();
    if (values.size() != grid.cell_count()) {
        throw ValueError("mask value count does not match grid dimensions");
    }
    if (nodata == 0 || nodata == 1) {
        throw ValueError("mask nodata collides with a class code");
    }
    for (const std::uint8_t v : values) {
        if (v != 0 && v != 1 && v != nodata) {
            throw ValueError("mask value outside {0, 1, nodata}");
        }
    }
}

void RegionPolygon::validate() const {
    for (const auto& ring : rings) {
        if (ring.size() < 3) throw ValueError("polygon ring with fewer than 3 vertices");
    }
}

bool RegionPolygon::contains(double x, double y) const {
    // Even-odd crossing count over all rings; half-open vertical rule so
    // vertices are counted once.
    bool inside = false;
    for (const auto& ring : rings) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point& a = ring[j];
            const Point& b = ring[i];
            if ((b.y <= y && y < a.y) || (a.y <= y && y < b.y)) {
                const double x_cross = b.x + (y - b.y) * (a.x - b.x) / (a.y - b.y);
                if (x < x_cross) inside = !inside;
            }
        }
    }
    return inside;
}

void RegionPolygon::bounds(double& min_x, double& min_y, double& max_x, double& max_y) const {
    min_x = min_y = std::numeric_limits<double>::infinity();
    max_x = max_y = -std::numeric_limits<double>::infinity();
    for (const auto& ring : rings) {
        for (const Point& p : ring) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
}

namespace {

void require_same_crs(const std::string& a, const std::string& b) {
    if (a != b) throw GridMismatchError("CRS mismatch: '" + a + "' vs '" + b + "'");
}

void require_co_registered(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw GridMismatchError("grids are not co-registered");
}

// Shared nearest-neighbor walk; Out must already be sized for target.
template <typename T, typename Raster>
void nearest_fill(const Raster& src, const GridSpec& target, std::vector<T>& out, T nodata) {
    for (int tr = 0; tr < target.height; ++tr) {
        const double y = target.row_center_y(tr);
        const std::int64_t sr = src.grid.row_of_y(y);
        T* row_out = out.data() + static_cast<std::size_t>(tr) * target.width;
        if (sr < 0 || sr >= src.grid.height) {
            std::fill_n(row_out, target.width, nodata);
            continue;
        }
        const T* src_row = src.values.data() + static_cast<std::size_t>(sr) * src.grid.width;
        for (int tc = 0; tc < target.width; ++tc) {
            const std::int64_t sc = src.grid.col_of_x(target.col_center_x(tc));
            row_out[tc] = (sc < 0 || sc >= src.grid.width) ? nodata : src_row[sc];
        }
    }
}

} // namespace

CategoricalRaster resample_nearest(const CategoricalRaster& src, const GridSpec& target) {
    src.validate();
    target.validate();
    require_same_crs(src.grid.crs_id, target.crs_id);
    CategoricalRaster out;
    out.grid = target;
    out.nodata = src.nodata;
    out.values.resize(target.cell_count());
    nearest_fill(src, target, out.values, src.nodata);
    return out;
}

BinaryMask resample_nearest(const BinaryMask& src, const GridSpec& target) {
    src.grid.validate();
    target.validate();
    require_same_crs(src.grid.crs_id, target.crs_id);
    BinaryMask out;
    out.grid = target;
    out.nodata = src.nodata;
    out.values.resize(target.cell_count());
    nearest_fill(src, target, out.values, src.nodata);
    return out;
}

BinaryMask resample_mode(const BinaryMask& src, const GridSpec& target) {
    src.grid.validate();
    target.validate();
    require_same_crs(src.grid.crs_id, target.crs_id);
    if (target.pixel_w * target.pixel_h < src.grid.pixel_w * src.grid.pixel_h) {
        throw ValueError("resample_mode requires target pixels at least as large as source pixels");
    }
    BinaryMask out;
    out.grid = target;
    out.nodata = src.nodata;
    out.values.assign(target.cell_count(), src.nodata);

    for (int tr = 0; tr < target.height; ++tr) {
        // Source rows whose centers fall inside this target row band.
        const double cell_top = target.origin_y - tr * target.pixel_h;
        const double cell_bot = cell_top - target.pixel_h;
        // Center of source row r is origin_y - (r + 0.5) * ph; it lies in
        // [cell_bot, cell_top) iff r is in the half-open range below.
        const double ph = src.grid.pixel_h;
        std::int64_t r0 = static_cast<std::int64_t>(std::ceil((src.grid.origin_y - cell_top) / ph - 0.5));
        std::int64_t r1 = static_cast<std::int64_t>(std::ceil((src.grid.origin_y - cell_bot) / ph - 0.5));
        r0 = std::max<std::int64_t>(r0, 0);
        r1 = std::min<std::int64_t>(r1, src.grid.height);
        for (int tc = 0; tc < target.width; ++tc) {
            const double cell_left = target.origin_x + tc * target.pixel_w;
            const double cell_right = cell_left + target.pixel_w;
            const double pw = src.grid.pixel_w;
            std::int64_t c0 = static_cast<std::int64_t>(std::ceil((cell_left - src.grid.origin_x) / pw - 0.5));
            std::int64_t c1 = static_cast<std::int64_t>(std::ceil((cell_right - src.grid.origin_x) / pw - 0.5));
            c0 = std::max<std::int64_t>(c0, 0);
            c1 = std::min<std::int64_t>(c1, src.grid.width);
            std::uint64_t count0 = 0, count1 = 0;
            for (std::int64_t r = r0; r < r1; ++r) {
                const std::uint8_t* row = src.values.data() + static_cast<std::size_t>(r) * src.grid.width;
                for (std::int64_t c = c0; c < c1; ++c) {
                    count0 += (row[c] == 0);
                    count1 += (row[c] == 1);
                }
            }
            if (count0 + count1 > 0) {
                out.at(tr, tc) = count1 > count0 ? 1 : 0;
            }
        }
    }
    return out;
}

BinaryMask rasterize_polygon(const RegionPolygon& poly, const GridSpec& grid) {
    poly.validate();
    grid.validate();
    BinaryMask out;
    out.grid = grid;
    out.values.assign(grid.cell_count(), 0);

    // Scanline fill: gather the even-odd crossings of each row's center line,
    // then set the pixels whose centers lie between alternating pairs.
    std::vector<double> crossings;
    for (int row = 0; row < grid.height; ++row) {
        const double y = grid.row_center_y(row);
        crossings.clear();
        for (const auto& ring : poly.rings) {
            const std::size_t n = ring.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const Point& a = ring[j];
                const Point& b = ring[i];
                if ((b.y <= y && y < a.y) || (a.y <= y && y < b.y)) {
                    crossings.push_back(b.x + (y - b.y) * (a.x - b.x) / (a.y - b.y));
                }
            }
        }
        std::sort(crossings.begin(), crossings.end());
        std::uint8_t* row_out = out.values.data() + static_cast<std::size_t>(row) * grid.width;
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
            // contains() counts crossings strictly right of the point, so the
            // filled span is the half-open interval [entry, exit): centers on
            // the entry crossing are inside, centers on the exit are not.
            std::int64_t c0 = static_cast<std::int64_t>(
                std::ceil((crossings[k] - grid.origin_x) / grid.pixel_w - 0.5));
            std::int64_t c1 = static_cast<std::int64_t>(
                std::ceil((crossings[k + 1] - grid.origin_x) / grid.pixel_w - 0.5));
            c0 = std::max<std::int64_t>(c0, 0);
            c1 = std::min<std::int64_t>(c1, grid.width);
            for (std::int64_t c = c0; c < c1; ++c) row_out[c] = 1;
        }
    }
    return out;
}

CategoricalRaster clip(const CategoricalRaster& raster, const BinaryMask& region) {
    raster.validate();
    require_co_registered(raster.grid, region.grid);
    CategoricalRaster out = raster;
    kernels::mask_out_i32(out.values.data(), region.values.data(), out.values.size(), out.nodata);
    return out;
}

BinaryMask clip(const BinaryMask& mask, const BinaryMask& region) {
    require_co_registered(mask.grid, region.grid);
    BinaryMask out = mask;
    kernels::mask_out_u8(out.values.data(), region.values.data(), out.values.size(), out.nodata);
    return out;
}

BinaryMask to_mask(const CategoricalRaster& raster) {
    raster.validate();
    BinaryMask out;
    out.grid = raster.grid;
    out.values.resize(raster.values.size());
    for (std::size_t i = 0; i < raster.values.size(); ++i) {
        const std::int32_t v = raster.values[i];
        if (v == raster.nodata) {
            out.values[i] = out.nodata;
        } else if (v == 0 || v == 1) {
            out.values[i] = static_cast<std::uint8_t>(v);
        } else {
            throw ValueError("raster value " + std::to_string(v) + " is not a binary class");
        }
    }
    return out;
}

CategoricalRaster to_raster(const BinaryMask& mask) {
    CategoricalRaster out;
    out.grid = mask.grid;
    out.nodata = mask.nodata;
    out.values.resize(mask.values.size());
    for (std::size_t i = 0; i < mask.values.size(); ++i) {
        out.values[i] = mask.values[i];
    }
    return out;
}

} // namespace covermap
