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

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "covermap/grid.hpp"

namespace testsupport {

inline covermap::GridSpec make_grid(int width, int height, double origin_x = 0,
                                    double origin_y = 0, double pixel_w = 1, double pixel_h = 1,
                                    std::string crs = "EPSG:32631") {
    covermap::GridSpec g;
    g.width = width;
    g.height = height;
    g.origin_x = origin_x;
    g.origin_y = origin_y == 0 ? height * pixel_h : origin_y;
    g.pixel_w = pixel_w;
    g.pixel_h = pixel_h;
    g.crs_id = std::move(crs);
    return g;
}

inline covermap::CategoricalRaster random_raster(std::mt19937_64& rng,
                                                 const covermap::GridSpec& grid,
                                                 const std::vector<std::int32_t>& classes,
                                                 std::int32_t nodata, double p_nodata) {
    covermap::CategoricalRaster r;
    r.grid = grid;
    r.nodata = nodata;
    r.values.resize(grid.cell_count());
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
    for (auto& v : r.values) {
        v = u(rng) < p_nodata ? nodata : classes[pick(rng)];
    }
    return r;
}

inline covermap::BinaryMask random_mask(std::mt19937_64& rng, const covermap::GridSpec& grid,
                                        double p_nodata = 0.0, double p_crop = 0.5) {
    covermap::BinaryMask m;
    m.grid = grid;
    m.values.resize(grid.cell_count());
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& v : m.values) {
        const double x = u(rng);
        v = x < p_nodata ? m.nodata : (x < p_nodata + (1 - p_nodata) * p_crop ? 1 : 0);
    }
    return m;
}

// Fresh directory under the system temp root; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& stem) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (stem + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace testsupport
