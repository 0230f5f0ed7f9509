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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covermap/dates.hpp"
#include "covermap/grid.hpp"

namespace covermap {

// Rule mapping one product's native classification to crop/non-crop.
struct BinarizeRule {
    enum class Kind {
        ClassSet,       // crop iff the class code is in `class_set`
        ThresholdGt,    // crop iff value > threshold (strict)
        FractionRange,  // crop iff range_lo <= value <= range_hi (inclusive)
    };

    Kind kind = Kind::ClassSet;
    std::vector<std::int32_t> class_set;
    double threshold = 0;
    double range_lo = 0;
    double range_hi = 0;

    static BinarizeRule classes(std::vector<std::int32_t> codes);
    static BinarizeRule greater_than(double threshold);
    static BinarizeRule fraction_window(double lo, double hi);

    void validate() const;
};

struct ProductSpec {
    std::string name;
    std::vector<int> nominal_years;
    double native_resolution_m = 0;
    std::string model_scale;
    BinarizeRule rule;
    // True when per-date classifications must be mode-composited before
    // binarization (Dynamic World style products).
    bool composite = false;
    // Edition used when a product spans several years and the run does not
    // say otherwise.
    std::optional<int> default_year;

    void validate() const;
};

// Applies `rule` per pixel; nodata is preserved.
BinaryMask binarize(const CategoricalRaster& raster, const BinarizeRule& rule);

// Per-pixel most frequent non-nodata class across the frames; nodata only
// where every frame is nodata. Ties break to the smallest class code, so the
// result is independent of frame order.
CategoricalRaster mode_composite(std::span<const std::pair<Date, CategoricalRaster>> frames);

// Value of the pixel containing each point; nodata for points outside the
// extent.
std::vector<std::int32_t> extract_values(const CategoricalRaster& raster,
                                         std::span<const Point> points);

// Registry document: a JSON array with one object per product, keys
// name, years, resolution_m, model_scale, rule{variant, classes|threshold|range},
// composite, and optional default_year.
std::vector<ProductSpec> load_product_registry(const std::filesystem::path& path);

// The eleven products evaluated by the toolkit, with their published legend
// codes. data/registry.json carries the same contents; the file is the
// source of truth when both are in play.
std::vector<ProductSpec> default_product_registry();

const ProductSpec& find_product(std::span<const ProductSpec> registry, const std::string& name);

} // namespace covermap
