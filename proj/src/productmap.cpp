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

#include "covermap/productmap.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "covermap/errors.hpp"
#include "covermap/kernels.hpp"
#include "covermap/textio.hpp"

namespace covermap {

BinarizeRule BinarizeRule::classes(std::vector<std::int32_t> codes) {
    BinarizeRule r;
    r.kind = Kind::ClassSet;
    r.class_set = std::move(codes);
    r.validate();
    return r;
}

BinarizeRule BinarizeRule::greater_than(double threshold) {
    BinarizeRule r;
    r.kind = Kind::ThresholdGt;
    r.threshold = threshold;
    return r;
}

BinarizeRule BinarizeRule::fraction_window(double lo, double hi) {
    BinarizeRule r;
    r.kind = Kind::FractionRange;
    r.range_lo = lo;
    r.range_hi = hi;
    r.validate();
    return r;
}

void BinarizeRule::validate() const {
    switch (kind) {
        case Kind::ClassSet:
            if (class_set.empty()) throw ValueError("class_set rule with no classes");
            break;
        case Kind::ThresholdGt:
            break;
        case Kind::FractionRange:
            if (range_lo > range_hi) throw ValueError("fraction_range with lo > hi");
            break;
    }
}

void ProductSpec::validate() const {
    if (name.empty()) throw ValueError("product without a name");
    if (nominal_years.empty()) throw ValueError("product '" + name + "' without years");
    if (!(native_resolution_m > 0)) {
        throw ValueError("product '" + name + "' with non-positive resolution");
    }
    rule.validate();
}

namespace {

// Integer cutoffs equivalent to the real-valued rule on integer samples:
// v > t      <=>  v >= floor(t) + 1
// lo <= v    <=>  v >= ceil(lo)
// v <= hi    <=>  v <= floor(hi)
std::int32_t gt_cutoff(double threshold) {
    const double cut = std::floor(threshold) + 1;
    if (cut <= static_cast<double>(INT32_MIN)) return INT32_MIN;
    if (cut > static_cast<double>(INT32_MAX)) return INT32_MAX;
    return static_cast<std::int32_t>(cut);
}

} // namespace

BinaryMask binarize(const CategoricalRaster& raster, const BinarizeRule& rule) {
    raster.validate();
    rule.validate();
    BinaryMask out;
    out.grid = raster.grid;
    out.values.resize(raster.values.size());
    const std::size_t n = raster.values.size();
    switch (rule.kind) {
        case BinarizeRule::Kind::ClassSet:
            kernels::binarize_class_set(raster.values.data(), out.values.data(), n,
                                        rule.class_set, raster.nodata, out.nodata);
            break;
        case BinarizeRule::Kind::ThresholdGt:
            kernels::binarize_ge(raster.values.data(), out.values.data(), n,
                                 gt_cutoff(rule.threshold), raster.nodata, out.nodata);
            break;
        case BinarizeRule::Kind::FractionRange: {
            const double lo = std::ceil(rule.range_lo);
            const double hi = std::floor(rule.range_hi);
            if (lo > hi) {
                // Window contains no integers; nothing can be crop.
                for (std::size_t i = 0; i < n; ++i) {
                    out.values[i] = raster.values[i] == raster.nodata ? out.nodata : 0;
                }
            } else {
                const double lo_c = std::clamp(lo, static_cast<double>(INT32_MIN),
                                               static_cast<double>(INT32_MAX));
                const double hi_c = std::clamp(hi, static_cast<double>(INT32_MIN),
                                               static_cast<double>(INT32_MAX));
                kernels::binarize_in_range(raster.values.data(), out.values.data(), n,
                                           static_cast<std::int32_t>(lo_c),
                                           static_cast<std::int32_t>(hi_c), raster.nodata,
                                           out.nodata);
            }
            break;
        }
    }
    return out;
}

CategoricalRaster mode_composite(std::span<const std::pair<Date, CategoricalRaster>> frames) {
    if (frames.empty()) throw ValueError("mode_composite of an empty frame sequence");
    const CategoricalRaster& first = frames.front().second;
    first.validate();
    for (const auto& [date, frame] : frames) {
        if (!(frame.grid == first.grid)) {
            throw GridMismatchError("mode_composite frames are not co-registered");
        }
    }
    CategoricalRaster out;
    out.grid = first.grid;
    out.nodata = first.nodata;
    out.values.resize(first.values.size());

    std::map<std::int32_t, std::uint32_t> counts;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        counts.clear();
        for (const auto& [date, frame] : frames) {
            const std::int32_t v = frame.values[i];
            if (v != frame.nodata) ++counts[v];
        }
        if (counts.empty()) {
            out.values[i] = out.nodata;
            continue;
        }
        // Highest count wins; the map iterates in ascending code order, so a
        // strict > keeps the smallest code on ties.
        std::int32_t best = 0;
        std::uint32_t best_count = 0;
        for (const auto& [code, count] : counts) {
            if (count > best_count) {
                best = code;
                best_count = count;
            }
        }
        out.values[i] = best;
    }
    return out;
}

std::vector<std::int32_t> extract_values(const CategoricalRaster& raster,
                                         std::span<const Point> points) {
    raster.validate();
    std::vector<std::int32_t> out;
    out.reserve(points.size());
    for (const Point& p : points) {
        const std::int64_t row = raster.grid.row_of_y(p.y);
        const std::int64_t col = raster.grid.col_of_x(p.x);
        out.push_back(raster.grid.in_bounds(row, col)
                          ? raster.at(static_cast<int>(row), static_cast<int>(col))
                          : raster.nodata);
    }
    return out;
}

namespace {

using nlohmann::json;

BinarizeRule rule_from_json(const json& j, const std::string& product) {
    const std::string variant = j.value("variant", "");
    if (variant == "class_set") {
        const auto it = j.find("classes");
        if (it == j.end() || !it->is_array() || it->empty()) {
            throw SchemaError("product '" + product + "': class_set rule needs a classes array");
        }
        std::vector<std::int32_t> codes;
        for (const auto& c : *it) codes.push_back(c.get<std::int32_t>());
        return BinarizeRule::classes(std::move(codes));
    }
    if (variant == "threshold_gt") {
        const auto it = j.find("threshold");
        if (it == j.end() || !it->is_number()) {
            throw SchemaError("product '" + product + "': threshold_gt rule needs a threshold");
        }
        return BinarizeRule::greater_than(it->get<double>());
    }
    if (variant == "fraction_range") {
        const auto it = j.find("range");
        if (it == j.end() || !it->is_array() || it->size() != 2) {
            throw SchemaError("product '" + product + "': fraction_range rule needs range [lo, hi]");
        }
        return BinarizeRule::fraction_window((*it)[0].get<double>(), (*it)[1].get<double>());
    }
    throw SchemaError("product '" + product + "': unknown rule variant '" + variant + "'");
}

ProductSpec product_from_json(const json& j) {
    ProductSpec spec;
    if (!j.is_object()) throw SchemaError("registry entries must be objects");
    spec.name = j.value("name", "");
    if (spec.name.empty()) throw SchemaError("registry entry without a name");
    const auto years = j.find("years");
    if (years == j.end() || !years->is_array()) {
        throw SchemaError("product '" + spec.name + "' without a years array");
    }
    for (const auto& y : *years) spec.nominal_years.push_back(y.get<int>());
    spec.native_resolution_m = j.value("resolution_m", 0.0);
    spec.model_scale = j.value("model_scale", "");
    const auto rule = j.find("rule");
    if (rule == j.end()) throw SchemaError("product '" + spec.name + "' without a rule");
    spec.rule = rule_from_json(*rule, spec.name);
    spec.composite = j.value("composite", false);
    if (j.contains("default_year")) spec.default_year = j.at("default_year").get<int>();
    spec.validate();
    return spec;
}

} // namespace

std::vector<ProductSpec> load_product_registry(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError("malformed registry JSON in " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw SchemaError("registry must be a JSON array: " + path.string());
    std::vector<ProductSpec> out;
    for (const auto& entry : doc) out.push_back(product_from_json(entry));
    if (out.empty()) throw SchemaError("registry is empty: " + path.string());
    return out;
}

std::vector<ProductSpec> default_product_registry() {
    std::vector<ProductSpec> reg;
    auto add = [&reg](ProductSpec spec) {
        spec.validate();
        reg.push_back(std::move(spec));
    };
    add({"DEA", {2019}, 10, "AEZ", BinarizeRule::classes({1}), false, std::nullopt});
    add({"Dynamic World", {2015, 2016, 2017, 2018, 2019, 2020, 2021, 2022, 2023}, 10, "global",
         BinarizeRule::classes({4}), true, std::nullopt});
    add({"Esri", {2017, 2018, 2019, 2020, 2021, 2022}, 10, "global",
         BinarizeRule::classes({5}), false, 2020});
    add({"WorldCover", {2020, 2021}, 10, "global", BinarizeRule::classes({40}), false, 2020});
    add({"ESA-CCI", {2016}, 20, "continent", BinarizeRule::classes({4}), false, std::nullopt});
    add({"GFSAD", {2015}, 30, "AEZ", BinarizeRule::classes({2}), false, std::nullopt});
    add({"Nabil", {2016}, 30, "mixed", BinarizeRule::classes({1}), false, std::nullopt});
    add({"GLAD", {2003, 2007, 2011, 2015, 2019}, 30, "1x1 degree",
         BinarizeRule::greater_than(0.5), false, 2019});
    add({"Copernicus", {2015, 2016, 2017, 2018, 2019}, 100, "biome",
         BinarizeRule::classes({40}), false, 2019});
    add({"GlobCover", {2005, 2009}, 300, "strata", BinarizeRule::classes({11, 14, 20}), false,
         2009});
    add({"ASAP", {2017}, 1000, "mixed", BinarizeRule::fraction_window(5, 95), false,
         std::nullopt});
    return reg;
}

const ProductSpec& find_product(std::span<const ProductSpec> registry, const std::string& name) {
    for (const ProductSpec& spec : registry) {
        if (spec.name == name) return spec;
    }
    throw SchemaError("product '" + name + "' is not in the registry");
}

} // namespace covermap
