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

#include "covermap/reference.hpp"

#include <algorithm>

#include "covermap/errors.hpp"
#include "covermap/rng.hpp"
#include "covermap/textio.hpp"

namespace covermap {

std::size_t ReferenceDataset::crop_count() const {
    std::size_t n = 0;
    for (const LabeledPoint& p : points) n += (p.label == 1);
    return n;
}

ReferenceDataset consolidate(std::span<const RawLabeledPoint> raw) {
    if (raw.empty()) throw ValueError("consolidate of an empty point sequence");
    ReferenceDataset ds;
    ds.country = raw.front().country;
    ds.validity_start = raw.front().validity_start;
    ds.validity_end = raw.front().validity_end;
    for (const RawLabeledPoint& p : raw) {
        if (p.country != ds.country || p.validity_start != ds.validity_start ||
            p.validity_end != ds.validity_end) {
            throw ValueError("raw points mix countries or validity periods");
        }
        if (p.labels.empty()) throw ValueError("raw point with no labels");
        for (const int label : p.labels) {
            if (label != 0 && label != 1) {
                throw SchemaError("label outside {0,1}: " + std::to_string(label));
            }
        }
        const bool unanimous =
            std::all_of(p.labels.begin(), p.labels.end(),
                        [&](int label) { return label == p.labels.front(); });
        if (unanimous) {
            ds.points.push_back(LabeledPoint{p.x, p.y, p.labels.front()});
        }
    }
    return ds;
}

std::vector<Point> uniform_sample(const RegionPolygon& region, std::size_t n,
                                  std::uint64_t seed) {
    region.validate();
    if (n < 1) throw ValueError("uniform_sample needs n >= 1");
    double min_x, min_y, max_x, max_y;
    region.bounds(min_x, min_y, max_x, max_y);
    if (!(max_x > min_x) || !(max_y > min_y)) {
        throw ValueError("region has no area to sample");
    }
    StableRng rng(seed);
    std::vector<Point> out;
    out.reserve(n);
    // Guard against effectively zero-area regions where rejection cannot
    // terminate.
    const std::size_t max_attempts = std::max<std::size_t>(n * 100000, 1000000);
    std::size_t attempts = 0;
    while (out.size() < n) {
        if (++attempts > max_attempts) {
            throw ValueError("region appears to have zero area (rejection sampling stalled)");
        }
        const double x = rng.uniform(min_x, max_x);
        const double y = rng.uniform(min_y, max_y);
        if (region.contains(x, y)) out.push_back(Point{x, y});
    }
    return out;
}

std::vector<StratifiedPoint> stratified_sample(const CategoricalRaster& strata,
                                               const std::map<std::int32_t, std::size_t>& allocation,
                                               std::uint64_t seed) {
    strata.validate();
    StableRng rng(seed);
    std::vector<StratifiedPoint> out;
    std::vector<std::size_t> cells;
    for (const auto& [stratum, count] : allocation) {
        if (stratum == strata.nodata) {
            throw ValueError("allocation names the nodata code as a stratum");
        }
        cells.clear();
        for (std::size_t i = 0; i < strata.values.size(); ++i) {
            if (strata.values[i] == stratum) cells.push_back(i);
        }
        if (count > cells.size()) {
            throw ValueError("allocation of " + std::to_string(count) + " exceeds the " +
                             std::to_string(cells.size()) + " pixels of stratum " +
                             std::to_string(stratum));
        }
        // Partial Fisher-Yates: the first `count` entries are a uniform draw
        // without replacement.
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t j = k + rng.next_below(cells.size() - k);
            std::swap(cells[k], cells[j]);
            const std::size_t cell = cells[k];
            const int row = static_cast<int>(cell / strata.grid.width);
            const int col = static_cast<int>(cell % strata.grid.width);
            out.push_back(StratifiedPoint{strata.grid.col_center_x(col),
                                          strata.grid.row_center_y(row), stratum});
        }
    }
    return out;
}

namespace {

constexpr const char* kHeader = "x,y,label,country,validity_start,validity_end";
constexpr const char* kRawHeader = "x,y,labels,country,validity_start,validity_end";

int parse_label(const std::string& s) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw SchemaError("label outside {0,1}: '" + s + "'");
}

} // namespace

ReferenceDataset read_reference_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cx = table.column("x");
    const std::size_t cy = table.column("y");
    const std::size_t cl = table.column("label");
    const std::size_t cc = table.column("country");
    const std::size_t cs = table.column("validity_start");
    const std::size_t ce = table.column("validity_end");
    if (table.rows.empty()) throw SchemaError("reference CSV has no points: " + path.string());

    ReferenceDataset ds;
    ds.country = table.rows.front()[cc];
    ds.validity_start = parse_date(table.rows.front()[cs]);
    ds.validity_end = parse_date(table.rows.front()[ce]);
    for (const auto& row : table.rows) {
        if (row[cc] != ds.country) {
            throw SchemaError("reference CSV mixes countries: " + path.string());
        }
        ds.points.push_back(
            LabeledPoint{parse_double(row[cx]), parse_double(row[cy]), parse_label(row[cl])});
    }
    return ds;
}

void write_reference_csv(const ReferenceDataset& ds, const std::filesystem::path& path) {
    std::string out = kHeader;
    out += '\n';
    const std::string start = to_string(ds.validity_start);
    const std::string end = to_string(ds.validity_end);
    for (const LabeledPoint& p : ds.points) {
        out += fmt_double(p.x);
        out += ',';
        out += fmt_double(p.y);
        out += ',';
        out += std::to_string(p.label);
        out += ',';
        out += csv_escape(ds.country);
        out += ',';
        out += start;
        out += ',';
        out += end;
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<RawLabeledPoint> read_raw_reference_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cx = table.column("x");
    const std::size_t cy = table.column("y");
    const std::size_t cl = table.column("labels");
    const std::size_t cc = table.column("country");
    const std::size_t cs = table.column("validity_start");
    const std::size_t ce = table.column("validity_end");
    std::vector<RawLabeledPoint> out;
    for (const auto& row : table.rows) {
        RawLabeledPoint p;
        p.x = parse_double(row[cx]);
        p.y = parse_double(row[cy]);
        p.country = row[cc];
        p.validity_start = parse_date(row[cs]);
        p.validity_end = parse_date(row[ce]);
        const std::string& labels = row[cl];
        std::size_t start = 0;
        while (start <= labels.size()) {
            std::size_t end = labels.find('|', start);
            if (end == std::string::npos) end = labels.size();
            p.labels.push_back(parse_label(labels.substr(start, end - start)));
            if (end == labels.size()) break;
            start = end + 1;
        }
        if (p.labels.empty()) throw SchemaError("raw point with no labels in " + path.string());
        out.push_back(std::move(p));
    }
    return out;
}

void write_raw_reference_csv(std::span<const RawLabeledPoint> raw,
                             const std::filesystem::path& path) {
    std::string out = kRawHeader;
    out += '\n';
    for (const RawLabeledPoint& p : raw) {
        out += fmt_double(p.x);
        out += ',';
        out += fmt_double(p.y);
        out += ',';
        for (std::size_t i = 0; i < p.labels.size(); ++i) {
            if (i) out += '|';
            out += std::to_string(p.labels[i]);
        }
        out += ',';
        out += csv_escape(p.country);
        out += ',';
        out += to_string(p.validity_start);
        out += ',';
        out += to_string(p.validity_end);
        out += '\n';
    }
    write_text_file(path, out);
}

} // namespace covermap
