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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "covermap/dates.hpp"
#include "covermap/grid.hpp"

namespace covermap {

// One location labeled independently by several interpreters.
struct RawLabeledPoint {
    double x = 0;
    double y = 0;
    std::vector<int> labels; // each in {0, 1}
    std::string country;
    Date validity_start;
    Date validity_end;
};

struct LabeledPoint {
    double x = 0;
    double y = 0;
    int label = 0; // 0 non-crop, 1 crop
};

// Consolidated evaluation dataset; every retained point had unanimous raw
// labels.
struct ReferenceDataset {
    std::vector<LabeledPoint> points;
    std::string country;
    Date validity_start;
    Date validity_end;

    std::size_t total() const { return points.size(); }
    std::size_t crop_count() const;
    std::size_t noncrop_count() const { return total() - crop_count(); }
};

// Keeps exactly the points whose label sequences are constant. All raw points
// must share country and validity period.
ReferenceDataset consolidate(std::span<const RawLabeledPoint> raw);

// n i.i.d. uniform points over the polygon interior, by rejection from the
// bounding box. Deterministic for a fixed seed.
std::vector<Point> uniform_sample(const RegionPolygon& region, std::size_t n,
                                  std::uint64_t seed);

struct StratifiedPoint {
    double x = 0;
    double y = 0;
    std::int32_t stratum = 0;
};

// For each allocated stratum, draws that many pixel centers uniformly without
// replacement from the stratum's pixels. Strata are processed in ascending
// code order so the draw depends only on the seed.
std::vector<StratifiedPoint> stratified_sample(const CategoricalRaster& strata,
                                               const std::map<std::int32_t, std::size_t>& allocation,
                                               std::uint64_t seed);

// Consolidated CSV schema: x,y,label,country,validity_start,validity_end
// with ISO-8601 dates. Raw CSV replaces `label` with `labels`, a
// '|'-separated list.
ReferenceDataset read_reference_csv(const std::filesystem::path& path);
void write_reference_csv(const ReferenceDataset& ds, const std::filesystem::path& path);

std::vector<RawLabeledPoint> read_raw_reference_csv(const std::filesystem::path& path);
void write_raw_reference_csv(std::span<const RawLabeledPoint> raw,
                             const std::filesystem::path& path);

} // namespace covermap
