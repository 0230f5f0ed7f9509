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
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covermap/dates.hpp"
#include "covermap/grid.hpp"
#include "covermap/productmap.hpp"

namespace covermap {

// Pearson product-moment correlation; throws ValueError when either input is
// constant (undefined correlation) or lengths differ / are below 2.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CorrelationResult {
    std::string metric_name;
    double r = 0;
    std::size_t n_points = 0;
    std::vector<std::string> excluded;
};

// Mean metric value per map, keyed by metric name then map name.
using MetricTable = std::map<std::string, std::vector<std::pair<std::string, double>>>;

// Correlates each metric's per-map means against native resolution, skipping
// excluded maps.
std::vector<CorrelationResult> metric_vs_resolution(const MetricTable& table,
                                                    std::span<const ProductSpec> specs,
                                                    const std::set<std::string>& exclude);

// |map_year - reference_year| in whole years.
int temporal_mismatch(int map_year, int reference_year);

// One scatter point per (map, country) pair: metric value vs temporal
// mismatch. `values` is keyed by metric name -> list of (map, country, value);
// map years come from `map_years` (map -> country -> year), reference years
// from `reference_years`.
struct MismatchPoint {
    std::string map;
    std::string country;
    double value = 0;
};

std::vector<CorrelationResult> metric_vs_mismatch(
    const std::map<std::string, std::vector<MismatchPoint>>& values,
    const std::map<std::string, std::map<std::string, int>>& map_years,
    const std::map<std::string, int>& reference_years, const std::set<std::string>& exclude);

struct TimeSeriesEntry {
    Date timestamp;
    double mean_value = 0;
    std::uint64_t pixel_count = 0;
    bool missing = false; // no pixel selected by mask & region & valid
};

struct TimeSeries {
    std::vector<TimeSeriesEntry> entries;
    std::string mask_name;
    std::string region_name;
};

// Per frame, the mean of value-raster pixels where mask == 1, region == 1 and
// the value is not nodata. Accumulation uses per-chunk compensated summation
// merged in chunk order, so any thread count gives identical results.
TimeSeries masked_timeseries(std::span<const std::pair<Date, CategoricalRaster>> frames,
                             const BinaryMask& mask, const BinaryMask& region,
                             int threads = 1);

} // namespace covermap
