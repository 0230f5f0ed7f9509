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

#include "covermap/analysis.hpp"

#include <cmath>

#include "covermap/errors.hpp"
#include "covermap/parallel.hpp"

namespace covermap {

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ValueError("pearson inputs differ in length");
    if (xs.size() < 2) throw ValueError("pearson needs at least 2 points");
    const double n = static_cast<double>(xs.size());
    double mean_x = 0, mean_y = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0) || !(syy > 0)) {
        throw ValueError("correlation undefined: an input sequence is constant");
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<CorrelationResult> metric_vs_resolution(const MetricTable& table,
                                                    std::span<const ProductSpec> specs,
                                                    const std::set<std::string>& exclude) {
    std::vector<CorrelationResult> out;
    for (const auto& [metric, per_map] : table) {
        std::vector<double> xs, ys;
        for (const auto& [map_name, value] : per_map) {
            if (exclude.count(map_name)) continue;
            const ProductSpec& spec = find_product(specs, map_name);
            xs.push_back(spec.native_resolution_m);
            ys.push_back(value);
        }
        if (xs.size() < 2) {
            throw ValueError("fewer than 2 maps remain for metric '" + metric + "'");
        }
        CorrelationResult res;
        res.metric_name = metric;
        res.r = pearson(xs, ys);
        res.n_points = xs.size();
        res.excluded.assign(exclude.begin(), exclude.end());
        out.push_back(std::move(res));
    }
    return out;
}

int temporal_mismatch(int map_year, int reference_year) {
    return std::abs(map_year - reference_year);
}

std::vector<CorrelationResult> metric_vs_mismatch(
    const std::map<std::string, std::vector<MismatchPoint>>& values,
    const std::map<std::string, std::map<std::string, int>>& map_years,
    const std::map<std::string, int>& reference_years, const std::set<std::string>& exclude) {
    std::vector<CorrelationResult> out;
    for (const auto& [metric, points] : values) {
        std::vector<double> xs, ys;
        for (const MismatchPoint& p : points) {
            if (exclude.count(p.map)) continue;
            const auto map_it = map_years.find(p.map);
            if (map_it == map_years.end()) {
                throw ValueError("no year attribution for map '" + p.map + "'");
            }
            const auto year_it = map_it->second.find(p.country);
            if (year_it == map_it->second.end()) {
                throw ValueError("no year attribution for map '" + p.map + "' in '" +
                                 p.country + "'");
            }
            const auto ref_it = reference_years.find(p.country);
            if (ref_it == reference_years.end()) {
                throw ValueError("no reference year for country '" + p.country + "'");
            }
            xs.push_back(temporal_mismatch(year_it->second, ref_it->second));
            ys.push_back(p.value);
        }
        if (xs.size() < 2) {
            throw ValueError("fewer than 2 points remain for metric '" + metric + "'");
        }
        CorrelationResult res;
        res.metric_name = metric;
        res.r = pearson(xs, ys);
        res.n_points = xs.size();
        res.excluded.assign(exclude.begin(), exclude.end());
        out.push_back(std::move(res));
    }
    return out;
}

namespace {

constexpr std::size_t kChunkPixels = std::size_t(1) << 16;

struct ChunkSum {
    double sum = 0;
    double comp = 0; // Neumaier correction
    std::uint64_t count = 0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        ++count;
    }
};

} // namespace

TimeSeries masked_timeseries(std::span<const std::pair<Date, CategoricalRaster>> frames,
                             const BinaryMask& mask, const BinaryMask& region, int threads) {
    mask.grid.validate();
    if (!(mask.grid == region.grid)) {
        throw GridMismatchError("mask and region grids are not co-registered");
    }
    TimeSeries series;
    Date prev{};
    bool have_prev = false;
    for (const auto& [stamp, frame] : frames) {
        if (!(frame.grid == mask.grid)) {
            throw GridMismatchError("frame grid does not match the mask grid");
        }
        if (have_prev && !(prev < stamp)) {
            throw ValueError("frame timestamps must be strictly increasing");
        }
        prev = stamp;
        have_prev = true;

        const std::size_t n = frame.values.size();
        const std::size_t n_chunks = (n + kChunkPixels - 1) / kChunkPixels;
        std::vector<ChunkSum> partials(n_chunks);
        parallel_chunks(n, kChunkPixels, threads,
                        [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                            ChunkSum local;
                            for (std::size_t i = begin; i < end; ++i) {
                                if (mask.values[i] == 1 && region.values[i] == 1 &&
                                    frame.values[i] != frame.nodata) {
                                    local.add(static_cast<double>(frame.values[i]));
                                }
                            }
                            partials[chunk] = local;
                        });
        ChunkSum total;
        for (const ChunkSum& part : partials) {
            if (part.count == 0) continue;
            total.add(part.sum + part.comp);
            total.count += part.count - 1;
        }
        TimeSeriesEntry entry;
        entry.timestamp = stamp;
        entry.pixel_count = total.count;
        if (total.count == 0) {
            entry.missing = true;
        } else {
            entry.mean_value = (total.sum + total.comp) / static_cast<double>(total.count);
        }
        series.entries.push_back(entry);
    }
    return series;
}

} // namespace covermap
