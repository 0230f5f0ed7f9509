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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "covermap/consensus.hpp"
#include "covermap/grid.hpp"

namespace covermap {

// Plots are verification aids: fixed canvas, linear axes, no styling knobs.

struct PlotSeries {
    std::string name;
    std::vector<Point> points;
};

void write_scatter_svg(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       std::span<const PlotSeries> series);

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    std::span<const PlotSeries> series);

// Consensus raster rendered with the fixed vote-count ramp red(0) ->
// yellow(N/2) -> blue(N); nodata is transparent.
void write_consensus_png(const ConsensusRaster& consensus, const std::filesystem::path& path);

} // namespace covermap
