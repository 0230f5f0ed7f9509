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
#include <string>
#include <vector>

#include "covermap/grid.hpp"

namespace covermap {

// Reads Polygon and MultiPolygon geometry from a GeoJSON file (bare geometry,
// Feature, or FeatureCollection). All rings are merged into one even-odd
// RegionPolygon, which handles holes and disjoint parts uniformly.
RegionPolygon read_geojson_polygon(const std::filesystem::path& path);

struct NamedRegion {
    std::string name;
    RegionPolygon polygon;
};

// Reads a FeatureCollection whose features carry a "name" property; used for
// admin-level subregions.
std::vector<NamedRegion> read_geojson_named_regions(const std::filesystem::path& path);

} // namespace covermap
