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

#include "covermap/grid.hpp"

namespace covermap {

// GeoTIFF support covers what the toolkit itself needs: classic little-endian
// TIFF, one band, integer samples of 8/16/32 bits, strip or tile layout, and
// no compression or deflate. The geotransform comes from the
// ModelPixelScale + ModelTiepoint tag pair (or an axis-aligned
// ModelTransformation); the CRS id round-trips through the GeoTIFF citation
// key, with a plain EPSG code recognized as a fallback. Nodata uses the
// GDAL_NODATA convention.

enum class TiffCompression {
    None,
    Deflate,
};

struct GeoTiffOptions {
    TiffCompression compression = TiffCompression::Deflate;
    // Rows per strip; the writer clamps it to the image height.
    int rows_per_strip = 256;
};

// Reads a single-band integer GeoTIFF. `default_nodata` applies only when the
// file carries no nodata tag.
CategoricalRaster read_geotiff(const std::filesystem::path& path,
                               std::optional<std::int32_t> default_nodata = std::nullopt);

void write_geotiff(const CategoricalRaster& raster, const std::filesystem::path& path,
                   const GeoTiffOptions& options = {});
void write_geotiff(const BinaryMask& mask, const std::filesystem::path& path,
                   const GeoTiffOptions& options = {});

} // namespace covermap
