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

#include "covermap/zstream.hpp"

#include <zlib.h>

#include "covermap/errors.hpp"

namespace covermap {

std::vector<std::uint8_t> zlib_deflate(std::span<const std::uint8_t> data, int level) {
    uLongf bound = compressBound(static_cast<uLong>(data.size()));
    std::vector<std::uint8_t> out(bound);
    const int rc = compress2(out.data(), &bound, data.data(),
                             static_cast<uLong>(data.size()), level);
    if (rc != Z_OK) throw IoError("deflate failed (zlib rc " + std::to_string(rc) + ")");
    out.resize(bound);
    return out;
}

std::vector<std::uint8_t> zlib_inflate(std::span<const std::uint8_t> data,
                                       std::size_t expected_size) {
    std::vector<std::uint8_t> out(expected_size);
    uLongf got = static_cast<uLongf>(expected_size);
    const int rc = uncompress(out.data(), &got, data.data(), static_cast<uLong>(data.size()));
    if (rc != Z_OK) throw IoError("inflate failed (zlib rc " + std::to_string(rc) + ")");
    if (got != expected_size) {
        throw IoError("inflate produced " + std::to_string(got) + " bytes, expected " +
                      std::to_string(expected_size));
    }
    return out;
}

} // namespace covermap
