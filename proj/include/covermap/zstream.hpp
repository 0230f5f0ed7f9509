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
#include <span>
#include <vector>

namespace covermap {

// zlib-wrapped deflate with a fixed level, so identical input bytes always
// produce identical output bytes.
std::vector<std::uint8_t> zlib_deflate(std::span<const std::uint8_t> data, int level = 6);

// Inflates `data`; `expected_size` is the exact decompressed size and a
// mismatch is an error.
std::vector<std::uint8_t> zlib_inflate(std::span<const std::uint8_t> data,
                                       std::size_t expected_size);

} // namespace covermap
