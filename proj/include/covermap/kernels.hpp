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

#include <cstddef>
#include <cstdint>
#include <span>

// Flat pixel kernels behind the raster operations. Every kernel has a scalar
// reference implementation and, on x86-64 with AVX2, a vector variant chosen
// at runtime. Variants are required to produce bitwise-identical results: all
// kernels are integer-valued, so reassociation is exact. Equivalence is
// enforced by tests that run both backends on random buffers.
namespace covermap::kernels {

enum class Backend {
    Scalar,
    Avx2,
};

// Backend picked at startup (AVX2 when the CPU supports it).
Backend active_backend();
const char* backend_name(Backend b);
bool backend_supported(Backend b);

// Force a backend, e.g. to compare variants in tests. Throws ValueError if
// the backend is not compiled in or the CPU lacks it.
void set_backend(Backend b);

// dst[i] = out_nodata if src[i] == nodata; 1 if src[i] is in `codes`; else 0.
void binarize_class_set(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                        std::span<const std::int32_t> codes, std::int32_t nodata,
                        std::uint8_t out_nodata);

// dst[i] = out_nodata if src[i] == nodata; 1 if src[i] >= cutoff; else 0.
void binarize_ge(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                 std::int32_t cutoff, std::int32_t nodata, std::uint8_t out_nodata);

// dst[i] = out_nodata if src[i] == nodata; 1 if lo <= src[i] <= hi; else 0.
void binarize_in_range(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                       std::int32_t lo, std::int32_t hi, std::int32_t nodata,
                       std::uint8_t out_nodata);

// values[i] = nodata wherever region[i] == 0.
void mask_out_i32(std::int32_t* values, const std::uint8_t* region, std::size_t n,
                  std::int32_t nodata);
void mask_out_u8(std::uint8_t* values, const std::uint8_t* region, std::size_t n,
                 std::uint8_t nodata);

// votes[i] += (mask[i] == 1); invalid[i] |= (mask[i] == mask_nodata).
// Vote counts must stay below 255.
void accumulate_votes(const std::uint8_t* mask, std::uint8_t mask_nodata,
                      std::uint8_t* votes, std::uint8_t* invalid, std::size_t n);

// Count of v[i] == target.
std::uint64_t count_eq(const std::uint8_t* v, std::uint8_t target, std::size_t n);

// Count of v[i] == target where invalid[i] == 0.
std::uint64_t count_eq_valid(const std::uint8_t* v, const std::uint8_t* invalid,
                             std::uint8_t target, std::size_t n);

struct PairCounts {
    std::uint64_t agree = 0; // a[i] == b[i] over valid pixels
    std::uint64_t valid = 0; // invalid[i] == 0
};

// Agreement tally for one mask pair over the shared valid set.
PairCounts pair_agreement(const std::uint8_t* a, const std::uint8_t* b,
                          const std::uint8_t* invalid, std::size_t n);

} // namespace covermap::kernels
