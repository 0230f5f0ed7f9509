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

#include "covermap/kernels.hpp"

// Per-backend entry points. Each backend namespace implements the same set;
// kernels.cpp wires the active one into a dispatch table.
namespace covermap::kernels {

namespace scalar {
void binarize_class_set(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                        std::span<const std::int32_t> codes, std::int32_t nodata,
                        std::uint8_t out_nodata);
void binarize_ge(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                 std::int32_t cutoff, std::int32_t nodata, std::uint8_t out_nodata);
void binarize_in_range(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                       std::int32_t lo, std::int32_t hi, std::int32_t nodata,
                       std::uint8_t out_nodata);
void mask_out_i32(std::int32_t* values, const std::uint8_t* region, std::size_t n,
                  std::int32_t nodata);
void mask_out_u8(std::uint8_t* values, const std::uint8_t* region, std::size_t n,
                 std::uint8_t nodata);
void accumulate_votes(const std::uint8_t* mask, std::uint8_t mask_nodata,
                      std::uint8_t* votes, std::uint8_t* invalid, std::size_t n);
std::uint64_t count_eq(const std::uint8_t* v, std::uint8_t target, std::size_t n);
std::uint64_t count_eq_valid(const std::uint8_t* v, const std::uint8_t* invalid,
                             std::uint8_t target, std::size_t n);
PairCounts pair_agreement(const std::uint8_t* a, const std::uint8_t* b,
                          const std::uint8_t* invalid, std::size_t n);
} // namespace scalar

#if defined(COVERMAP_ENABLE_AVX2)
namespace avx2 {
void binarize_class_set(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                        std::span<const std::int32_t> codes, std::int32_t nodata,
                        std::uint8_t out_nodata);
void binarize_ge(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                 std::int32_t cutoff, std::int32_t nodata, std::uint8_t out_nodata);
void binarize_in_range(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                       std::int32_t lo, std::int32_t hi, std::int32_t nodata,
                       std::uint8_t out_nodata);
void mask_out_i32(std::int32_t* values, const std::uint8_t* region, std::size_t n,
                  std::int32_t nodata);
void mask_out_u8(std::uint8_t* values, const std::uint8_t* region, std::size_t n,
                 std::uint8_t nodata);
void accumulate_votes(const std::uint8_t* mask, std::uint8_t mask_nodata,
                      std::uint8_t* votes, std::uint8_t* invalid, std::size_t n);
std::uint64_t count_eq(const std::uint8_t* v, std::uint8_t target, std::size_t n);
std::uint64_t count_eq_valid(const std::uint8_t* v, const std::uint8_t* invalid,
                             std::uint8_t target, std::size_t n);
PairCounts pair_agreement(const std::uint8_t* a, const std::uint8_t* b,
                          const std::uint8_t* invalid, std::size_t n);
} // namespace avx2
#endif

} // namespace covermap::kernels
