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

#include "kernels_impl.hpp"

#include <atomic>

#include "covermap/errors.hpp"

namespace covermap::kernels {

namespace {

struct Table {
    decltype(&scalar::binarize_class_set) binarize_class_set;
    decltype(&scalar::binarize_ge) binarize_ge;
    decltype(&scalar::binarize_in_range) binarize_in_range;
    decltype(&scalar::mask_out_i32) mask_out_i32;
    decltype(&scalar::mask_out_u8) mask_out_u8;
    decltype(&scalar::accumulate_votes) accumulate_votes;
    decltype(&scalar::count_eq) count_eq;
    decltype(&scalar::count_eq_valid) count_eq_valid;
    decltype(&scalar::pair_agreement) pair_agreement;
};

constexpr Table kScalarTable = {
    &scalar::binarize_class_set, &scalar::binarize_ge, &scalar::binarize_in_range,
    &scalar::mask_out_i32,       &scalar::mask_out_u8, &scalar::accumulate_votes,
    &scalar::count_eq,           &scalar::count_eq_valid, &scalar::pair_agreement,
};

#if defined(COVERMAP_ENABLE_AVX2)
constexpr Table kAvx2Table = {
    &avx2::binarize_class_set, &avx2::binarize_ge, &avx2::binarize_in_range,
    &avx2::mask_out_i32,       &avx2::mask_out_u8, &avx2::accumulate_votes,
    &avx2::count_eq,           &avx2::count_eq_valid, &avx2::pair_agreement,
};
#endif

bool cpu_has_avx2() {
#if defined(COVERMAP_ENABLE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect_backend() {
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

const Table& table_for(Backend b) {
#if defined(COVERMAP_ENABLE_AVX2)
    if (b == Backend::Avx2) return kAvx2Table;
#else
    (void)b;
#endif
    return kScalarTable;
}

const Table& active_table() {
    return table_for(g_backend.load(std::memory_order_relaxed));
}

} // namespace

Backend active_backend() {
    return g_backend.load(std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_supported(Backend b) {
    if (b == Backend::Scalar) return true;
    return cpu_has_avx2();
}

void set_backend(Backend b) {
    if (!backend_supported(b)) {
        throw ValueError(std::string("kernel backend not available: ") + backend_name(b));
    }
    g_backend.store(b, std::memory_order_relaxed);
}

void binarize_class_set(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                        std::span<const std::int32_t> codes, std::int32_t nodata,
                        std::uint8_t out_nodata) {
    active_table().binarize_class_set(src, dst, n, codes, nodata, out_nodata);
}

void binarize_ge(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                 std::int32_t cutoff, std::int32_t nodata, std::uint8_t out_nodata) {
    active_table().binarize_ge(src, dst, n, cutoff, nodata, out_nodata);
}

void binarize_in_range(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                       std::int32_t lo, std::int32_t hi, std::int32_t nodata,
                       std::uint8_t out_nodata) {
    active_table().binarize_in_range(src, dst, n, lo, hi, nodata, out_nodata);
}

void mask_out_i32(std::int32_t* values, const std::uint8_t* region, std::size_t n,
                  std::int32_t nodata) {
    active_table().mask_out_i32(values, region, n, nodata);
}

void mask_out_u8(std::uint8_t* values, const std::uint8_t* region, std::size_t n,
                 std::uint8_t nodata) {
    active_table().mask_out_u8(values, region, n, nodata);
}

void accumulate_votes(const std::uint8_t* mask, std::uint8_t mask_nodata,
                      std::uint8_t* votes, std::uint8_t* invalid, std::size_t n) {
    active_table().accumulate_votes(mask, mask_nodata, votes, invalid, n);
}

std::uint64_t count_eq(const std::uint8_t* v, std::uint8_t target, std::size_t n) {
    return active_table().count_eq(v, target, n);
}

std::uint64_t count_eq_valid(const std::uint8_t* v, const std::uint8_t* invalid,
                             std::uint8_t target, std::size_t n) {
    return active_table().count_eq_valid(v, invalid, target, n);
}

PairCounts pair_agreement(const std::uint8_t* a, const std::uint8_t* b,
                          const std::uint8_t* invalid, std::size_t n) {
    return active_table().pair_agreement(a, b, invalid, n);
}

} // namespace covermap::kernels
