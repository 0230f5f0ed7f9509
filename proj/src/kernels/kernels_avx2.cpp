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

// AVX2 kernels. Compiled with -mavx2 and selected at runtime; every loop
// falls back to the scalar kernel for the tail. Integer arithmetic only, so
// results are bitwise identical to the reference regardless of lane order.

#include "kernels_impl.hpp"

#if defined(COVERMAP_ENABLE_AVX2)

#include <immintrin.h>

namespace covermap::kernels::avx2 {

namespace {

// Pack 8 lanes of i32 in [0, 255] down to 8 bytes.
inline void store_packed_u8(std::uint8_t* dst, __m256i lanes) {
    const __m128i lo = _mm256_castsi256_si128(lanes);
    const __m128i hi = _mm256_extracti128_si256(lanes, 1);
    const __m128i p16 = _mm_packus_epi32(lo, hi);
    const __m128i p8 = _mm_packus_epi16(p16, p16);
    _mm_storel_epi64(reinterpret_cast<__m128i*>(dst), p8);
}

// Horizontal sum of 0/1 bytes via SAD against zero.
inline __m256i byte_sums(__m256i ones_bytes, __m256i acc) {
    return _mm256_add_epi64(acc, _mm256_sad_epu8(ones_bytes, _mm256_setzero_si256()));
}

inline std::uint64_t reduce_u64(__m256i acc) {
    alignas(32) std::uint64_t parts[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(parts), acc);
    return parts[0] + parts[1] + parts[2] + parts[3];
}

} // namespace

void binarize_class_set(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                        std::span<const std::int32_t> codes, std::int32_t nodata,
                        std::uint8_t out_nodata) {
    const __m256i vnodata = _mm256_set1_epi32(nodata);
    const __m256i vone = _mm256_set1_epi32(1);
    const __m256i vout_nodata = _mm256_set1_epi32(out_nodata);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i hit = _mm256_setzero_si256();
        for (const std::int32_t c : codes) {
            hit = _mm256_or_si256(hit, _mm256_cmpeq_epi32(v, _mm256_set1_epi32(c)));
        }
        const __m256i is_nodata = _mm256_cmpeq_epi32(v, vnodata);
        __m256i r = _mm256_and_si256(hit, vone);
        r = _mm256_blendv_epi8(r, vout_nodata, is_nodata);
        store_packed_u8(dst + i, r);
    }
    scalar::binarize_class_set(src + i, dst + i, n - i, codes, nodata, out_nodata);
}

void binarize_ge(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                 std::int32_t cutoff, std::int32_t nodata, std::uint8_t out_nodata) {
    // v >= cutoff  <=>  v > cutoff - 1, except cutoff == INT32_MIN (always true).
    const bool always = cutoff == INT32_MIN;
    const __m256i vcut = _mm256_set1_epi32(always ? 0 : cutoff - 1);
    const __m256i vnodata = _mm256_set1_epi32(nodata);
    const __m256i vone = _mm256_set1_epi32(1);
    const __m256i vout_nodata = _mm256_set1_epi32(out_nodata);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        const __m256i hit = always ? _mm256_set1_epi32(-1) : _mm256_cmpgt_epi32(v, vcut);
        const __m256i is_nodata = _mm256_cmpeq_epi32(v, vnodata);
        __m256i r = _mm256_and_si256(hit, vone);
        r = _mm256_blendv_epi8(r, vout_nodata, is_nodata);
        store_packed_u8(dst + i, r);
    }
    scalar::binarize_ge(src + i, dst + i, n - i, cutoff, nodata, out_nodata);
}

void binarize_in_range(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                       std::int32_t lo, std::int32_t hi, std::int32_t nodata,
                       std::uint8_t out_nodata) {
    const bool lo_always = lo == INT32_MIN;
    const bool hi_always = hi == INT32_MAX;
    const __m256i vlo = _mm256_set1_epi32(lo_always ? 0 : lo - 1);
    const __m256i vhi = _mm256_set1_epi32(hi_always ? 0 : hi + 1);
    const __m256i vnodata = _mm256_set1_epi32(nodata);
    const __m256i vone = _mm256_set1_epi32(1);
    const __m256i vout_nodata = _mm256_set1_epi32(out_nodata);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        const __m256i ge = lo_always ? _mm256_set1_epi32(-1) : _mm256_cmpgt_epi32(v, vlo);
        const __m256i le = hi_always ? _mm256_set1_epi32(-1) : _mm256_cmpgt_epi32(vhi, v);
        const __m256i is_nodata = _mm256_cmpeq_epi32(v, vnodata);
        __m256i r = _mm256_and_si256(_mm256_and_si256(ge, le), vone);
        r = _mm256_blendv_epi8(r, vout_nodata, is_nodata);
        store_packed_u8(dst + i, r);
    }
    scalar::binarize_in_range(src + i, dst + i, n - i, lo, hi, nodata, out_nodata);
}

void mask_out_i32(std::int32_t* values, const std::uint8_t* region, std::size_t n,
                  std::int32_t nodata) {
    const __m256i vnodata = _mm256_set1_epi32(nodata);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m128i rbytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(region + i));
        const __m256i r32 = _mm256_cvtepu8_epi32(rbytes);
        const __m256i zero_here = _mm256_cmpeq_epi32(r32, _mm256_setzero_si256());
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values + i));
        const __m256i out = _mm256_blendv_epi8(v, vnodata, zero_here);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(values + i), out);
    }
    scalar::mask_out_i32(values + i, region + i, n - i, nodata);
}

void mask_out_u8(std::uint8_t* values, const std::uint8_t* region, std::size_t n,
                 std::uint8_t nodata) {
    const __m256i vnodata = _mm256_set1_epi8(static_cast<char>(nodata));
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(region + i));
        const __m256i zero_here = _mm256_cmpeq_epi8(r, _mm256_setzero_si256());
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values + i));
        const __m256i out = _mm256_blendv_epi8(v, vnodata, zero_here);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(values + i), out);
    }
    scalar::mask_out_u8(values + i, region + i, n - i, nodata);
}

void accumulate_votes(const std::uint8_t* mask, std::uint8_t mask_nodata,
                      std::uint8_t* votes, std::uint8_t* invalid, std::size_t n) {
    const __m256i vone = _mm256_set1_epi8(1);
    const __m256i vnodata = _mm256_set1_epi8(static_cast<char>(mask_nodata));
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + i));
        const __m256i crop = _mm256_and_si256(_mm256_cmpeq_epi8(m, vone), vone);
        const __m256i miss = _mm256_and_si256(_mm256_cmpeq_epi8(m, vnodata), vone);
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(votes + i));
        const __m256i inv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(invalid + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(votes + i), _mm256_add_epi8(v, crop));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(invalid + i), _mm256_or_si256(inv, miss));
    }
    scalar::accumulate_votes(mask + i, mask_nodata, votes + i, invalid + i, n - i);
}

std::uint64_t count_eq(const std::uint8_t* v, std::uint8_t target, std::size_t n) {
    const __m256i vt = _mm256_set1_epi8(static_cast<char>(target));
    const __m256i vone = _mm256_set1_epi8(1);
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i));
        acc = byte_sums(_mm256_and_si256(_mm256_cmpeq_epi8(x, vt), vone), acc);
    }
    return reduce_u64(acc) + scalar::count_eq(v + i, target, n - i);
}

std::uint64_t count_eq_valid(const std::uint8_t* v, const std::uint8_t* invalid,
                             std::uint8_t target, std::size_t n) {
    const __m256i vt = _mm256_set1_epi8(static_cast<char>(target));
    const __m256i vone = _mm256_set1_epi8(1);
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i));
        const __m256i inv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(invalid + i));
        const __m256i ok = _mm256_cmpeq_epi8(inv, _mm256_setzero_si256());
        const __m256i eq = _mm256_cmpeq_epi8(x, vt);
        acc = byte_sums(_mm256_and_si256(_mm256_and_si256(eq, ok), vone), acc);
    }
    return reduce_u64(acc) + scalar::count_eq_valid(v + i, invalid + i, target, n - i);
}

PairCounts pair_agreement(const std::uint8_t* a, const std::uint8_t* b,
                          const std::uint8_t* invalid, std::size_t n) {
    const __m256i vone = _mm256_set1_epi8(1);
    __m256i acc_agree = _mm256_setzero_si256();
    __m256i acc_valid = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i inv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(invalid + i));
        const __m256i ok = _mm256_cmpeq_epi8(inv, _mm256_setzero_si256());
        const __m256i eq = _mm256_cmpeq_epi8(va, vb);
        acc_valid = byte_sums(_mm256_and_si256(ok, vone), acc_valid);
        acc_agree = byte_sums(_mm256_and_si256(_mm256_and_si256(eq, ok), vone), acc_agree);
    }
    PairCounts out{reduce_u64(acc_agree), reduce_u64(acc_valid)};
    const PairCounts tail = scalar::pair_agreement(a + i, b + i, invalid + i, n - i);
    out.agree += tail.agree;
    out.valid += tail.valid;
    return out;
}

} // namespace covermap::kernels::avx2

#endif // COVERMAP_ENABLE_AVX2
