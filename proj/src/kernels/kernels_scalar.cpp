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

// Reference kernels. These define the semantics; the vector variants must
// match them bit for bit.

#include "kernels_impl.hpp"

namespace covermap::kernels::scalar {

void binarize_class_set(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                        std::span<const std::int32_t> codes, std::int32_t nodata,
                        std::uint8_t out_nodata) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t v = src[i];
        if (v == nodata) {
            dst[i] = out_nodata;
            continue;
        }
        std::uint8_t hit = 0;
        for (const std::int32_t c : codes) hit |= (v == c);
        dst[i] = hit;
    }
}

void binarize_ge(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                 std::int32_t cutoff, std::int32_t nodata, std::uint8_t out_nodata) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t v = src[i];
        dst[i] = (v == nodata) ? out_nodata : static_cast<std::uint8_t>(v >= cutoff);
    }
}

void binarize_in_range(const std::int32_t* src, std::uint8_t* dst, std::size_t n,
                       std::int32_t lo, std::int32_t hi, std::int32_t nodata,
                       std::uint8_t out_nodata) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t v = src[i];
        dst[i] = (v == nodata) ? out_nodata : static_cast<std::uint8_t>(v >= lo && v <= hi);
    }
}

void mask_out_i32(std::int32_t* values, const std::uint8_t* region, std::size_t n,
                  std::int32_t nodata) {
    for (std::size_t i = 0; i < n; ++i) {
        if (region[i] == 0) values[i] = nodata;
    }
}

void mask_out_u8(std::uint8_t* values, const std::uint8_t* region, std::size_t n,
                 std::uint8_t nodata) {
    for (std::size_t i = 0; i < n; ++i) {
        if (region[i] == 0) values[i] = nodata;
    }
}

void accumulate_votes(const std::uint8_t* mask, std::uint8_t mask_nodata,
                      std::uint8_t* votes, std::uint8_t* invalid, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        votes[i] = static_cast<std::uint8_t>(votes[i] + (mask[i] == 1));
        invalid[i] |= (mask[i] == mask_nodata);
    }
}

std::uint64_t count_eq(const std::uint8_t* v, std::uint8_t target, std::size_t n) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += (v[i] == target);
    return count;
}

std::uint64_t count_eq_valid(const std::uint8_t* v, const std::uint8_t* invalid,
                             std::uint8_t target, std::size_t n) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += (v[i] == target && invalid[i] == 0);
    return count;
}

PairCounts pair_agreement(const std::uint8_t* a, const std::uint8_t* b,
                          const std::uint8_t* invalid, std::size_t n) {
    PairCounts out;
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = invalid[i] == 0;
        out.valid += ok;
        out.agree += (ok && a[i] == b[i]);
    }
    return out;
}

} // namespace covermap::kernels::scalar
