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

#include <doctest.h>

#include <random>
#include <vector>

#include "covermap/errors.hpp"
#include "covermap/kernels.hpp"
#include "kernels/kernels_impl.hpp" // scalar reference entry points

using namespace covermap;
namespace k = covermap::kernels;

namespace {

// Runs fn under each available backend and requires bitwise-equal results.
template <typename Fn>
void for_each_backend(Fn&& fn) {
    const k::Backend original = k::active_backend();
    fn(k::Backend::Scalar);
    if (k::backend_supported(k::Backend::Avx2)) fn(k::Backend::Avx2);
    k::set_backend(original);
}

struct Buffers {
    std::vector<std::int32_t> i32;
    std::vector<std::uint8_t> a, b, invalid;
};

Buffers random_buffers(std::mt19937_64& rng, std::size_t n) {
    Buffers buf;
    buf.i32.resize(n);
    buf.a.resize(n);
    buf.b.resize(n);
    buf.invalid.resize(n);
    std::uniform_int_distribution<std::int32_t> wide(-1000, 1000);
    std::uniform_int_distribution<int> mask_value(0, 2);
    std::uniform_int_distribution<int> coin(0, 9);
    for (std::size_t i = 0; i < n; ++i) {
        buf.i32[i] = wide(rng);
        buf.a[i] = mask_value(rng) == 2 ? 255 : static_cast<std::uint8_t>(mask_value(rng));
        buf.b[i] = mask_value(rng) == 2 ? 255 : static_cast<std::uint8_t>(mask_value(rng));
        buf.invalid[i] = coin(rng) == 0;
    }
    return buf;
}

// Awkward sizes cover the vector body plus every tail length.
const std::size_t kSizes[] = {0, 1, 7, 8, 31, 32, 33, 63, 64, 100, 1000, 4097};

} // namespace

TEST_CASE("backend dispatch reports a valid active backend") {
    CHECK(k::backend_supported(k::Backend::Scalar));
    const k::Backend active = k::active_backend();
    CHECK((active == k::Backend::Scalar || active == k::Backend::Avx2));
    CHECK(std::string(k::backend_name(k::Backend::Scalar)) == "scalar");
    CHECK(std::string(k::backend_name(k::Backend::Avx2)) == "avx2");
    if (!k::backend_supported(k::Backend::Avx2)) {
        CHECK_THROWS_AS(k::set_backend(k::Backend::Avx2), ValueError);
    }
}

TEST_CASE("binarize kernels match the scalar reference on every backend") {
    std::mt19937_64 rng(101);
    for (const std::size_t n : kSizes) {
        const Buffers buf = random_buffers(rng, n);
        const std::vector<std::int32_t> codes = {-3, 0, 7, 500};

        std::vector<std::uint8_t> expected(n), got(n);
        k::scalar::binarize_class_set(buf.i32.data(), expected.data(), n, codes, -1, 255);
        for_each_backend([&](k::Backend backend) {
            k::set_backend(backend);
            k::binarize_class_set(buf.i32.data(), got.data(), n, codes, -1, 255);
            REQUIRE(got == expected);
        });

        k::scalar::binarize_ge(buf.i32.data(), expected.data(), n, 51, -1, 255);
        for_each_backend([&](k::Backend backend) {
            k::set_backend(backend);
            k::binarize_ge(buf.i32.data(), got.data(), n, 51, -1, 255);
            REQUIRE(got == expected);
        });

        k::scalar::binarize_in_range(buf.i32.data(), expected.data(), n, 5, 95, -1, 255);
        for_each_backend([&](k::Backend backend) {
            k::set_backend(backend);
            k::binarize_in_range(buf.i32.data(), got.data(), n, 5, 95, -1, 255);
            REQUIRE(got == expected);
        });
    }
}

TEST_CASE("binarize_ge handles extreme cutoffs") {
    const std::vector<std::int32_t> values = {INT32_MIN, -1, 0, 1, INT32_MAX};
    std::vector<std::uint8_t> out(values.size());
    for_each_backend([&](k::Backend backend) {
        k::set_backend(backend);
        k::binarize_ge(values.data(), out.data(), values.size(), INT32_MIN, -1000000, 255);
        CHECK(out == std::vector<std::uint8_t>{1, 1, 1, 1, 1});
        k::binarize_ge(values.data(), out.data(), values.size(), INT32_MAX, -1000000, 255);
        CHECK(out == std::vector<std::uint8_t>{0, 0, 0, 0, 1});
    });
}

TEST_CASE("mask_out kernels match the scalar reference") {
    std::mt19937_64 rng(102);
    for (const std::size_t n : kSizes) {
        const Buffers buf = random_buffers(rng, n);
        std::vector<std::uint8_t> region(n);
        for (std::size_t i = 0; i < n; ++i) region[i] = buf.invalid[i] ? 0 : 1;

        std::vector<std::int32_t> expected_i32 = buf.i32;
        k::scalar::mask_out_i32(expected_i32.data(), region.data(), n, -9);
        std::vector<std::uint8_t> expected_u8 = buf.a;
        k::scalar::mask_out_u8(expected_u8.data(), region.data(), n, 255);

        for_each_backend([&](k::Backend backend) {
            k::set_backend(backend);
            std::vector<std::int32_t> got_i32 = buf.i32;
            k::mask_out_i32(got_i32.data(), region.data(), n, -9);
            REQUIRE(got_i32 == expected_i32);
            std::vector<std::uint8_t> got_u8 = buf.a;
            k::mask_out_u8(got_u8.data(), region.data(), n, 255);
            REQUIRE(got_u8 == expected_u8);
        });
    }
}

TEST_CASE("vote and count kernels match the scalar reference") {
    std::mt19937_64 rng(103);
    for (const std::size_t n : kSizes) {
        const Buffers buf = random_buffers(rng, n);

        std::vector<std::uint8_t> votes_ref(n, 3), invalid_ref(n, 0);
        k::scalar::accumulate_votes(buf.a.data(), 255, votes_ref.data(), invalid_ref.data(), n);
        k::scalar::accumulate_votes(buf.b.data(), 255, votes_ref.data(), invalid_ref.data(), n);

        for_each_backend([&](k::Backend backend) {
            k::set_backend(backend);
            std::vector<std::uint8_t> votes(n, 3), invalid(n, 0);
            k::accumulate_votes(buf.a.data(), 255, votes.data(), invalid.data(), n);
            k::accumulate_votes(buf.b.data(), 255, votes.data(), invalid.data(), n);
            REQUIRE(votes == votes_ref);
            REQUIRE(invalid == invalid_ref);

            CHECK(k::count_eq(buf.a.data(), 1, n) == k::scalar::count_eq(buf.a.data(), 1, n));
            CHECK(k::count_eq_valid(buf.a.data(), buf.invalid.data(), 0, n) ==
                  k::scalar::count_eq_valid(buf.a.data(), buf.invalid.data(), 0, n));
            const auto got = k::pair_agreement(buf.a.data(), buf.b.data(), buf.invalid.data(), n);
            const auto ref =
                k::scalar::pair_agreement(buf.a.data(), buf.b.data(), buf.invalid.data(), n);
            CHECK(got.agree == ref.agree);
            CHECK(got.valid == ref.valid);
        });
    }
}

TEST_CASE("scalar kernels agree with naive per-element loops") {
    std::mt19937_64 rng(104);
    const std::size_t n = 517;
    const Buffers buf = random_buffers(rng, n);
    const std::vector<std::int32_t> codes = {11, 14, 20};

    std::vector<std::uint8_t> got(n);
    k::scalar::binarize_class_set(buf.i32.data(), got.data(), n, codes, -1, 255);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t v = buf.i32[i];
        const std::uint8_t want =
            v == -1 ? 255 : static_cast<std::uint8_t>(v == 11 || v == 14 || v == 20);
        REQUIRE(got[i] == want);
    }

    std::uint64_t agree = 0, valid = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (buf.invalid[i] == 0) {
            ++valid;
            agree += buf.a[i] == buf.b[i];
        }
    }
    const auto counts = k::scalar::pair_agreement(buf.a.data(), buf.b.data(), buf.invalid.data(), n);
    CHECK(counts.agree == agree);
    CHECK(counts.valid == valid);
}
