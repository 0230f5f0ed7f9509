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

#include "covermap/dates.hpp"
#include "covermap/errors.hpp"
#include "covermap/sha256.hpp"
#include "covermap/textio.hpp"

using namespace covermap;

TEST_CASE("dates parse and format ISO-8601") {
    const Date d = parse_date("2019-02-28");
    CHECK(d == Date{2019, 2, 28});
    CHECK(to_string(d) == "2019-02-28");
    CHECK_THROWS_AS(parse_date("2019-13-01"), SchemaError);
    CHECK_THROWS_AS(parse_date("2019-02-30"), SchemaError);
    CHECK_THROWS_AS(parse_date("not a date"), SchemaError);
    CHECK(parse_date("2020-02-29") == Date{2020, 2, 29});
}

TEST_CASE("civil day conversions round-trip") {
    CHECK(days_from_civil(Date{1970, 1, 1}) == 0);
    CHECK(days_from_civil(Date{2000, 3, 1}) == 11017);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> day(-200000, 200000);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t z = day(rng);
        CHECK(days_from_civil(civil_from_days(z)) == z);
    }
}

TEST_CASE("majority year of a validity period") {
    // Sep 2020 - Aug 2021: 122 days of 2020, 243 of 2021.
    CHECK(majority_year(Date{2020, 9, 1}, Date{2021, 8, 31}) == 2021);
    // Feb 2019 - Jan 2020: mostly 2019.
    CHECK(majority_year(Date{2019, 2, 1}, Date{2020, 1, 31}) == 2019);
    CHECK(majority_year(Date{2019, 1, 1}, Date{2019, 12, 31}) == 2019);
    // Single day.
    CHECK(majority_year(Date{2021, 6, 1}, Date{2021, 6, 1}) == 2021);
    CHECK_THROWS_AS(majority_year(Date{2021, 6, 1}, Date{2021, 5, 1}), ValueError);
}

TEST_CASE("fmt_double round-trips exact values") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        CHECK(parse_double(fmt_double(v)) == v);
    }
    CHECK(fmt_fixed(0.8975, 2) == "0.90");
    CHECK(fmt_fixed(0.9125, 2) == "0.91");
}

TEST_CASE("csv field splitting and escaping") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
    CHECK(split_csv_line("\"a,b\",c") == std::vector<std::string>{"a,b", "c"});
    CHECK(split_csv_line("\"he said \"\"hi\"\"\",x") ==
          std::vector<std::string>{"he said \"hi\"", "x"});
    CHECK(csv_escape("plain") == "plain");
    CHECK(split_csv_line(csv_escape("a,b\"c") + ",tail")[0] == "a,b\"c");
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // One block-boundary case (56 bytes forces the two-block tail path).
    CHECK(sha256_hex(std::string(56, 'a')) ==
          "b35439a4ac6f0948b6d6f9e3c6af0f5f590ce20f1bde7090ef7970686ec6738a");
}
