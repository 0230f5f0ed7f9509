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

#include "covermap/dates.hpp"

#include <algorithm>
#include <cstdio>

#include "covermap/errors.hpp"

namespace covermap {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

} // namespace

Date parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    const int got = std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail);
    if (got != 3 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
        throw SchemaError("invalid ISO-8601 date: '" + iso + "'");
    }
    return Date{y, m, d};
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

// Howard Hinnant's civil-from-days/days-from-civil algorithms.
std::int64_t days_from_civil(const Date& d) {
    const int y = d.year - (d.month <= 2);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(d.month + (d.month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d.day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int majority_year(const Date& start, const Date& end) {
    if (end < start) throw ValueError("validity period ends before it starts");
    int best_year = start.year;
    std::int64_t best_days = -1;
    for (int y = start.year; y <= end.year; ++y) {
        const std::int64_t y_first = days_from_civil(Date{y, 1, 1});
        const std::int64_t y_last = days_from_civil(Date{y, 12, 31});
        const std::int64_t lo = std::max(y_first, days_from_civil(start));
        const std::int64_t hi = std::min(y_last, days_from_civil(end));
        const std::int64_t covered = hi - lo + 1;
        if (covered > best_days) {
            best_days = covered;
            best_year = y;
        }
    }
    return best_year;
}

} // namespace covermap
