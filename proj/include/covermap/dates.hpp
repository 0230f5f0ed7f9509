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

#include <compare>
#include <cstdint>
#include <string>

namespace covermap {

// Calendar date in the proleptic Gregorian calendar. All file formats use
// ISO-8601 (YYYY-MM-DD).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

Date parse_date(const std::string& iso);
std::string to_string(const Date& d);

// Days since 1970-01-01; negative before the epoch.
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t z);

// Calendar year containing the majority of the days in [start, end]
// (inclusive). Ties resolve to the earlier year.
int majority_year(const Date& start, const Date& end);

} // namespace covermap
