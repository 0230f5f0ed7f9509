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
#include <filesystem>
#include <string>
#include <vector>

namespace covermap {

// Shortest decimal form that round-trips the exact double value. All file
// output goes through this so reruns are byte-identical.
std::string fmt_double(double v);

// Fixed-point form, e.g. fmt_fixed(0.8975, 2) == "0.90".
std::string fmt_fixed(double v, int decimals);

double parse_double(const std::string& s);
std::int64_t parse_int(const std::string& s);

// RFC4180-style field splitting: comma separated, optional double-quote
// quoting with "" escapes. No embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

// Parsed CSV with a mandatory header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws SchemaError when absent.
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace covermap
