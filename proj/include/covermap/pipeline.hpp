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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "covermap/grid.hpp"

namespace covermap {

struct CountryConfig {
    std::string name;
    std::filesystem::path boundary;      // country polygon, GeoJSON
    std::filesystem::path reference_csv; // consolidated reference points
    // Product name -> raster path; composite products point at a frame
    // manifest instead. Order follows the config document.
    std::vector<std::pair<std::string, std::filesystem::path>> maps;
    GridSpec target_grid;
    std::optional<std::filesystem::path> ndvi_manifest;
    std::vector<std::pair<std::string, std::filesystem::path>> regions;
    std::map<std::string, int> map_years; // per-country edition overrides
};

struct RunConfig {
    std::filesystem::path registry_path;
    std::vector<CountryConfig> countries;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    std::string config_digest; // sha256 of the config document

    const CountryConfig& country(const std::string& name) const;
};

// Parses the run-config JSON; relative paths resolve against the config
// file's directory. Referenced files must exist.
RunConfig load_run_config(const std::filesystem::path& path);

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::set<std::string> exclude;
    int threads = 1;
};

struct FailureRecord {
    std::string country;
    std::string map;
    std::string error;
};

// Exit contract: 0 success, 1 config/schema error (raised as SchemaError
// before any command runs), 2 partial failures, 3 total failure.
struct CommandResult {
    int exit_code = 0;
    std::vector<FailureRecord> failures;
};

CommandResult cmd_assess(const RunConfig& config, const RunOptions& options);
CommandResult cmd_consensus(const RunConfig& config, const std::string& country,
                            const RunOptions& options);
CommandResult cmd_ensemble(const RunConfig& config, const std::string& country,
                           const RunOptions& options);

// Correlations from a metrics CSV (as written by cmd_assess, or the shipped
// paper-table fixture). Mean-per-map rows (country == "Mean") are used when
// present; otherwise means are recomputed from the per-country rows.
// `reference_years` (country -> label year) enables the temporal-mismatch
// correlations.
CommandResult cmd_correlate(const std::filesystem::path& metrics_csv,
                            const std::filesystem::path& registry_path,
                            const std::optional<std::map<std::string, int>>& reference_years,
                            const RunOptions& options);

// country,year CSV -> map; the shipped fixture reference_years.csv uses this.
std::map<std::string, int> load_reference_years(const std::filesystem::path& path);

// Majority year of each configured country's reference validity period.
std::map<std::string, int> reference_years_from_config(const RunConfig& config);

CommandResult cmd_timeseries(const RunConfig& config, const std::string& country,
                             const std::optional<std::string>& region,
                             const RunOptions& options);

struct SampleRequest {
    std::string design; // "uniform" | "stratified"
    std::size_t n = 0;  // uniform only
    std::optional<std::filesystem::path> strata_raster;
    std::map<std::int32_t, std::size_t> allocation; // stratified only
};

CommandResult cmd_sample(const RunConfig& config, const std::string& country,
                         const SampleRequest& request, const RunOptions& options);

} // namespace covermap
