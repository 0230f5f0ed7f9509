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

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "covermap/errors.hpp"
#include "covermap/pipeline.hpp"
#include "covermap/textio.hpp"
#include "covermap/version.hpp"

namespace {

using covermap::CommandResult;
using covermap::RunOptions;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string exclude;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* config = cmd->add_option("--config", args.config_path, "Run config JSON");
    if (config_required) config->required();
    cmd->add_option("--out", args.out_dir, "Output directory (overrides the config)");
    cmd->add_option("--seed", args.seed, "Random seed (overrides the config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--exclude", args.exclude, "Comma-separated map names to exclude");
    cmd->add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
}

RunOptions make_options(const CommonArgs& args) {
    RunOptions options;
    if (!args.out_dir.empty()) options.out_dir = args.out_dir;
    if (args.seed_set) options.seed = args.seed;
    options.threads = args.threads;
    std::size_t start = 0;
    while (start <= args.exclude.size() && !args.exclude.empty()) {
        std::size_t end = args.exclude.find(',', start);
        if (end == std::string::npos) end = args.exclude.size();
        const std::string name = args.exclude.substr(start, end - start);
        if (!name.empty()) options.exclude.insert(name);
        if (end == args.exclude.size()) break;
        start = end + 1;
    }
    return options;
}

int finish(const CommandResult& result) {
    for (const covermap::FailureRecord& f : result.failures) {
        std::fprintf(stderr, "failed: %s / %s: %s\n", f.country.c_str(), f.map.c_str(),
                     f.error.c_str());
    }
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cropland cover-map intercomparison toolkit"};
    app.set_version_flag("--version", std::string("covermap ") + covermap::kVersion);
    app.require_subcommand(1);

    CommonArgs assess_args, consensus_args, ensemble_args, correlate_args, timeseries_args,
        sample_args;
    std::string country, region, metrics_csv, registry_path, ref_years_csv;
    std::string design = "uniform", alloc_spec, strata_path;
    std::size_t sample_n = 0;

    CLI::App* assess = app.add_subcommand("assess", "Score every configured map against its "
                                                    "reference dataset");
    add_common(assess, assess_args, true);

    CLI::App* consensus = app.add_subcommand("consensus", "Vote-count raster, agreement summary, "
                                                          "and pairwise agreement matrix");
    add_common(consensus, consensus_args, true);
    consensus->add_option("--country", country, "Country name from the config")->required();

    CLI::App* ensemble = app.add_subcommand("ensemble", "Majority-vote mask for one country");
    add_common(ensemble, ensemble_args, true);
    ensemble->add_option("--country", country, "Country name from the config")->required();

    CLI::App* correlate = app.add_subcommand("correlate", "Correlate metrics against resolution "
                                                          "and temporal mismatch");
    add_common(correlate, correlate_args, false);
    correlate->add_option("--metrics", metrics_csv, "Metrics CSV (defaults to <out>/metrics.csv "
                                                    "of the config)");
    correlate->add_option("--registry", registry_path, "Product registry JSON");
    correlate->add_option("--ref-years", ref_years_csv, "country,year CSV of reference years");

    CLI::App* timeseries = app.add_subcommand("timeseries", "Mask-gated vegetation-index time "
                                                            "series");
    add_common(timeseries, timeseries_args, true);
    timeseries->add_option("--country", country, "Country name from the config")->required();
    timeseries->add_option("--region", region, "Named admin region instead of the whole country");

    CLI::App* sample = app.add_subcommand("sample", "Draw reference sample locations");
    add_common(sample, sample_args, true);
    sample->add_option("--country", country, "Country name from the config")->required();
    sample->add_option("--design", design, "uniform or stratified");
    sample->add_option("--n", sample_n, "Point count (uniform design)");
    sample->add_option("--strata", strata_path, "Strata raster (stratified design)");
    sample->add_option("--alloc", alloc_spec,
                       "stratum:count[,stratum:count...] (stratified design)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (assess->parsed()) {
            const auto config = covermap::load_run_config(assess_args.config_path);
            return finish(covermap::cmd_assess(config, make_options(assess_args)));
        }
        if (consensus->parsed()) {
            const auto config = covermap::load_run_config(consensus_args.config_path);
            return finish(covermap::cmd_consensus(config, country, make_options(consensus_args)));
        }
        if (ensemble->parsed()) {
            const auto config = covermap::load_run_config(ensemble_args.config_path);
            return finish(covermap::cmd_ensemble(config, country, make_options(ensemble_args)));
        }
        if (correlate->parsed()) {
            RunOptions options = make_options(correlate_args);
            std::optional<std::map<std::string, int>> ref_years;
            std::filesystem::path metrics;
            std::filesystem::path registry;
            if (!correlate_args.config_path.empty()) {
                const auto config = covermap::load_run_config(correlate_args.config_path);
                metrics = metrics_csv.empty() ? config.out_dir / "metrics.csv"
                                              : std::filesystem::path(metrics_csv);
                registry = registry_path.empty() ? config.registry_path
                                                 : std::filesystem::path(registry_path);
                if (!options.out_dir) options.out_dir = config.out_dir;
                ref_years = covermap::reference_years_from_config(config);
            } else {
                if (metrics_csv.empty() || registry_path.empty()) {
                    throw covermap::SchemaError(
                        "correlate needs --config, or --metrics and --registry");
                }
                metrics = metrics_csv;
                registry = registry_path;
            }
            if (!ref_years_csv.empty()) {
                ref_years = covermap::load_reference_years(ref_years_csv);
            }
            return finish(covermap::cmd_correlate(metrics, registry, ref_years, options));
        }
        if (timeseries->parsed()) {
            const auto config = covermap::load_run_config(timeseries_args.config_path);
            const std::optional<std::string> region_opt =
                region.empty() ? std::nullopt : std::optional<std::string>(region);
            return finish(
                covermap::cmd_timeseries(config, country, region_opt, make_options(timeseries_args)));
        }
        if (sample->parsed()) {
            const auto config = covermap::load_run_config(sample_args.config_path);
            covermap::SampleRequest request;
            request.design = design;
            request.n = sample_n;
            if (!strata_path.empty()) request.strata_raster = strata_path;
            std::size_t start = 0;
            while (start < alloc_spec.size()) {
                std::size_t end = alloc_spec.find(',', start);
                if (end == std::string::npos) end = alloc_spec.size();
                const std::string item = alloc_spec.substr(start, end - start);
                const std::size_t colon = item.find(':');
                if (colon == std::string::npos) {
                    throw covermap::SchemaError("bad --alloc entry '" + item +
                                                "', expected stratum:count");
                }
                request.allocation[static_cast<std::int32_t>(
                    covermap::parse_int(item.substr(0, colon)))] =
                    static_cast<std::size_t>(covermap::parse_int(item.substr(colon + 1)));
                start = end + 1;
            }
            return finish(covermap::cmd_sample(config, country, request, make_options(sample_args)));
        }
    } catch (const covermap::SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
