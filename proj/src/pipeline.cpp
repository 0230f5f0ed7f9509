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

#include "covermap/pipeline.hpp"

#include <algorithm>

#include <json.hpp>

#include "covermap/analysis.hpp"
#include "covermap/assess.hpp"
#include "covermap/consensus.hpp"
#include "covermap/errors.hpp"
#include "covermap/geojson.hpp"
#include "covermap/geotiff.hpp"
#include "covermap/parallel.hpp"
#include "covermap/plots.hpp"
#include "covermap/productmap.hpp"
#include "covermap/reference.hpp"
#include "covermap/sha256.hpp"
#include "covermap/textio.hpp"
#include "covermap/version.hpp"

namespace covermap {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kMetricNames[] = {"accuracy", "f1", "precision", "recall"};
constexpr const char* kMajorityVoteName = "Majority Vote";

// Every output file gets a JSON sidecar naming the toolkit, the config it
// came from, and the estimator conventions in effect.
void write_sidecar(const std::filesystem::path& output, const std::string& config_digest,
                   std::uint64_t seed) {
    ordered_json meta;
    meta["toolkit"] = "covermap";
    meta["version"] = kVersion;
    meta["config_digest"] = config_digest;
    meta["seed"] = seed;
    meta["rng"] = "mt19937_64";
    ordered_json estimators;
    estimators["standard_errors"] = "binomial, simple random sampling";
    estimators["f1_stderr"] = "relative-error propagation from precision and recall";
    estimators["mean_se"] = "sqrt(sum of se^2) / k";
    estimators["majority_tie"] = "non-crop";
    estimators["mode_tie"] = "smallest class code";
    estimators["stratified_scoring"] = "SRS estimator applied to all sampling designs";
    estimators["degenerate_metrics"] = "reported as 0 with se 0";
    meta["estimators"] = estimators;
    write_text_file(output.string() + ".meta.json", meta.dump(2) + "\n");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

void require_exists(const std::filesystem::path& p, const std::string& what) {
    if (!std::filesystem::exists(p)) {
        throw SchemaError(what + " does not exist: " + p.string());
    }
}

GridSpec grid_from_json(const ordered_json& j) {
    GridSpec g;
    g.origin_x = j.at("origin_x").get<double>();
    g.origin_y = j.at("origin_y").get<double>();
    g.pixel_w = j.at("pixel_w").get<double>();
    g.pixel_h = j.at("pixel_h").get<double>();
    g.width = j.at("width").get<int>();
    g.height = j.at("height").get<int>();
    g.crs_id = j.value("crs", "");
    g.validate();
    return g;
}

struct Frame {
    Date date;
    std::filesystem::path path;
};

std::vector<Frame> load_frame_manifest(const std::filesystem::path& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_text_file(path));
    } catch (const ordered_json::parse_error& e) {
        throw SchemaError("malformed frame manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_array() || doc.empty()) {
        throw SchemaError("frame manifest must be a non-empty array: " + path.string());
    }
    const std::filesystem::path base = path.parent_path();
    std::vector<Frame> frames;
    for (const auto& entry : doc) {
        Frame f;
        f.date = parse_date(entry.at("date").get<std::string>());
        f.path = resolve(base, entry.at("path").get<std::string>());
        frames.push_back(std::move(f));
    }
    std::sort(frames.begin(), frames.end(),
              [](const Frame& a, const Frame& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (!(frames[i - 1].date < frames[i].date)) {
            throw SchemaError("duplicate frame date in " + path.string());
        }
    }
    return frames;
}

// Reads one product's raster (mode-compositing dated frames for composite
// products, restricted to the reference validity period) and binarizes it.
BinaryMask prepare_mask(const ProductSpec& product, const std::filesystem::path& path,
                        const Date& period_start, const Date& period_end) {
    if (!product.composite) {
        return binarize(read_geotiff(path), product.rule);
    }
    const std::vector<Frame> manifest = load_frame_manifest(path);
    std::vector<std::pair<Date, CategoricalRaster>> frames;
    for (const Frame& f : manifest) {
        if (period_start <= f.date && f.date <= period_end) {
            frames.emplace_back(f.date, read_geotiff(f.path));
        }
    }
    if (frames.empty()) {
        throw ValueError("no frames of '" + product.name + "' fall inside the validity period " +
                         to_string(period_start) + ".." + to_string(period_end));
    }
    return binarize(mode_composite(frames), product.rule);
}

std::filesystem::path ensure_out_dir(const RunConfig& config, const RunOptions& options) {
    const std::filesystem::path out = options.out_dir.value_or(config.out_dir);
    if (out.empty()) throw SchemaError("no output directory configured");
    std::filesystem::create_directories(out);
    return out;
}

void write_failures_csv(const std::filesystem::path& out_dir,
                        const std::vector<FailureRecord>& failures,
                        const std::string& digest, std::uint64_t seed) {
    if (failures.empty()) return;
    std::string csv = "country,map,error\n";
    for (const FailureRecord& f : failures) {
        csv += csv_escape(f.country) + "," + csv_escape(f.map) + "," + csv_escape(f.error) + "\n";
    }
    const std::filesystem::path path = out_dir / "failures.csv";
    write_text_file(path, csv);
    write_sidecar(path, digest, seed);
}

double metric_value(const MetricSet& m, const std::string& name) {
    if (name == "accuracy") return m.accuracy;
    if (name == "f1") return m.f1;
    if (name == "precision") return m.precision;
    if (name == "recall") return m.recall;
    throw ValueError("unknown metric '" + name + "'");
}

double metric_stderr(const MetricSet& m, const std::string& name) {
    if (name == "accuracy") return m.se_accuracy;
    if (name == "f1") return m.se_f1;
    if (name == "precision") return m.se_precision;
    if (name == "recall") return m.se_recall;
    throw ValueError("unknown metric '" + name + "'");
}

} // namespace

const CountryConfig& RunConfig::country(const std::string& name) const {
    for (const CountryConfig& c : countries) {
        if (c.name == name) return c;
    }
    throw SchemaError("country '" + name + "' is not in the config");
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw SchemaError("malformed config JSON in " + path.string() + ": " + e.what());
    }
    const std::filesystem::path base = std::filesystem::absolute(path).parent_path();

    RunConfig config;
    config.config_digest = sha256_hex(text);
    if (!doc.contains("registry")) throw SchemaError("config lacks a registry path");
    config.registry_path = resolve(base, doc.at("registry").get<std::string>());
    require_exists(config.registry_path, "registry");
    config.out_dir = resolve(base, doc.value("output", "out"));
    config.seed = doc.value("seed", std::uint64_t{0});

    const auto countries = doc.find("countries");
    if (countries == doc.end() || !countries->is_array() || countries->empty()) {
        throw SchemaError("config lacks a countries array");
    }
    // Registry loaded once here so unknown map keys fail at config time.
    const std::vector<ProductSpec> registry = load_product_registry(config.registry_path);

    for (const auto& entry : *countries) {
        CountryConfig c;
        c.name = entry.value("name", "");
        if (c.name.empty()) throw SchemaError("country entry without a name");
        c.boundary = resolve(base, entry.at("boundary").get<std::string>());
        require_exists(c.boundary, "boundary of " + c.name);
        c.reference_csv = resolve(base, entry.at("reference").get<std::string>());
        require_exists(c.reference_csv, "reference CSV of " + c.name);
        c.target_grid = grid_from_json(entry.at("target_grid"));
        const auto maps = entry.find("maps");
        if (maps == entry.end() || !maps->is_object() || maps->empty()) {
            throw SchemaError("country '" + c.name + "' has no maps");
        }
        for (const auto& [map_name, map_path] : maps->items()) {
            find_product(registry, map_name);
            const std::filesystem::path p = resolve(base, map_path.get<std::string>());
            require_exists(p, "map '" + map_name + "' of " + c.name);
            c.maps.emplace_back(map_name, p);
        }
        if (entry.contains("ndvi_manifest")) {
            c.ndvi_manifest = resolve(base, entry.at("ndvi_manifest").get<std::string>());
            require_exists(*c.ndvi_manifest, "ndvi manifest of " + c.name);
        }
        if (entry.contains("regions")) {
            for (const auto& [region_name, region_path] : entry.at("regions").items()) {
                const std::filesystem::path p = resolve(base, region_path.get<std::string>());
                require_exists(p, "region '" + region_name + "' of " + c.name);
                c.regions.emplace_back(region_name, p);
            }
        }
        if (entry.contains("map_years")) {
            for (const auto& [map_name, year] : entry.at("map_years").items()) {
                c.map_years[map_name] = year.get<int>();
            }
        }
        config.countries.push_back(std::move(c));
    }
    return config;
}

// ---- assess ----

namespace {

struct CellResult {
    bool ok = false;
    std::string error;
    Evaluation evaluation;
    BinaryMask resampled; // on the country target grid, for the ensemble
};

struct MetricsCsv {
    std::string body = "country,map,metric,value,stderr,n,excluded,display\n";

    void add_row(const std::string& country, const std::string& map, const std::string& metric,
                 double value, double stderr_, std::size_t n, std::size_t excluded) {
        body += csv_escape(country) + "," + csv_escape(map) + "," + metric + "," +
                fmt_double(value) + "," + fmt_double(stderr_) + "," + std::to_string(n) + "," +
                std::to_string(excluded) + "," + fmt_fixed(value, 2) + "\n";
    }

    void add_set(const std::string& country, const std::string& map, const MetricSet& m,
                 std::size_t n, std::size_t excluded) {
        for (const char* metric : kMetricNames) {
            add_row(country, map, metric, metric_value(m, metric), metric_stderr(m, metric), n,
                    excluded);
        }
    }
};

} // namespace

CommandResult cmd_assess(const RunConfig& config, const RunOptions& options) {
    const std::filesystem::path out_dir = ensure_out_dir(config, options);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const std::vector<ProductSpec> registry = load_product_registry(config.registry_path);

    struct Cell {
        std::size_t country_idx;
        std::size_t map_idx;
    };
    std::vector<Cell> cells;
    std::vector<ReferenceDataset> datasets(config.countries.size());
    for (std::size_t ci = 0; ci < config.countries.size(); ++ci) {
        datasets[ci] = read_reference_csv(config.countries[ci].reference_csv);
        for (std::size_t mi = 0; mi < config.countries[ci].maps.size(); ++mi) {
            cells.push_back(Cell{ci, mi});
        }
    }
    if (cells.empty()) throw SchemaError("no maps configured");

    std::vector<CellResult> results(cells.size());
    parallel_chunks(cells.size(), 1, options.threads,
                    [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Cell& cell = cells[k];
            const CountryConfig& country = config.countries[cell.country_idx];
            const auto& [map_name, map_path] = country.maps[cell.map_idx];
            CellResult& res = results[k];
            try {
                const ProductSpec& product = find_product(registry, map_name);
                const ReferenceDataset& ds = datasets[cell.country_idx];
                const BinaryMask native = prepare_mask(product, map_path, ds.validity_start,
                                                       ds.validity_end);
                res.evaluation = evaluate_map(native, ds);
                res.resampled = resample_nearest(native, country.target_grid);
                res.ok = true;
            } catch (const std::exception& e) {
                res.error = e.what();
            }
        }
    });

    MetricsCsv metrics_csv;
    std::string matrix_csv = "country,map,tp,fp,fn,tn\n";
    std::vector<FailureRecord> failures;
    std::size_t ok_cells = 0;

    // Per-map metric sets across countries, for the Mean row. Ordered by the
    // first country's map order, then first-seen.
    std::vector<std::string> map_order;
    std::map<std::string, std::vector<MetricSet>> per_map_sets;
    auto record_for_mean = [&](const std::string& map_name, const MetricSet& m) {
        if (!per_map_sets.count(map_name)) map_order.push_back(map_name);
        per_map_sets[map_name].push_back(m);
    };

    std::size_t cell_idx = 0;
    for (std::size_t ci = 0; ci < config.countries.size(); ++ci) {
        const CountryConfig& country = config.countries[ci];
        std::vector<MetricSet> country_sets;
        MaskStack stack;
        for (std::size_t mi = 0; mi < country.maps.size(); ++mi, ++cell_idx) {
            const std::string& map_name = country.maps[mi].first;
            CellResult& res = results[cell_idx];
            if (!res.ok) {
                failures.push_back(FailureRecord{country.name, map_name, res.error});
                continue;
            }
            ++ok_cells;
            const Evaluation& ev = res.evaluation;
            metrics_csv.add_set(country.name, map_name, ev.metrics, ev.scored, ev.excluded);
            matrix_csv += csv_escape(country.name) + "," + csv_escape(map_name) + "," +
                          std::to_string(ev.matrix.tp) + "," + std::to_string(ev.matrix.fp) +
                          "," + std::to_string(ev.matrix.fn) + "," + std::to_string(ev.matrix.tn) +
                          "\n";
            country_sets.push_back(ev.metrics);
            record_for_mean(map_name, ev.metrics);
            stack.masks.push_back(std::move(res.resampled));
            stack.names.push_back(map_name);
        }

        // Majority-vote column for this country.
        if (stack.size() >= 2) {
            try {
                const BinaryMask ensemble = majority_vote(stack, options.threads);
                const Evaluation ev = evaluate_map(ensemble, datasets[ci]);
                metrics_csv.add_set(country.name, kMajorityVoteName, ev.metrics, ev.scored,
                                    ev.excluded);
                matrix_csv += csv_escape(country.name) + "," + csv_escape(kMajorityVoteName) +
                              "," + std::to_string(ev.matrix.tp) + "," +
                              std::to_string(ev.matrix.fp) + "," + std::to_string(ev.matrix.fn) +
                              "," + std::to_string(ev.matrix.tn) + "\n";
                country_sets.push_back(ev.metrics);
                record_for_mean(kMajorityVoteName, ev.metrics);
            } catch (const std::exception& e) {
                failures.push_back(FailureRecord{country.name, kMajorityVoteName, e.what()});
            }
        } else if (!country.maps.empty()) {
            failures.push_back(FailureRecord{country.name, kMajorityVoteName,
                                             "fewer than 2 maps available for the ensemble"});
        }

        // Mean column: this country averaged across its maps (ensemble included).
        if (!country_sets.empty()) {
            metrics_csv.add_set(country.name, "Mean", aggregate_mean(country_sets),
                                country_sets.size(), 0);
        }
    }

    // Mean row: each map averaged across countries.
    for (const std::string& map_name : map_order) {
        const auto& sets = per_map_sets[map_name];
        metrics_csv.add_set("Mean", map_name, aggregate_mean(sets), sets.size(), 0);
    }

    const std::filesystem::path metrics_path = out_dir / "metrics.csv";
    write_text_file(metrics_path, metrics_csv.body);
    write_sidecar(metrics_path, config.config_digest, seed);
    const std::filesystem::path matrix_path = out_dir / "error_matrices.csv";
    write_text_file(matrix_path, matrix_csv);
    write_sidecar(matrix_path, config.config_digest, seed);
    write_failures_csv(out_dir, failures, config.config_digest, seed);

    CommandResult result;
    result.failures = std::move(failures);
    if (ok_cells == 0) {
        result.exit_code = 3;
    } else if (!result.failures.empty()) {
        result.exit_code = 2;
    }
    return result;
}

// ---- consensus / ensemble ----

namespace {

// Reads, binarizes, resamples to the country target grid, and clips every
// configured map to the country polygon. Failed maps are recorded and
// skipped.
MaskStack build_country_stack(const RunConfig& config, const CountryConfig& country,
                              const std::vector<ProductSpec>& registry,
                              const ReferenceDataset& ds, int threads,
                              std::vector<FailureRecord>& failures) {
    const RegionPolygon boundary = read_geojson_polygon(country.boundary);
    const BinaryMask region = rasterize_polygon(boundary, country.target_grid);

    const std::size_t n_maps = country.maps.size();
    std::vector<CellResult> results(n_maps);
    parallel_chunks(n_maps, 1, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto& [map_name, map_path] = country.maps[k];
            try {
                const ProductSpec& product = find_product(registry, map_name);
                const BinaryMask native = prepare_mask(product, map_path, ds.validity_start,
                                                       ds.validity_end);
                results[k].resampled = clip(resample_nearest(native, country.target_grid), region);
                results[k].ok = true;
            } catch (const std::exception& e) {
                results[k].error = e.what();
            }
        }
    });

    MaskStack stack;
    for (std::size_t k = 0; k < n_maps; ++k) {
        if (results[k].ok) {
            stack.masks.push_back(std::move(results[k].resampled));
            stack.names.push_back(country.maps[k].first);
        } else {
            failures.push_back(FailureRecord{country.name, country.maps[k].first,
                                             results[k].error});
        }
    }
    return stack;
}

} // namespace

CommandResult cmd_consensus(const RunConfig& config, const std::string& country_name,
                            const RunOptions& options) {
    const std::filesystem::path out_dir = ensure_out_dir(config, options);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const CountryConfig& country = config.country(country_name);
    const std::vector<ProductSpec> registry = load_product_registry(config.registry_path);
    const ReferenceDataset ds = read_reference_csv(country.reference_csv);

    CommandResult result;
    const MaskStack stack =
        build_country_stack(config, country, registry, ds, options.threads, result.failures);
    if (stack.size() < 2) {
        write_failures_csv(out_dir, result.failures, config.config_digest, seed);
        result.exit_code = 3;
        return result;
    }

    const ConsensusRaster consensus = vote_count(stack, options.threads);
    const std::filesystem::path tif_path = out_dir / ("consensus_" + country.name + ".tif");
    {
        CategoricalRaster raster;
        raster.grid = consensus.grid;
        raster.nodata = consensus.nodata;
        raster.values.assign(consensus.votes.begin(), consensus.votes.end());
        write_geotiff(raster, tif_path);
    }
    write_sidecar(tif_path, config.config_digest, seed);

    const std::filesystem::path png_path = out_dir / ("consensus_" + country.name + ".png");
    write_consensus_png(consensus, png_path);
    write_sidecar(png_path, config.config_digest, seed);

    const AgreementSummary summary = agreement_summary(stack, options.threads);
    std::string summary_csv =
        "country,pct_all_same,pct_all_crop,pct_split,pct_none_crop,valid_pixels\n";
    summary_csv += csv_escape(country.name) + "," + fmt_double(summary.pct_all_same) + "," +
                   fmt_double(summary.pct_all_crop) + "," + fmt_double(summary.pct_split) + "," +
                   fmt_double(summary.pct_none_crop) + "," +
                   std::to_string(summary.valid_pixel_count) + "\n";
    const std::filesystem::path summary_path =
        out_dir / ("agreement_summary_" + country.name + ".csv");
    write_text_file(summary_path, summary_csv);
    write_sidecar(summary_path, config.config_digest, seed);

    const AgreementMatrix matrix = pairwise_agreement(stack, options.threads);
    std::string matrix_csv = "map";
    for (const std::string& name : matrix.names) matrix_csv += "," + csv_escape(name);
    matrix_csv += "\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        matrix_csv += csv_escape(matrix.names[i]);
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            matrix_csv += "," + fmt_double(matrix.at(i, j));
        }
        matrix_csv += "\n";
    }
    const std::filesystem::path matrix_path =
        out_dir / ("agreement_matrix_" + country.name + ".csv");
    write_text_file(matrix_path, matrix_csv);
    write_sidecar(matrix_path, config.config_digest, seed);

    write_failures_csv(out_dir, result.failures, config.config_digest, seed);
    result.exit_code = result.failures.empty() ? 0 : 2;
    return result;
}

CommandResult cmd_ensemble(const RunConfig& config, const std::string& country_name,
                           const RunOptions& options) {
    const std::filesystem::path out_dir = ensure_out_dir(config, options);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const CountryConfig& country = config.country(country_name);
    const std::vector<ProductSpec> registry = load_product_registry(config.registry_path);
    const ReferenceDataset ds = read_reference_csv(country.reference_csv);

    CommandResult result;
    const MaskStack stack =
        build_country_stack(config, country, registry, ds, options.threads, result.failures);
    if (stack.size() < 2) {
        write_failures_csv(out_dir, result.failures, config.config_digest, seed);
        result.exit_code = 3;
        return result;
    }

    const BinaryMask ensemble = majority_vote(stack, options.threads);
    const std::filesystem::path path = out_dir / ("majority_vote_" + country.name + ".tif");
    write_geotiff(ensemble, path);
    write_sidecar(path, config.config_digest, seed);

    write_failures_csv(out_dir, result.failures, config.config_digest, seed);
    result.exit_code = result.failures.empty() ? 0 : 2;
    return result;
}

// ---- correlate ----

namespace {

struct MetricsRows {
    // country -> map -> metric -> value
    std::map<std::string, std::map<std::string, std::map<std::string, double>>> values;
    std::vector<std::string> map_order; // first-seen order, Mean rows excluded
};

MetricsRows parse_metrics_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cc = table.column("country");
    const std::size_t cm = table.column("map");
    const std::size_t ck = table.column("metric");
    const std::size_t cv = table.column("value");
    MetricsRows rows;
    for (const auto& row : table.rows) {
        const std::string& country = row[cc];
        const std::string& map_name = row[cm];
        if (map_name == "Mean") continue; // per-country mean column
        rows.values[country][map_name][row[ck]] = parse_double(row[cv]);
        if (map_name != kMajorityVoteName &&
            std::find(rows.map_order.begin(), rows.map_order.end(), map_name) ==
                rows.map_order.end()) {
            rows.map_order.push_back(map_name);
        }
    }
    if (rows.values.empty()) throw SchemaError("no metric rows in " + path.string());
    return rows;
}

// Mean metric per map: printed Mean rows win; otherwise the mean of the
// per-country values.
MetricTable mean_table(const MetricsRows& rows) {
    MetricTable table;
    for (const char* metric : kMetricNames) {
        std::vector<std::pair<std::string, double>> per_map;
        for (const std::string& map_name : rows.map_order) {
            const auto mean_it = rows.values.find("Mean");
            if (mean_it != rows.values.end() && mean_it->second.count(map_name) &&
                mean_it->second.at(map_name).count(metric)) {
                per_map.emplace_back(map_name, mean_it->second.at(map_name).at(metric));
                continue;
            }
            double sum = 0;
            std::size_t k = 0;
            for (const auto& [country, maps] : rows.values) {
                if (country == "Mean") continue;
                const auto map_it = maps.find(map_name);
                if (map_it == maps.end()) continue;
                const auto metric_it = map_it->second.find(metric);
                if (metric_it == map_it->second.end()) continue;
                sum += metric_it->second;
                ++k;
            }
            if (k > 0) per_map.emplace_back(map_name, sum / static_cast<double>(k));
        }
        if (!per_map.empty()) table[metric] = std::move(per_map);
    }
    if (table.empty()) throw SchemaError("metrics CSV contains none of the four metrics");
    return table;
}

// Year of the map edition scored in `country`: composites follow the
// reference year; multi-year products need a declared default edition.
int attribute_map_year(const ProductSpec& product, int reference_year) {
    if (product.composite) return reference_year;
    if (product.nominal_years.size() == 1) return product.nominal_years.front();
    if (product.default_year) return *product.default_year;
    throw SchemaError("product '" + product.name +
                      "' spans several years and has no default_year; set one in the registry");
}

void write_correlation_csv(const std::filesystem::path& path,
                           std::span<const CorrelationResult> results,
                           const std::string& digest, std::uint64_t seed) {
    std::string csv = "metric,r,n,excluded\n";
    for (const CorrelationResult& res : results) {
        std::string excluded;
        for (std::size_t i = 0; i < res.excluded.size(); ++i) {
            if (i) excluded += "|";
            excluded += res.excluded[i];
        }
        csv += res.metric_name + "," + fmt_double(res.r) + "," + std::to_string(res.n_points) +
               "," + csv_escape(excluded) + "\n";
    }
    write_text_file(path, csv);
    write_sidecar(path, digest, seed);
}

} // namespace

std::map<std::string, int> load_reference_years(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cc = table.column("country");
    const std::size_t cy = table.column("year");
    std::map<std::string, int> years;
    for (const auto& row : table.rows) {
        years[row[cc]] = static_cast<int>(parse_int(row[cy]));
    }
    return years;
}

std::map<std::string, int> reference_years_from_config(const RunConfig& config) {
    std::map<std::string, int> years;
    for (const CountryConfig& country : config.countries) {
        const ReferenceDataset ds = read_reference_csv(country.reference_csv);
        years[country.name] = majority_year(ds.validity_start, ds.validity_end);
    }
    return years;
}

CommandResult cmd_correlate(const std::filesystem::path& metrics_csv,
                            const std::filesystem::path& registry_path,
                            const std::optional<std::map<std::string, int>>& reference_years,
                            const RunOptions& options) {
    if (!options.out_dir) throw SchemaError("correlate needs an output directory");
    std::filesystem::create_directories(*options.out_dir);
    const std::filesystem::path out_dir = *options.out_dir;
    const std::string digest = sha256_hex(read_text_file(metrics_csv));
    const std::uint64_t seed = options.seed.value_or(0);

    const std::vector<ProductSpec> registry = load_product_registry(registry_path);
    const MetricsRows rows = parse_metrics_csv(metrics_csv);
    const MetricTable means = mean_table(rows);

    const auto resolution = metric_vs_resolution(means, registry, options.exclude);
    write_correlation_csv(out_dir / "correlation_resolution.csv", resolution, digest, seed);

    for (const CorrelationResult& res : resolution) {
        PlotSeries series;
        series.name = res.metric_name;
        for (const auto& [map_name, value] : means.at(res.metric_name)) {
            if (options.exclude.count(map_name)) continue;
            series.points.push_back(
                Point{find_product(registry, map_name).native_resolution_m, value});
        }
        write_scatter_svg(out_dir / ("scatter_resolution_" + res.metric_name + ".svg"),
                          res.metric_name + " vs resolution (r = " + fmt_fixed(res.r, 2) + ")",
                          "resolution (m/px)", res.metric_name,
                          std::span<const PlotSeries>(&series, 1));
    }

    // Temporal mismatch needs per-country rows and reference years.
    if (reference_years) {
        const std::map<std::string, int>& ref_years = *reference_years;
        std::map<std::string, std::vector<MismatchPoint>> points;
        std::map<std::string, std::map<std::string, int>> map_years;
        for (const auto& [country, maps] : rows.values) {
            if (country == "Mean") continue;
            const auto year_it = ref_years.find(country);
            if (year_it == ref_years.end()) {
                throw SchemaError("no reference year for country '" + country + "'");
            }
            for (const auto& [map_name, metrics] : maps) {
                if (map_name == kMajorityVoteName) continue;
                const ProductSpec& product = find_product(registry, map_name);
                map_years[map_name][country] = attribute_map_year(product, year_it->second);
                for (const auto& [metric, value] : metrics) {
                    points[metric].push_back(MismatchPoint{map_name, country, value});
                }
            }
        }
        if (!points.empty()) {
            const auto mismatch =
                metric_vs_mismatch(points, map_years, ref_years, options.exclude);
            write_correlation_csv(out_dir / "correlation_mismatch.csv", mismatch, digest, seed);
            for (const CorrelationResult& res : mismatch) {
                PlotSeries series;
                series.name = res.metric_name;
                for (const MismatchPoint& p : points.at(res.metric_name)) {
                    if (options.exclude.count(p.map)) continue;
                    series.points.push_back(Point{
                        static_cast<double>(temporal_mismatch(map_years.at(p.map).at(p.country),
                                                              ref_years.at(p.country))),
                        p.value});
                }
                write_scatter_svg(
                    out_dir / ("scatter_mismatch_" + res.metric_name + ".svg"),
                    res.metric_name + " vs temporal mismatch (r = " + fmt_fixed(res.r, 2) + ")",
                    "|map year - reference year| (years)", res.metric_name,
                    std::span<const PlotSeries>(&series, 1));
            }
        }
    }
    return CommandResult{};
}

// ---- timeseries ----

CommandResult cmd_timeseries(const RunConfig& config, const std::string& country_name,
                             const std::optional<std::string>& region_name,
                             const RunOptions& options) {
    const std::filesystem::path out_dir = ensure_out_dir(config, options);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const CountryConfig& country = config.country(country_name);
    const std::vector<ProductSpec> registry = load_product_registry(config.registry_path);
    const ReferenceDataset ds = read_reference_csv(country.reference_csv);
    if (!country.ndvi_manifest) {
        throw SchemaError("country '" + country.name + "' has no ndvi_manifest");
    }

    // Region polygon: the country boundary, or a named admin1 region.
    RegionPolygon region_poly;
    std::string region_label = country.name;
    if (region_name) {
        bool found = false;
        std::vector<std::string> available;
        for (const auto& [name, path] : country.regions) {
            available.push_back(name);
            if (name == *region_name) {
                region_poly = read_geojson_polygon(path);
                region_label = name;
                found = true;
            }
        }
        if (!found) {
            std::string names;
            for (std::size_t i = 0; i < available.size(); ++i) {
                if (i) names += ", ";
                names += available[i];
            }
            throw SchemaError("unknown region '" + *region_name + "' for country '" +
                              country.name + "'; available regions: " +
                              (names.empty() ? "(none)" : names));
        }
    } else {
        region_poly = read_geojson_polygon(country.boundary);
    }

    // Frames define the coarse grid (the 500 m analogue).
    const std::vector<Frame> manifest = load_frame_manifest(*country.ndvi_manifest);
    std::vector<std::pair<Date, CategoricalRaster>> frames;
    for (const Frame& f : manifest) frames.emplace_back(f.date, read_geotiff(f.path));
    const GridSpec& frame_grid = frames.front().second.grid;
    const BinaryMask region_mask = rasterize_polygon(region_poly, frame_grid);

    CommandResult result;
    std::string csv = "timestamp,mask,region,mean,count\n";
    std::vector<PlotSeries> all_series;
    for (const auto& [map_name, map_path] : country.maps) {
        if (options.exclude.count(map_name)) continue;
        try {
            const ProductSpec& product = find_product(registry, map_name);
            const BinaryMask native =
                prepare_mask(product, map_path, ds.validity_start, ds.validity_end);
            const BinaryMask coarse = resample_mode(native, frame_grid);
            const TimeSeries series =
                masked_timeseries(frames, coarse, region_mask, options.threads);
            PlotSeries plot;
            plot.name = map_name;
            for (const TimeSeriesEntry& entry : series.entries) {
                csv += to_string(entry.timestamp) + "," + csv_escape(map_name) + "," +
                       csv_escape(region_label) + "," +
                       (entry.missing ? "" : fmt_double(entry.mean_value)) + "," +
                       std::to_string(entry.pixel_count) + "\n";
                if (!entry.missing) {
                    plot.points.push_back(Point{
                        static_cast<double>(days_from_civil(entry.timestamp)),
                        entry.mean_value});
                }
            }
            all_series.push_back(std::move(plot));
        } catch (const std::exception& e) {
            result.failures.push_back(FailureRecord{country.name, map_name, e.what()});
        }
    }
    if (all_series.empty()) {
        write_failures_csv(out_dir, result.failures, config.config_digest, seed);
        result.exit_code = 3;
        return result;
    }

    const std::filesystem::path csv_path =
        out_dir / ("timeseries_" + country.name + "_" + region_label + ".csv");
    write_text_file(csv_path, csv);
    write_sidecar(csv_path, config.config_digest, seed);

    const std::filesystem::path svg_path =
        out_dir / ("timeseries_" + country.name + "_" + region_label + ".svg");
    write_line_svg(svg_path, "masked mean vegetation index: " + region_label,
                   "days since 1970-01-01", "mean value", all_series);
    write_sidecar(svg_path, config.config_digest, seed);

    write_failures_csv(out_dir, result.failures, config.config_digest, seed);
    result.exit_code = result.failures.empty() ? 0 : 2;
    return result;
}

// ---- sample ----

CommandResult cmd_sample(const RunConfig& config, const std::string& country_name,
                         const SampleRequest& request, const RunOptions& options) {
    const std::filesystem::path out_dir = ensure_out_dir(config, options);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const CountryConfig& country = config.country(country_name);

    std::string csv;
    if (request.design == "uniform") {
        if (request.n < 1) throw SchemaError("uniform sampling needs n >= 1");
        const RegionPolygon boundary = read_geojson_polygon(country.boundary);
        const std::vector<Point> points = uniform_sample(boundary, request.n, seed);
        csv = "x,y\n";
        for (const Point& p : points) {
            csv += fmt_double(p.x) + "," + fmt_double(p.y) + "\n";
        }
    } else if (request.design == "stratified") {
        if (!request.strata_raster) throw SchemaError("stratified sampling needs a strata raster");
        if (request.allocation.empty()) throw SchemaError("stratified sampling needs an allocation");
        const CategoricalRaster strata = read_geotiff(*request.strata_raster);
        const auto points = stratified_sample(strata, request.allocation, seed);
        csv = "x,y,stratum\n";
        for (const StratifiedPoint& p : points) {
            csv += fmt_double(p.x) + "," + fmt_double(p.y) + "," + std::to_string(p.stratum) + "\n";
        }
    } else {
        throw SchemaError("unknown sampling design '" + request.design +
                          "' (expected uniform or stratified)");
    }

    const std::filesystem::path path = out_dir / ("sample_" + country.name + ".csv");
    write_text_file(path, csv);
    write_sidecar(path, config.config_digest, seed);
    return CommandResult{};
}

} // namespace covermap
