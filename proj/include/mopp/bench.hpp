#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mopp/objectives.hpp"
#include "mopp/planner.hpp"
#include "mopp/types.hpp"
#include "mopp/workspace.hpp"

namespace mopp {

struct BenchmarkConfig {
    size_t runs = 100;
    int grid_size = 100;
    double coverage = 0.23;
    uint64_t master_seed = 0;
    std::vector<Algorithm> algorithms{Algorithm::Astar, Algorithm::Dstar,
                                      Algorithm::DstarPo};
    std::string terrain_dir;  // empty: synthetic terrain per run
    std::optional<GridCoord> start_override;
    std::optional<GridCoord> goal_override;
};

struct RunRecord {
    size_t run_id = 0;
    uint64_t seed = 0;
    Algorithm algorithm = Algorithm::Astar;
    PathMetrics metrics;
};

/// stage is an algorithm name, or "generate" when the workspace itself failed.
struct FailureRecord {
    size_t run_id = 0;
    std::string stage;
    std::string error;
};

struct AggregateRow {
    Algorithm algorithm = Algorithm::Astar;
    double mean_length = 0.0;
    double mean_elevation = 0.0;
    double mean_solar = 0.0;
    double mean_risk = 0.0;
    double mean_time = 0.0;
    size_t runs_ok = 0;
    size_t runs_failed = 0;
};

struct BenchmarkReport {
    BenchmarkConfig config;
    std::vector<RunRecord> per_run;
    std::vector<AggregateRow> aggregate;
    std::vector<FailureRecord> failures;
};

/// Benchmark-protocol planner configuration per algorithm. The composite
/// planners run equal weights over the normalized objectives. dstar-po uses an
/// elevation/risk-leaning priority selector with a zero solar weight: an
/// equal-weight selector provably collapses Pareto selection into the plain
/// composite argmin (a dominator always has a strictly smaller
/// all-positive-weight sum), which would make dstar and dstar-po identical
/// run for run, and dropping the solar term keeps the selection free of the
/// step-dependent solar noise that inflates plain dstar paths.
PlannerConfig default_planner_config(Algorithm algorithm);

/// The workspace run `run_id` of a batch would plan on. Deterministic in
/// (config, run_id).
Workspace benchmark_workspace(const BenchmarkConfig& config, size_t run_id);

/// Runs every configured algorithm on each seeded workspace. Generation or
/// planning failures are recorded and the batch continues.
BenchmarkReport run_batch(const BenchmarkConfig& config);

/// Aggregation used by run_batch, exposed so reports can be recomputed. Rows
/// are sorted internally by run id, making the result independent of the
/// per-run ordering handed in.
std::vector<AggregateRow> aggregate_rows(const std::vector<Algorithm>& algorithms,
                                         size_t runs,
                                         const std::vector<RunRecord>& per_run);

enum class ReportFormat { Csv, Markdown };

/// CSV: header `algorithm,length_m,elevation,solar_deviation,risk_proximity,
/// compute_time_s,runs_ok,runs_failed`, one row per algorithm, failures as
/// trailing `#`-prefixed comment lines. Markdown mirrors the same table and
/// can append the per-run rows.
std::string render_report(const BenchmarkReport& report, ReportFormat format,
                          bool include_per_run = false);

}  // namespace mopp
