#include "mopp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mopp/bench.hpp"
#include "mopp/errors.hpp"
#include "mopp/objectives.hpp"
#include "mopp/planner.hpp"
#include "mopp/render.hpp"
#include "mopp/serialize.hpp"
#include "mopp/terrain.hpp"
#include "mopp/workspace.hpp"

namespace mopp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoPath = 4;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError(path + ": cannot open for writing");
    out << text;
    if (!out) throw IngestionError(path + ": write failure");
}

TerrainFormat format_by_extension(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm") {
        return TerrainFormat::Pgm;
    }
    return TerrainFormat::Csv;
}

Weights parse_weights(const std::string& text) {
    Weights w{};
    std::stringstream ss(text);
    std::string part;
    size_t i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 5) throw ConfigError("--weights needs exactly 5 comma-separated values");
        try {
            w[i++] = std::stod(part);
        } catch (const std::exception&) {
            throw ConfigError("--weights: bad number " + part);
        }
    }
    if (i != 5) throw ConfigError("--weights needs exactly 5 comma-separated values");
    return w;
}

PrioritySelector parse_selector(const std::string& text) {
    if (text == "composite") return PrioritySelector::composite_sum();
    if (text == "distance") {
        return PrioritySelector::custom(Weights{1.0, 1.0, 0.0, 0.0, 0.0});
    }
    if (text.rfind("obj:", 0) == 0) {
        try {
            return PrioritySelector::single_objective(std::stoi(text.substr(4)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("--selector obj:<index> needs an integer index");
        }
    }
    if (text.rfind("w:", 0) == 0) {
        return PrioritySelector::custom(parse_weights(text.substr(2)));
    }
    throw ConfigError(
        "--selector must be composite, distance, obj:<index>, or w:<5 weights>");
}

struct GlobalFlags {
    bool verbose = false;
    bool quiet = false;
};

int cmd_generate(const GlobalFlags& g, uint64_t seed, int size, double coverage,
                 const std::string& terrain, const std::string& out) {
    Workspace ws = generate_random_workspace(seed, size, size, coverage);
    if (!terrain.empty()) {
        ElevationLayer loaded = load_terrain(terrain, format_by_extension(terrain));
        if (loaded.width() != ws.grid.width() ||
            loaded.height() != ws.grid.height()) {
            throw DimensionError(terrain + ": heightmap dimensions do not match --size");
        }
        ws.elevation = std::move(loaded);
        ws.validate();
    }
    save_workspace(ws, out);
    if (!g.quiet) {
        std::printf("workspace %s: %dx%d, coverage %.4f (target %.4f), "
                    "start-goal connected\n",
                    out.c_str(), ws.grid.width(), ws.grid.height(),
                    ws.grid.occupied_fraction(), coverage);
    }
    return kExitOk;
}

int cmd_plan(const GlobalFlags& g, const std::string& workspace_file,
             const std::string& algo, std::string out, const std::string& weights,
             const std::string& selector, const std::string& trace_file) {
    const Algorithm algorithm = algorithm_from_string(algo);
    const Workspace ws = load_workspace(workspace_file);

    PlannerConfig config = default_planner_config(algorithm);
    if (!weights.empty()) config.weights = parse_weights(weights);
    if (!selector.empty()) config.selector = parse_selector(selector);
    if (!trace_file.empty()) config.trace_front_size = true;

    const PlanResult result = plan(ws, config);

    if (out.empty()) out = "path-" + to_string(algorithm) + ".csv";
    save_waypoints(result.path, out);
    if (!trace_file.empty()) write_text_file(trace_file, result.trace.to_ndjson());

    if (!g.quiet) {
        std::printf("%s: %zu waypoints -> %s\n", to_string(algorithm).c_str(),
                    result.path.size(), out.c_str());
        if (g.verbose) std::printf("expansions: %zu\n", result.metrics.expansions);
        std::printf("length_m elevation solar_deviation risk_proximity compute_time_s\n");
    }
    std::printf("%.6f %.6f %.6f %.6f %.6f\n", result.metrics.length,
                result.metrics.mean_elevation, result.metrics.solar_deviation,
                result.metrics.risk_proximity, result.metrics.compute_time);
    return kExitOk;
}

int cmd_bench(const GlobalFlags& g, const BenchmarkConfig& config,
              const std::string& format, std::string out, bool per_run) {
    const ReportFormat report_format =
        format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv;
    const BenchmarkReport report = run_batch(config);
    if (out.empty()) {
        out = report_format == ReportFormat::Markdown ? "report.md" : "report.csv";
    }
    write_text_file(out, render_report(report, report_format, per_run));
    if (!g.quiet) {
        std::printf("%zu runs x %zu algorithms -> %s (%zu failures)\n",
                    config.runs, config.algorithms.size(), out.c_str(),
                    report.failures.size());
        for (const AggregateRow& row : report.aggregate) {
            std::printf("%-9s length %8.3f elevation %.4f solar %8.4f risk %8.4f "
                        "time %.4fs ok %zu\n",
                        to_string(row.algorithm).c_str(), row.mean_length,
                        row.mean_elevation, row.mean_solar, row.mean_risk,
                        row.mean_time, row.runs_ok);
        }
    }
    return kExitOk;
}

int cmd_render(const GlobalFlags& g, const std::string& workspace_file,
               const std::vector<std::string>& path_specs, const std::string& layer,
               std::string format, const std::string& out) {
    const Workspace ws = load_workspace(workspace_file);
    std::vector<PathOverlay> overlays;
    for (const std::string& spec : path_specs) {
        const size_t eq = spec.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--path expects <algorithm>=<waypoint file>: " + spec);
        }
        PathOverlay overlay;
        overlay.algorithm = algorithm_from_string(spec.substr(0, eq));
        overlay.waypoints = load_waypoints(spec.substr(eq + 1));
        overlays.push_back(std::move(overlay));
    }

    if (format.empty()) {
        format = out.size() >= 4 && out.substr(out.size() - 4) == ".svg" ? "svg"
                                                                         : "pgm";
    }
    const RenderLayer render_layer = layer_from_string(layer);
    const std::string image = format == "svg"
                                  ? render_svg(ws, render_layer, overlays)
                                  : render_pgm(ws, render_layer, overlays);
    write_text_file(out, image);
    if (!g.quiet) {
        std::printf("rendered %s layer with %zu path(s) -> %s\n",
                    to_string(render_layer).c_str(), overlays.size(), out.c_str());
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"multiobjective grid path planning toolkit"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_flag("--verbose", g.verbose, "extra diagnostics");
    app.add_flag("--quiet", g.quiet, "suppress summaries");

    auto* gen = app.add_subcommand("generate", "generate a random workspace");
    uint64_t gen_seed = 0;
    int gen_size = 100;
    double gen_coverage = 0.23;
    std::string gen_terrain, gen_out;
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--size", gen_size, "grid width and height");
    gen->add_option("--coverage", gen_coverage, "target obstacle fraction");
    gen->add_option("--terrain", gen_terrain, "heightmap file (.csv or .pgm)");
    gen->add_option("--out", gen_out, "output workspace JSON")->required();

    auto* plan_cmd = app.add_subcommand("plan", "plan a single workspace");
    std::string plan_ws, plan_algo = "astar", plan_out, plan_weights, plan_selector,
                plan_trace;
    plan_cmd->add_option("--workspace", plan_ws, "workspace JSON")->required();
    plan_cmd->add_option("--algo", plan_algo, "astar | dstar | dstar-po | astar-po");
    plan_cmd->add_option("--out", plan_out, "waypoint CSV (default path-<algo>.csv)");
    plan_cmd->add_option("--weights", plan_weights, "5 composite weights g,h,e,s,r");
    plan_cmd->add_option("--selector", plan_selector,
                         "composite | distance | obj:<i> | w:g,h,e,s,r");
    plan_cmd->add_option("--trace", plan_trace, "write expansion trace NDJSON");

    auto* bench = app.add_subcommand("bench", "run a seeded benchmark batch");
    BenchmarkConfig bench_config;
    bench_config.runs = 100;
    std::string bench_algos = "astar,dstar,dstar-po";
    std::string bench_format = "csv", bench_out;
    bool bench_per_run = false;
    bench->add_option("--runs", bench_config.runs, "number of seeded runs");
    bench->add_option("--seed", bench_config.master_seed, "master seed");
    bench->add_option("--size", bench_config.grid_size, "grid width and height");
    bench->add_option("--coverage", bench_config.coverage, "target obstacle fraction");
    bench->add_option("--algos", bench_algos, "comma-separated algorithm list");
    bench->add_option("--terrain-dir", bench_config.terrain_dir,
                      "directory of heightmaps instead of synthetic terrain");
    bench->add_option("--format", bench_format, "csv | markdown");
    bench->add_option("--out", bench_out, "report file (default report.csv/.md)");
    bench->add_flag("--per-run", bench_per_run, "include per-run rows (markdown)");

    auto* render = app.add_subcommand("render", "render layers and paths to an image");
    std::string render_ws, render_layer = "occupancy", render_format, render_out;
    std::vector<std::string> render_paths;
    render->add_option("--workspace", render_ws, "workspace JSON")->required();
    render->add_option("--path", render_paths,
                       "<algorithm>=<waypoint CSV>, repeatable");
    render->add_option("--layer", render_layer,
                       "occupancy | elevation | risk | solar");
    render->add_option("--format", render_format, "pgm | svg (default by extension)");
    render->add_option("--out", render_out, "output image file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(g, gen_seed, gen_size, gen_coverage, gen_terrain,
                                gen_out);
        }
        if (plan_cmd->parsed()) {
            return cmd_plan(g, plan_ws, plan_algo, plan_out, plan_weights,
                            plan_selector, plan_trace);
        }
        if (bench->parsed()) {
            std::stringstream ss(bench_algos);
            std::string name;
            bench_config.algorithms.clear();
            while (std::getline(ss, name, ',')) {
                if (!name.empty()) {
                    bench_config.algorithms.push_back(algorithm_from_string(name));
                }
            }
            return cmd_bench(g, bench_config, bench_format, bench_out, bench_per_run);
        }
        if (render->parsed()) {
            return cmd_render(g, render_ws, render_paths, render_layer, render_format,
                              render_out);
        }
    } catch (const NoPathError& e) {
        std::fprintf(stderr, "no path: %s\n", e.what());
        return kExitNoPath;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitUsage;  // unreachable with require_subcommand(1)
}

}  // namespace mopp
