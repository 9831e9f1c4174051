#include "mopp/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mopp/errors.hpp"

namespace mopp {

using json = nlohmann::ordered_json;

namespace {

json encode_occupancy(const OccupancyGrid& grid) {
    json runs = json::array();
    uint8_t current = 0;  // RLE starts with a free run, possibly of length 0
    size_t run = 0;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            const uint8_t v = grid.occupied({r, c}) ? 1 : 0;
            if (v == current) {
                ++run;
            } else {
                runs.push_back(run);
                current = v;
                run = 1;
            }
        }
    }
    runs.push_back(run);
    return runs;
}

OccupancyGrid decode_occupancy(const json& runs, int width, int height) {
    OccupancyGrid grid(width, height);
    size_t cell = 0;
    const size_t total = grid.cell_count();
    uint8_t current = 0;
    for (const auto& entry : runs) {
        if (!entry.is_number_unsigned() && !entry.is_number_integer()) {
            throw IngestionError("occupancy run lengths must be integers");
        }
        const long long len = entry.get<long long>();
        if (len < 0) throw IngestionError("occupancy run length negative");
        for (long long i = 0; i < len; ++i) {
            if (cell >= total) throw IngestionError("occupancy runs exceed grid size");
            if (current) {
                grid.set({int(cell / width), int(cell % width)}, true);
            }
            ++cell;
        }
        current = current ? 0 : 1;
    }
    if (cell != total) throw IngestionError("occupancy runs do not cover the grid");
    return grid;
}

GridCoord coord_from(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("row") || !j.contains("col")) {
        throw IngestionError(std::string(what) + " must be an object {row, col}");
    }
    return GridCoord{j.at("row").get<int>(), j.at("col").get<int>()};
}

}  // namespace

std::string workspace_to_json(const Workspace& ws) {
    json doc;
    doc["width"] = ws.grid.width();
    doc["height"] = ws.grid.height();
    doc["occupancy"] = encode_occupancy(ws.grid);

    json elev = json::array();
    for (int r = 0; r < ws.elevation.height(); ++r) {
        json row = json::array();
        for (int c = 0; c < ws.elevation.width(); ++c) {
            row.push_back(ws.elevation.at({r, c}));
        }
        elev.push_back(std::move(row));
    }
    doc["elevation"] = std::move(elev);

    doc["risk"] = {{"row", ws.risk.center.row},
                   {"col", ws.risk.center.col},
                   {"epsilonSq", ws.risk.epsilon_sq}};
    doc["solar"] = {{"vector", {ws.solar.initial.x, ws.solar.initial.y}},
                    {"rate", ws.solar.rotation_rate}};
    doc["start"] = {{"row", ws.start.row}, {"col", ws.start.col}};
    doc["goal"] = {{"row", ws.goal.row}, {"col", ws.goal.col}};
    doc["seed"] = ws.seed;
    return doc.dump(2) + "\n";
}

Workspace workspace_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw IngestionError(std::string("workspace JSON parse failure: ") + e.what());
    }

    try {
        const int width = doc.at("width").get<int>();
        const int height = doc.at("height").get<int>();
        if (width <= 0 || height <= 0) {
            throw IngestionError("workspace dimensions must be positive");
        }

        Workspace ws;
        ws.grid = decode_occupancy(doc.at("occupancy"), width, height);

        const auto& elev = doc.at("elevation");
        if (!elev.is_array() || int(elev.size()) != height) {
            throw IngestionError("elevation must have one array per row");
        }
        std::vector<double> values(size_t(width) * height);
        for (int r = 0; r < height; ++r) {
            const auto& row = elev.at(size_t(r));
            if (!row.is_array() || int(row.size()) != width) {
                throw IngestionError("elevation row " + std::to_string(r) +
                                     " has wrong width");
            }
            for (int c = 0; c < width; ++c) {
                values[size_t(r) * width + c] = row.at(size_t(c)).get<double>();
            }
        }
        ws.elevation = ElevationLayer(width, height, std::move(values));

        const auto& risk = doc.at("risk");
        ws.risk.center = GridCoord{risk.at("row").get<int>(), risk.at("col").get<int>()};
        ws.risk.epsilon_sq = risk.at("epsilonSq").get<double>();

        const auto& solar = doc.at("solar");
        const auto& vec = solar.at("vector");
        if (!vec.is_array() || vec.size() != 2) {
            throw IngestionError("solar vector must be [x, y]");
        }
        ws.solar.initial = Vec2{vec.at(0).get<double>(), vec.at(1).get<double>()};
        ws.solar.rotation_rate = solar.at("rate").get<double>();

        ws.start = coord_from(doc.at("start"), "start");
        ws.goal = coord_from(doc.at("goal"), "goal");
        ws.seed = doc.value("seed", uint64_t(0));

        ws.validate();
        return ws;
    } catch (const json::exception& e) {
        throw IngestionError(std::string("workspace JSON malformed: ") + e.what());
    }
}

void save_workspace(const Workspace& ws, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError(path + ": cannot open for writing");
    out << workspace_to_json(ws);
    if (!out) throw IngestionError(path + ": write failure");
}

Workspace load_workspace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError(path + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    return workspace_from_json(buf.str());
}

std::string waypoints_to_csv(const std::vector<GridCoord>& path) {
    std::string out = "step,row,col\n";
    for (size_t i = 0; i < path.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(path[i].row) + "," +
               std::to_string(path[i].col) + "\n";
    }
    return out;
}

std::vector<GridCoord> waypoints_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IngestionError("waypoint CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "step,row,col") {
        throw IngestionError("waypoint CSV header must be step,row,col");
    }

    std::vector<GridCoord> path;
    size_t expected_step = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string step_s, row_s, col_s;
        if (!std::getline(row, step_s, ',') || !std::getline(row, row_s, ',') ||
            !std::getline(row, col_s)) {
            throw IngestionError("waypoint CSV row malformed: " + line);
        }
        try {
            if (std::stoull(step_s) != expected_step) {
                throw IngestionError("waypoint CSV steps must count from 0");
            }
            path.push_back(GridCoord{std::stoi(row_s), std::stoi(col_s)});
        } catch (const IngestionError&) {
            throw;
        } catch (const std::exception&) {
            throw IngestionError("waypoint CSV row malformed: " + line);
        }
        ++expected_step;
    }
    return path;
}

void save_waypoints(const std::vector<GridCoord>& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IngestionError(file + ": cannot open for writing");
    out << waypoints_to_csv(path);
    if (!out) throw IngestionError(file + ": write failure");
}

std::vector<GridCoord> load_waypoints(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IngestionError(file + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    return waypoints_from_csv(buf.str());
}

}  // namespace mopp
