#include "mopp/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mopp/errors.hpp"
#include "mopp/rng.hpp"

namespace mopp {

void normalize_min_max(std::vector<double>& values) {
    if (values.empty()) return;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi - lo <= 0.0) {
        std::fill(values.begin(), values.end(), 0.0);
        return;
    }
    const double span = hi - lo;
    for (double& v : values) v = (v - lo) / span;
}

namespace {

// Smallest (2^k + 1) covering both requested dimensions.
int diamond_square_size(int width, int height) {
    const int need = std::max(width, height);
    int size = 2;
    while (size + 1 < need) size *= 2;
    return size + 1;
}

}  // namespace

ElevationLayer generate_synthetic_terrain(uint64_t seed, int width, int height) {
    if (width < 2 || height < 2) {
        throw ConfigError("synthetic terrain needs at least a 2x2 grid");
    }

    const int n = diamond_square_size(width, height);
    std::vector<double> field(size_t(n) * n, 0.0);
    const auto at = [&](int r, int c) -> double& { return field[size_t(r) * n + c]; };

    SeededRng rng(seed);
    at(0, 0) = rng.uniform_real01();
    at(0, n - 1) = rng.uniform_real01();
    at(n - 1, 0) = rng.uniform_real01();
    at(n - 1, n - 1) = rng.uniform_real01();

    double amplitude = 0.5;
    for (int step = n - 1; step > 1; step /= 2, amplitude *= 0.5) {
        const int half = step / 2;

        // Diamond pass: cell centers from their four corners.
        for (int r = half; r < n; r += step) {
            for (int c = half; c < n; c += step) {
                const double avg = (at(r - half, c - half) + at(r - half, c + half) +
                                    at(r + half, c - half) + at(r + half, c + half)) /
                                   4.0;
                at(r, c) = avg + rng.uniform_real(-amplitude, amplitude);
            }
        }

        // Square pass: edge midpoints from their in-bounds diamond neighbors.
        for (int r = 0; r < n; r += half) {
            for (int c = (r / half) % 2 == 0 ? half : 0; c < n; c += step) {
                double sum = 0.0;
                int count = 0;
                if (r - half >= 0) { sum += at(r - half, c); ++count; }
                if (r + half < n) { sum += at(r + half, c); ++count; }
                if (c - half >= 0) { sum += at(r, c - half); ++count; }
                if (c + half < n) { sum += at(r, c + half); ++count; }
                at(r, c) = sum / count + rng.uniform_real(-amplitude, amplitude);
            }
        }
    }

    std::vector<double> cropped(size_t(width) * height);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            cropped[size_t(r) * width + c] = at(r, c);
        }
    }
    normalize_min_max(cropped);
    return ElevationLayer(width, height, std::move(cropped));
}

namespace {

ElevationLayer from_top_down_rows(std::vector<std::vector<double>> rows,
                                  const std::string& path) {
    const int height = int(rows.size());
    if (height == 0) throw IngestionError(path + ": no rows");
    const int width = int(rows.front().size());
    if (width == 0) throw IngestionError(path + ": empty first row");
    for (int r = 0; r < height; ++r) {
        if (int(rows[r].size()) != width) {
            throw IngestionError(path + ": row " + std::to_string(r) + " has " +
                                 std::to_string(rows[r].size()) + " columns, expected " +
                                 std::to_string(width));
        }
    }

    // File row 0 is the top of the map; internal row 0 is the bottom.
    std::vector<double> values(size_t(width) * height);
    for (int r = 0; r < height; ++r) {
        const auto& src = rows[size_t(height - 1 - r)];
        std::copy(src.begin(), src.end(), values.begin() + size_t(r) * width);
    }
    normalize_min_max(values);
    return ElevationLayer(width, height, std::move(values));
}

ElevationLayer load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError(path + ": cannot open");

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(uint8_t(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                if (!std::isfinite(v)) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw IngestionError(path + ": bad value at row " +
                                     std::to_string(line_no) + ", column " +
                                     std::to_string(col));
            }
        }
        rows.push_back(std::move(row));
    }
    return from_top_down_rows(std::move(rows), path);
}

ElevationLayer load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError(path + ": cannot open");

    const auto next_token = [&]() -> std::string {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw IngestionError(path + ": truncated header");
    };

    const std::string magic = next_token();
    if (magic != "P5" && magic != "P2") {
        throw IngestionError(path + ": not a PGM file (magic " + magic + ")");
    }

    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token());
        height = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw IngestionError(path + ": malformed header");
    }
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
        throw IngestionError(path + ": invalid dimensions or maxval");
    }

    std::vector<std::vector<double>> rows(size_t(height),
                                          std::vector<double>(size_t(width), 0.0));
    if (magic == "P2") {
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                int v;
                if (!(in >> v)) {
                    throw IngestionError(path + ": truncated pixel data at row " +
                                         std::to_string(r) + ", column " +
                                         std::to_string(c));
                }
                rows[r][c] = double(v) / maxval;
            }
        }
    } else {
        in.get();  // single whitespace byte after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                int v = in.get();
                if (bytes == 2) {
                    const int lo = in.get();
                    v = v * 256 + lo;
                }
                if (!in) {
                    throw IngestionError(path + ": truncated pixel data at row " +
                                         std::to_string(r) + ", column " +
                                         std::to_string(c));
                }
                rows[r][c] = double(v) / maxval;
            }
        }
    }
    return from_top_down_rows(std::move(rows), path);
}

}  // namespace

ElevationLayer load_terrain(const std::string& path, TerrainFormat format) {
    switch (format) {
        case TerrainFormat::Csv: return load_csv(path);
        case TerrainFormat::Pgm: return load_pgm(path);
    }
    throw ConfigError("unknown terrain format");
}

}  // namespace mopp
