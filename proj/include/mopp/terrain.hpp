#pragma once

#include <cstdint>
#include <string>

#include "mopp/workspace.hpp"

namespace mopp {

enum class TerrainFormat { Csv, Pgm };

/// Smooth seeded terrain via midpoint displacement (diamond-square) on the
/// enclosing power-of-two-plus-one square, cropped to width x height and
/// min-max normalized so min = 0 and max = 1 exactly. Deterministic per
/// seed. Throws ConfigError for dimensions smaller than 2x2.
ElevationLayer generate_synthetic_terrain(uint64_t seed, int width, int height);

/// Loads a heightmap from CSV (rows of comma-separated decimals) or PGM
/// (binary P5 or ASCII P2, 8- or 16-bit). File row 0 is the top of the grid
/// and is flipped into the internal bottom-origin order. Raw values are
/// min-max normalized to [0,1]; a constant input maps to an all-zero layer.
/// Throws IngestionError naming the offending row/col on parse failure or
/// non-finite values.
ElevationLayer load_terrain(const std::string& path, TerrainFormat format);

/// Min-max normalization shared by the loaders: zero range maps to all 0.
void normalize_min_max(std::vector<double>& values);

}  // namespace mopp

