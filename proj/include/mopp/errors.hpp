#pragma once

#include <stdexcept>
#include <string>

namespace mopp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A query addressed an out-of-bounds or occupied cell.
struct InvalidQueryError : Error {
    using Error::Error;
};

/// A step between two cells is not a legal free 8-adjacent move.
struct InvalidStepError : Error {
    using Error::Error;
};

/// Workspace generation could not produce a connected map.
struct GenerationError : Error {
    using Error::Error;
};

/// Terrain or workspace file could not be parsed or failed validation.
struct IngestionError : Error {
    using Error::Error;
};

/// Start and goal are not connected by free cells.
struct NoPathError : Error {
    using Error::Error;
};

/// The expansion budget was exhausted before the search finished.
struct BudgetError : Error {
    using Error::Error;
};

/// Back-pointer field is inconsistent (cycle or dangling pointer).
struct CorruptStateError : Error {
    using Error::Error;
};

/// Invalid configuration (weights, selector, dimensions, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Dimension mismatch between objective vectors or layers.
struct DimensionError : Error {
    using Error::Error;
};

}  // namespace mopp

