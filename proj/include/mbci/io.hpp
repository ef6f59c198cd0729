#pragma once

#include <ostream>
#include <string>

#include "mbci/averaged.hpp"
#include "mbci/correlation.hpp"

// Numeric artifact emission. CSV grids carry axis coordinates in the first
// row and column and `#` metadata lines (command, config hash) on top; JSON
// mirrors the same structure. Doubles are printed with 17 significant digits
// so re-running the same config reproduces byte-identical payloads.

namespace mbci {

struct ArtifactMetadata {
  std::string command;
  std::string config_hash;
  std::string x_name = "x";
  std::string y_name = "y";
};

/// Shortest round-trip representation of a double (17 significant digits).
std::string format_double(double v);

void write_grid_csv(std::ostream& out, const Grid2D& grid, const ArtifactMetadata& meta);
void write_grid_json(std::ostream& out, const Grid2D& grid, const ArtifactMetadata& meta);

void write_pav_csv(std::ostream& out, const PavTable& table, const ArtifactMetadata& meta);
void write_pav_json(std::ostream& out, const PavTable& table, const ArtifactMetadata& meta);

}  // namespace mbci
