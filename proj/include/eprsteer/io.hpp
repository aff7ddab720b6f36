#pragma once

// Count-matrix CSV files and their grid sidecars.
//
// A count CSV holds one row per party-A cell and one column per party-B cell
// (cells of multi-axis parties flattened row-major). Lines starting with '#'
// and blank lines are ignored. The sidecar JSON describes the grid:
//
//   {
//     "observable": "position",          // or "momentum"
//     "units": "m",                      // optional; "m" or "1/m"
//     "axes_A": [{"n_windows": 24, "window_width": 4.333e-05, "origin": -5.2e-04}],
//     "axes_B": [{"n_windows": 24, "extent": 1.04e-03}]
//   }
//
// Each axis needs n_windows and window_width and/or extent (checked for
// L = N * width to 1e-9 relative when both are given). A missing origin
// centres the axis on zero.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "eprsteer/grid.hpp"

namespace eprsteer {

struct CountMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> values;  // row-major
};

/// Throws ParseError (with line number) or NegativeCount.
CountMatrix parse_count_csv(std::string_view text);

GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const GridSpec& grid);

/// Sidecar path convention: "data.csv" -> "data.grid.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Read a count CSV plus its grid sidecar. Throws ParseError, NegativeCount,
/// ShapeMismatch or Io.
CountBlock ingest(const std::filesystem::path& csv,
                  const std::optional<std::filesystem::path>& sidecar = std::nullopt);

std::string format_count_csv(const CountTensor& counts);
/// Writes the CSV and its sidecar next to it.
void write_block(const CountBlock& block, const std::filesystem::path& csv);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Shortest decimal representation that round-trips the double.
std::string format_number(double x);

}  // namespace eprsteer
