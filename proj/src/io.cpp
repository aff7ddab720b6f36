#include "eprsteer/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eprsteer/error.hpp"

namespace eprsteer {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

CountMatrix parse_count_csv(std::string_view text) {
  CountMatrix m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::size_t columns = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto field = trim(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                                  : comma - start));
      ++columns;
      if (field.empty()) {
        throw Error(ErrorCode::ParseError, "empty field at " + where(line_no, columns));
      }
      if (field.front() == '-' || field.starts_with("\xE2\x88\x92")) {  // ASCII or U+2212 minus
        throw Error(ErrorCode::NegativeCount,
                    "negative count " + std::string(field) + " at " + where(line_no, columns));
      }
      std::uint64_t value = 0;
      const auto* first = field.data() + (field.front() == '+' ? 1 : 0);
      const auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::ParseError, "'" + std::string(field) +
                                               "' is not a nonnegative integer count at " +
                                               where(line_no, columns));
      }
      m.values.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (m.rows == 0) {
      m.cols = columns;
    } else if (columns != m.cols) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(m.rows) + " (line " +
                                             std::to_string(line_no) + ") has " +
                                             std::to_string(columns) + " fields, expected " +
                                             std::to_string(m.cols));
    }
    ++m.rows;
  }
  if (m.rows == 0) throw Error(ErrorCode::ParseError, "no data rows");
  return m;
}

namespace {

AxisGrid axis_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_windows")) {
    throw Error(ErrorCode::ParseError, "axis entry needs n_windows");
  }
  const auto n = j.at("n_windows").get<std::int64_t>();
  if (n <= 0) throw Error(ErrorCode::InvalidGrid, "n_windows must be positive");
  const auto nw = static_cast<std::size_t>(n);
  const bool has_width = j.contains("window_width");
  const bool has_extent = j.contains("extent");
  if (!has_width && !has_extent) {
    throw Error(ErrorCode::ParseError, "axis needs window_width or extent");
  }
  double width = has_width ? j.at("window_width").get<double>()
                           : j.at("extent").get<double>() / static_cast<double>(nw);
  if (has_extent) {
    const double extent = j.at("extent").get<double>();
    if (!(extent > 0.0)) throw Error(ErrorCode::NonpositiveExtent, "axis extent must be positive");
    const double implied = width * static_cast<double>(nw);
    if (std::abs(implied - extent) > 1e-9 * std::abs(extent)) {
      throw Error(ErrorCode::InvalidGrid, "extent " + format_number(extent) + " != n_windows * width " +
                                              format_number(implied));
    }
  }
  const double origin = j.contains("origin") ? j.at("origin").get<double>()
                                             : -0.5 * width * static_cast<double>(nw);
  return AxisGrid(nw, width, origin);
}

}  // namespace

GridSpec grid_from_json(const nlohmann::json& j) {
  try {
    const auto obs_text = j.at("observable").get<std::string>();
    Observable obs;
    if (obs_text == "position") {
      obs = Observable::Position;
    } else if (obs_text == "momentum") {
      obs = Observable::Momentum;
    } else {
      throw Error(ErrorCode::ParseError, "unknown observable '" + obs_text + "'");
    }
    if (j.contains("units") && j.at("units").get<std::string>() != unit_of(obs)) {
      throw Error(ErrorCode::ParseError, "units '" + j.at("units").get<std::string>() +
                                             "' do not match " + std::string(to_string(obs)) +
                                             " (expected " + std::string(unit_of(obs)) + ")");
    }
    std::vector<AxisGrid> a, b;
    for (const auto& ax : j.at("axes_A")) a.push_back(axis_from_json(ax));
    for (const auto& ax : j.at("axes_B")) b.push_back(axis_from_json(ax));
    return GridSpec(obs, std::move(a), std::move(b));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("grid sidecar: ") + e.what());
  }
}

nlohmann::json grid_to_json(const GridSpec& grid) {
  auto axes = [](const std::vector<AxisGrid>& list) {
    auto arr = nlohmann::json::array();
    for (const auto& ax : list) {
      arr.push_back({{"n_windows", ax.n_windows()},
                     {"window_width", ax.window_width()},
                     {"origin", ax.origin()},
                     {"extent", ax.extent()}});
    }
    return arr;
  };
  return {{"observable", to_string(grid.observable())},
          {"units", unit_of(grid.observable())},
          {"axes_A", axes(grid.axes_a())},
          {"axes_B", axes(grid.axes_b())}};
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".grid.json");
  return p;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

CountBlock ingest(const std::filesystem::path& csv,
                  const std::optional<std::filesystem::path>& sidecar) {
  const auto grid_path = sidecar.value_or(sidecar_path(csv));
  nlohmann::json gj;
  try {
    gj = nlohmann::json::parse(read_text(grid_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, grid_path.string() + ": " + e.what());
  }
  auto grid = grid_from_json(gj);

  CountMatrix m;
  try {
    m = parse_count_csv(read_text(csv));
  } catch (const Error& e) {
    throw Error(e.code(), csv.string() + ": " + e.message());
  }
  if (m.rows != grid.cells(Party::A) || m.cols != grid.cells(Party::B)) {
    throw Error(ErrorCode::ShapeMismatch,
                csv.string() + ": " + std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                    " matrix, grid expects " + std::to_string(grid.cells(Party::A)) + "x" +
                    std::to_string(grid.cells(Party::B)));
  }
  return {grid, CountTensor(grid.shape(), std::move(m.values))};
}

std::string format_count_csv(const CountTensor& counts) {
  const std::size_t rows = counts.cells(Party::A), cols = counts.cells(Party::B);
  std::string out;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ',';
      out += std::to_string(counts[r * cols + c]);
    }
    out += '\n';
  }
  return out;
}

void write_block(const CountBlock& block, const std::filesystem::path& csv) {
  write_text(csv, format_count_csv(block.counts));
  write_text(sidecar_path(csv), grid_to_json(block.grid).dump(2) + "\n");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace eprsteer
