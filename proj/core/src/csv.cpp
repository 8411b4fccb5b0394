#include "supnorm/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "supnorm/error.hpp"

namespace supnorm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double v) {
  return fmt::format("{:.17g}", v);
}

double parse_double(std::string_view text) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') {
    ++begin;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw InvalidInput(fmt::format("cannot parse '{}' as a number", text));
  }
  return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    cells.emplace_back(trim(cell));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return cells;
}

CurveSet read_curve_set_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidInput("curve CSV is empty");
  }
  std::vector<double> points;
  for (const auto& cell : split_csv_line(line)) {
    points.push_back(parse_double(cell));
  }
  Grid grid = Grid::from_points(std::move(points));

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != grid.size()) {
      throw InvalidInput(fmt::format("curve CSV line {}: expected {} values, found {}", line_no,
                                     grid.size(), cells.size()));
    }
    for (const auto& cell : cells) {
      values.push_back(parse_double(cell));
    }
    ++rows;
  }
  if (rows == 0) {
    throw InvalidInput("curve CSV has a grid header but no curves");
  }
  RowMatrix table = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                          static_cast<Eigen::Index>(grid.size()));
  return CurveSet(std::move(grid), std::move(table));
}

CurveSet read_curve_set_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput(fmt::format("cannot open '{}'", path));
  }
  return read_curve_set_csv(in);
}

void write_curve_set_csv(std::ostream& out, const CurveSet& s) {
  const auto points = s.grid().points();
  for (std::size_t j = 0; j < points.size(); ++j) {
    out << (j ? "," : "") << format_double(points[j]);
  }
  out << '\n';
  const auto& rows = s.rows();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      out << (j ? "," : "") << format_double(rows(i, j));
    }
    out << '\n';
  }
}

void write_curve_set_csv(const std::string& path, const CurveSet& s) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput(fmt::format("cannot write '{}'", path));
  }
  write_curve_set_csv(out, s);
}

}  // namespace supnorm
