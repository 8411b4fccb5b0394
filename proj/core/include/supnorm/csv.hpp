#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "supnorm/grid.hpp"

namespace supnorm {

/// 17 significant digits, enough for an exact double round trip.
std::string format_double(double v);

/// Parses a full decimal literal; throws InvalidInput on trailing junk.
double parse_double(std::string_view text);

/// Splits one CSV line on commas. Quoting is not supported; cells are trimmed
/// of surrounding whitespace and a trailing '\r'.
std::vector<std::string> split_csv_line(std::string_view line);

/// CurveSet CSV: a header row with the grid points, then one row per curve.
CurveSet read_curve_set_csv(std::istream& in);
CurveSet read_curve_set_csv(const std::string& path);
void write_curve_set_csv(std::ostream& out, const CurveSet& s);
void write_curve_set_csv(const std::string& path, const CurveSet& s);

}  // namespace supnorm
