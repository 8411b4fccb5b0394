#include "supnorm/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "supnorm/csv.hpp"
#include "supnorm/error.hpp"

namespace supnorm {

std::size_t RawUnit::missing_count() const {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), std::uint8_t{1}));
}

RawPanel read_raw_panel_csv(std::istream& in) {
  RawPanel panel;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split_csv_line(line);
    if (cells.size() == 1 && cells[0].empty()) {
      continue;
    }
    RawUnit unit;
    unit.label = cells[0];
    if (unit.label.empty()) {
      throw IngestionError(fmt::format("raw panel line {}: empty unit label", line_no));
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        unit.values.push_back(std::numeric_limits<double>::quiet_NaN());
        unit.missing.push_back(1);
        continue;
      }
      double v = 0.0;
      try {
        v = parse_double(cells[c]);
      } catch (const InvalidInput&) {
        throw IngestionError(fmt::format("raw panel line {} (unit '{}'), column {}: '{}' is not a number",
                                         line_no, unit.label, c + 1, cells[c]));
      }
      if (!std::isfinite(v)) {
        throw IngestionError(fmt::format("raw panel line {} (unit '{}'), column {}: non-finite value",
                                         line_no, unit.label, c + 1));
      }
      unit.values.push_back(v);
      unit.missing.push_back(0);
    }
    panel.units.push_back(std::move(unit));
  }
  if (panel.units.empty()) {
    throw IngestionError("raw panel CSV has no units");
  }
  return panel;
}

RawPanel read_raw_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput(fmt::format("cannot open '{}'", path));
  }
  return read_raw_panel_csv(in);
}

void FourierSpec::validate() const {
  if (n_basis == 0 || n_basis % 2 == 0) {
    throw InvalidInput(fmt::format("Fourier basis size must be odd, got {}", n_basis));
  }
}

RowMatrix fourier_design(const FourierSpec& spec, std::span<const double> points) {
  spec.validate();
  const auto cols = static_cast<Eigen::Index>(points.size());
  RowMatrix out(static_cast<Eigen::Index>(spec.n_basis), cols);
  const double root2 = std::numbers::sqrt2;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double t = points[static_cast<std::size_t>(j)];
    out(0, j) = 1.0;
    for (std::size_t k = 1; 2 * k < spec.n_basis; ++k) {
      const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) * t;
      out(static_cast<Eigen::Index>(2 * k - 1), j) = root2 * std::sin(arg);
      out(static_cast<Eigen::Index>(2 * k), j) = root2 * std::cos(arg);
    }
  }
  return out;
}

CurveSet smooth_to_curves(const RawPanel& panel, const FourierSpec& spec, const Grid& grid) {
  spec.validate();
  if (panel.units.empty()) {
    throw IngestionError("raw panel has no units");
  }
  const RowMatrix on_grid = fourier_design(spec, grid.points());
  RowMatrix rows(static_cast<Eigen::Index>(panel.units.size()), static_cast<Eigen::Index>(grid.size()));

  for (std::size_t u = 0; u < panel.units.size(); ++u) {
    const RawUnit& unit = panel.units[u];
    const std::size_t total = unit.values.size();
    if (unit.missing.size() != total) {
      throw IngestionError(fmt::format("unit '{}': missing mask does not match the values", unit.label));
    }
    if (total < 2) {
      throw IngestionError(fmt::format("unit '{}' has {} observations, need at least 2", unit.label, total));
    }
    const std::size_t missing = unit.missing_count();
    if (static_cast<double>(missing) > kMaxMissingShare * static_cast<double>(total)) {
      throw IngestionError(fmt::format("unit '{}' has {} of {} observations missing (more than 10%)",
                                       unit.label, missing, total));
    }
    const std::size_t observed = total - missing;
    if (observed < spec.n_basis) {
      throw IngestionError(fmt::format("unit '{}' has {} observed values, fewer than the {} basis functions",
                                       unit.label, observed, spec.n_basis));
    }

    std::vector<double> points;
    Eigen::VectorXd y(static_cast<Eigen::Index>(observed));
    points.reserve(observed);
    for (std::size_t d = 0; d < total; ++d) {
      if (!unit.missing[d]) {
        y[static_cast<Eigen::Index>(points.size())] = unit.values[d];
        points.push_back(static_cast<double>(d) / static_cast<double>(total));
      }
    }
    const Eigen::MatrixXd design = fourier_design(spec, points).transpose();
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(spec.n_basis)) {
      throw IngestionError(fmt::format("unit '{}': Fourier design is rank deficient (rank {} < {})",
                                       unit.label, qr.rank(), spec.n_basis));
    }
    const Eigen::VectorXd coef = qr.solve(y);
    rows.row(static_cast<Eigen::Index>(u)) = (coef.transpose() * on_grid).eval();
  }
  return CurveSet(grid, std::move(rows));
}

}  // namespace supnorm
