#include "supnorm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "supnorm/error.hpp"

namespace supnorm {

Grid Grid::uniform(std::size_t size) {
  if (size < 2) {
    throw InvalidInput(fmt::format("grid needs at least 2 points, got {}", size));
  }
  std::vector<double> points(size);
  const double last = static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) {
    points[i] = static_cast<double>(i) / last;
  }
  return Grid(std::make_shared<const std::vector<double>>(std::move(points)));
}

Grid Grid::from_points(std::vector<double> points) {
  if (points.size() < 2) {
    throw InvalidInput(fmt::format("grid needs at least 2 points, got {}", points.size()));
  }
  if (points.front() != 0.0 || points.back() != 1.0) {
    throw InvalidInput("grid must start at 0 and end at 1");
  }
  const double h = 1.0 / static_cast<double>(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double step = points[i] - points[i - 1];
    if (!(step > 0.0)) {
      throw InvalidInput(fmt::format("grid points must be strictly increasing (index {})", i));
    }
    if (std::abs(step - h) > 1e-12 * h + 1e-15) {
      throw InvalidInput(fmt::format("grid spacing is not uniform at index {}", i));
    }
  }
  return Grid(std::make_shared<const std::vector<double>>(std::move(points)));
}

std::size_t Grid::nearest_index(double t) const {
  const double clamped = std::clamp(t, 0.0, 1.0);
  const auto last = static_cast<double>(size() - 1);
  return static_cast<std::size_t>(std::lround(clamped * last));
}

bool operator==(const Grid& a, const Grid& b) {
  return a.points_ == b.points_ || *a.points_ == *b.points_;
}

std::size_t floor_index(double fraction, std::size_t n) {
  const double scaled = fraction * static_cast<double>(n);
  const double rounded = std::round(scaled);
  const double value = std::abs(scaled - rounded) <= 1e-9 * std::max(1.0, std::abs(scaled))
                           ? rounded
                           : std::floor(scaled);
  return value <= 0.0 ? 0 : static_cast<std::size_t>(value);
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw InvalidInput(fmt::format("{}: curves live on different grids", what));
  }
}

Curve::Curve(Grid grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
    throw InvalidInput(fmt::format("curve has {} values but grid has {} points", values_.size(),
                                   grid_.size()));
  }
  if (!values_.allFinite()) {
    throw InvalidInput("curve contains non-finite values");
  }
}

Curve Curve::zero(const Grid& grid) {
  return constant(grid, 0.0);
}

Curve Curve::constant(const Grid& grid, double value) {
  return Curve(grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), value));
}

CurveSet::CurveSet(Grid grid, RowMatrix rows) : grid_(std::move(grid)), rows_(std::move(rows)) {
  if (rows_.rows() < 1) {
    throw InvalidInput("curve set must contain at least one curve");
  }
  if (static_cast<std::size_t>(rows_.cols()) != grid_.size()) {
    throw InvalidInput(fmt::format("curve set has {} columns but grid has {} points",
                                   rows_.cols(), grid_.size()));
  }
  if (!rows_.allFinite()) {
    throw InvalidInput("curve set contains non-finite values");
  }
}

CurveSet CurveSet::from_curves(std::span<const Curve> curves) {
  if (curves.empty()) {
    throw InvalidInput("curve set must contain at least one curve");
  }
  const Grid& grid = curves.front().grid();
  RowMatrix rows(static_cast<Eigen::Index>(curves.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    require_same_grid(grid, curves[i].grid(), "CurveSet::from_curves");
    rows.row(static_cast<Eigen::Index>(i)) = curves[i].values().transpose();
  }
  return CurveSet(grid, std::move(rows));
}

Curve CurveSet::curve(std::size_t i) const {
  if (i >= count()) {
    throw InvalidInput(fmt::format("row {} out of range for {} curves", i, count()));
  }
  return Curve(grid_, rows_.row(static_cast<Eigen::Index>(i)).transpose());
}

double sup_norm(const Curve& c) {
  return c.values().cwiseAbs().maxCoeff();
}

ArgMax argmax_abs(const Curve& c) {
  const auto& v = c.values();
  std::size_t best = 0;
  double best_abs = std::abs(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > best_abs) {
      best_abs = std::abs(v[i]);
      best = static_cast<std::size_t>(i);
    }
  }
  return {best, v[static_cast<Eigen::Index>(best)]};
}

Curve mean_curve(const CurveSet& s) {
  return partial_mean(s, 1, s.count());
}

Curve partial_mean(const CurveSet& s, std::size_t from, std::size_t to) {
  if (from < 1 || from > to || to > s.count()) {
    throw InvalidInput(fmt::format("partial mean range [{}, {}] invalid for {} curves", from, to,
                                   s.count()));
  }
  const auto begin = static_cast<Eigen::Index>(from - 1);
  const auto len = static_cast<Eigen::Index>(to - from + 1);
  Eigen::VectorXd sum = s.rows().middleRows(begin, len).colwise().sum().transpose();
  return Curve(s.grid(), sum / static_cast<double>(len));
}

Curve diff(const Curve& a, const Curve& b) {
  require_same_grid(a.grid(), b.grid(), "diff");
  return Curve(a.grid(), a.values() - b.values());
}

Curve scale(const Curve& a, double s) {
  return Curve(a.grid(), a.values() * s);
}

Curve shift(const Curve& a, double s) {
  return Curve(a.grid(), a.values().array() + s);
}

CurveSet add_to_rows(const CurveSet& s, const Curve& c) {
  require_same_grid(s.grid(), c.grid(), "add_to_rows");
  RowMatrix rows = s.rows().rowwise() + c.values().transpose();
  return CurveSet(s.grid(), std::move(rows));
}

}  // namespace supnorm
