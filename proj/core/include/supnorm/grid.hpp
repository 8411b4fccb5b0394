#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace supnorm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Number of points of the default grid on [0,1]. With spacing 0.01 every
/// breakpoint of the simulation mean families sits exactly on the grid.
inline constexpr std::size_t kCanonicalGridSize = 101;

/// Uniform grid of points 0 = t_0 < ... < t_{G-1} = 1.
///
/// Grids are immutable and cheap to copy (the points are shared).
class Grid {
 public:
  /// Equispaced grid with t_i = i / (size - 1).
  static Grid uniform(std::size_t size = kCanonicalGridSize);

  /// Validates externally supplied points (e.g. a CSV header): at least two
  /// points, first 0, last 1, strictly increasing, uniform spacing within
  /// 1e-12 relative tolerance.
  static Grid from_points(std::vector<double> points);

  std::size_t size() const { return points_->size(); }
  std::span<const double> points() const { return *points_; }
  double operator[](std::size_t i) const { return (*points_)[i]; }

  /// Index of the grid point closest to t (clamped to [0,1]).
  std::size_t nearest_index(double t) const;

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  explicit Grid(std::shared_ptr<const std::vector<double>> points)
      : points_(std::move(points)) {}

  std::shared_ptr<const std::vector<double>> points_;
};

/// A continuous function on [0,1] represented by its values on a grid.
class Curve {
 public:
  Curve(Grid grid, Eigen::VectorXd values);

  /// The zero function on `grid`.
  static Curve zero(const Grid& grid);
  static Curve constant(const Grid& grid, double value);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

/// n curves sharing one grid, stored as an n x G row-major table.
class CurveSet {
 public:
  CurveSet(Grid grid, RowMatrix rows);

  /// Stacks curves that all live on the same grid.
  static CurveSet from_curves(std::span<const Curve> curves);

  const Grid& grid() const { return grid_; }
  const RowMatrix& rows() const { return rows_; }
  std::size_t count() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t grid_size() const { return grid_.size(); }

  /// Row i (0-based) as a Curve.
  Curve curve(std::size_t i) const;

 private:
  Grid grid_;
  RowMatrix rows_;
};

struct ArgMax {
  std::size_t index;
  double value;  // signed value at `index`
};

double sup_norm(const Curve& c);
ArgMax argmax_abs(const Curve& c);

Curve mean_curve(const CurveSet& s);

/// Mean of rows from..to, 1-based and inclusive.
Curve partial_mean(const CurveSet& s, std::size_t from, std::size_t to);

Curve diff(const Curve& a, const Curve& b);
Curve scale(const Curve& a, double s);
Curve shift(const Curve& a, double s);

/// Adds `c` to every row of `s`.
CurveSet add_to_rows(const CurveSet& s, const Curve& c);

/// floor(fraction * n), tolerant to the representation error of decimal
/// fractions (0.57 * 100 is 56.99999999999999 in binary).
std::size_t floor_index(double fraction, std::size_t n);

/// Throws InvalidInput unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace supnorm
