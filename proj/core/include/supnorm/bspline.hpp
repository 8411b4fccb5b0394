#pragma once

#include <span>
#include <vector>

#include "supnorm/grid.hpp"

namespace supnorm {

/// B-spline basis with a clamped, uniformly spaced knot sequence on [0,1],
/// tabulated on a grid.
class BSplineBasis {
 public:
  /// `dimension` basis functions of polynomial `degree`; requires
  /// dimension >= degree + 1 and degree >= 0.
  static BSplineBasis clamped_uniform(int dimension, int degree, const Grid& grid);

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  std::span<const double> knots() const { return knots_; }
  const Grid& grid() const { return grid_; }

  /// dimension x G table; row i holds basis function i on the grid.
  const RowMatrix& values() const { return values_; }

  /// All basis functions at a single point t in [0,1].
  std::vector<double> evaluate(double t) const;

 private:
  BSplineBasis(int dimension, int degree, std::vector<double> knots, Grid grid);

  int dimension_;
  int degree_;
  std::vector<double> knots_;
  Grid grid_;
  RowMatrix values_;
};

}  // namespace supnorm
