#include "supnorm/bspline.hpp"

#include <fmt/format.h>

#include "supnorm/error.hpp"

namespace supnorm {

namespace {

// Knot span index s with knots[s] <= t < knots[s+1]; t == 1 maps to the last
// non-degenerate span.
int find_span(std::span<const double> knots, int dimension, int degree, double t) {
  if (t >= knots[static_cast<std::size_t>(dimension)]) {
    return dimension - 1;
  }
  int low = degree;
  int high = dimension;
  while (high - low > 1) {
    const int mid = (low + high) / 2;
    if (t < knots[static_cast<std::size_t>(mid)]) {
      high = mid;
    } else {
      low = mid;
    }
  }
  return low;
}

// Cox-de Boor triangle: the degree+1 basis functions that are non-zero on `span`.
void nonzero_basis(std::span<const double> knots, int span, int degree, double t,
                   std::span<double> out) {
  std::vector<double> left(static_cast<std::size_t>(degree) + 1);
  std::vector<double> right(static_cast<std::size_t>(degree) + 1);
  out[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    left[uj] = t - knots[static_cast<std::size_t>(span + 1 - j)];
    right[uj] = knots[static_cast<std::size_t>(span + j)] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const auto ur = static_cast<std::size_t>(r);
      const double temp = out[ur] / (right[ur + 1] + left[uj - ur]);
      out[ur] = saved + right[ur + 1] * temp;
      saved = left[uj - ur] * temp;
    }
    out[uj] = saved;
  }
}

}  // namespace

BSplineBasis::BSplineBasis(int dimension, int degree, std::vector<double> knots, Grid grid)
    : dimension_(dimension), degree_(degree), knots_(std::move(knots)), grid_(std::move(grid)) {
  const auto g = static_cast<Eigen::Index>(grid_.size());
  values_ = RowMatrix::Zero(dimension_, g);
  for (Eigen::Index j = 0; j < g; ++j) {
    const auto column = evaluate(grid_[static_cast<std::size_t>(j)]);
    for (int i = 0; i < dimension_; ++i) {
      values_(i, j) = column[static_cast<std::size_t>(i)];
    }
  }
}

BSplineBasis BSplineBasis::clamped_uniform(int dimension, int degree, const Grid& grid) {
  if (degree < 0 || dimension < degree + 1) {
    throw InvalidInput(
        fmt::format("B-spline basis needs dimension >= degree + 1 (got D={}, degree={})",
                    dimension, degree));
  }
  // dimension + degree + 1 knots: degree+1 zeros, uniform interior, degree+1 ones.
  const int interior = dimension - degree - 1;
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(dimension + degree + 1));
  for (int i = 0; i <= degree; ++i) {
    knots.push_back(0.0);
  }
  for (int i = 1; i <= interior; ++i) {
    knots.push_back(static_cast<double>(i) / static_cast<double>(interior + 1));
  }
  for (int i = 0; i <= degree; ++i) {
    knots.push_back(1.0);
  }
  return BSplineBasis(dimension, degree, std::move(knots), grid);
}

std::vector<double> BSplineBasis::evaluate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidInput(fmt::format("B-spline evaluation point {} outside [0,1]", t));
  }
  std::vector<double> result(static_cast<std::size_t>(dimension_), 0.0);
  const int span = find_span(knots_, dimension_, degree_, t);
  std::vector<double> local(static_cast<std::size_t>(degree_) + 1);
  nonzero_basis(knots_, span, degree_, t, local);
  for (int r = 0; r <= degree_; ++r) {
    result[static_cast<std::size_t>(span - degree_ + r)] = local[static_cast<std::size_t>(r)];
  }
  return result;
}

}  // namespace supnorm
