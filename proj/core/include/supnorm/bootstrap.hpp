#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "supnorm/grid.hpp"
#include "supnorm/rng.hpp"

namespace supnorm {

/// Source of the bootstrap multipliers. kZero replaces every draw with 0 and
/// exists to test the degenerate paths of the procedures.
enum class MultiplierMode { kGaussian, kZero };

/// Fills `out` with the multipliers of replicate r: standard normals drawn in
/// index order from base.child(r), or zeros.
void draw_multipliers(const RngSpec& base, std::size_t r, MultiplierMode mode, std::span<double> out);

/// Row k (0-based, k = 0..count-block) holds the centered moving-block sum
///   factor * block^{-1/2} (rows_k + ... + rows_{k+block-1} - (block/count) sum_j rows_j).
RowMatrix centered_block_sums(const RowMatrix& rows, std::size_t block, double factor);

/// The floor(R (1 - alpha))-th smallest value (1-based), with the index
/// clamped to [1, R]. No interpolation.
double empirical_quantile(std::span<const double> values, double alpha);

/// Outcome of a bootstrap test. The decision rule shared by every test here is
///   reject  <=>  statistic > delta + quantile / scale,
/// where quantile is the empirical (1 - alpha)-quantile of boot_stats and
/// scale is the root-n normalisation of the procedure.
struct TestReport {
  std::string test;
  double statistic = 0.0;
  double delta = 0.0;
  double alpha = 0.05;
  double quantile = 0.0;
  double scale = 1.0;
  bool reject = false;
  double p_value = 1.0;
  std::vector<double> boot_stats;
  RngSpec rng;
  std::size_t block_x = 0;  // l1, or l for change-point procedures
  std::size_t block_y = 0;  // l2; 0 when not applicable
};

/// Applies the decision rule above and computes the bootstrap p-value
///   (1 + #{r : boot_stats[r] / scale >= statistic - delta}) / (R + 1).
TestReport bootstrap_decision(std::string test, double statistic, double delta, double alpha,
                              std::vector<double> boot_stats, double scale);

}  // namespace supnorm
