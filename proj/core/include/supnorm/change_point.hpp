#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "supnorm/bootstrap.hpp"
#include "supnorm/grid.hpp"
#include "supnorm/two_sample.hpp"

namespace supnorm {

/// Sequential CUSUM process evaluated at the knots s = k/n, k = 0..n:
///   U(k/n, t) = (1/n) (sum_{j<=k} X_j(t) - (k/n) sum_{j=1}^n X_j(t)).
/// Between knots U is linear in s, so its supremum is attained at a knot.
struct UProcess {
  Grid grid;
  RowMatrix values;  // (n+1) x G; rows 0 and n are identically zero

  std::size_t n() const { return static_cast<std::size_t>(values.rows()) - 1; }
};

UProcess u_process(const CurveSet& s);

/// M_n = max over knots and grid of |U|.
double m_stat(const CurveSet& s);

/// Change-point location estimate.
struct ChangeLocation {
  std::size_t k_tilde = 0;  // smallest maximiser of ||U(k/n, .)|| over 1 <= k < n
  double s_tilde = 0.0;     // k_tilde / n
  double s_hat = 0.0;       // s_tilde clamped to [vartheta, 1 - vartheta]
  std::size_t split = 0;    // floor(s_hat n), kept inside [1, n-1]
  double m_stat = 0.0;
};

ChangeLocation locate_change(const CurveSet& s, double vartheta);

/// Just the clamped estimate s_hat of locate_change.
double estimate_cp(const CurveSet& s, double vartheta);

struct CpConfig {
  std::size_t block = 2;  // l, 1 <= l <= n
  std::size_t replicates = 200;
  double vartheta = 0.1;  // 0 < vartheta < 1/2
  std::optional<double> c_n;  // extremal-set constant; default 0.1 log n
  RngSpec rng;
  MultiplierMode multipliers = MultiplierMode::kGaussian;
  unsigned threads = 1;
};

/// 0.1 log n.
double default_c_cp(std::size_t n);

/// Bootstrap tables W_r(k/n, t), k = 0..n, for r = 0..R-1.
///
/// Y_j = X_j - (mu2_hat - mu1_hat) 1{j > split}, C_i the centered moving-block
/// sums of Y (block start i = 1..n-l+1), and
///   B_r(k/n) = n^{-1/2} sum_{i <= min(k, n-l+1)} C_i xi_i,
///   W_r(k/n) = B_r(k/n) - (k/n) B_r(1).
/// B_r stays constant once k passes n-l+1. Replicate r draws xi from cfg.rng.child(r).
std::vector<RowMatrix> cp_bootstrap(const CurveSet& s, const CpConfig& cfg);

struct CpResult {
  double s_hat = 0.0;
  std::size_t split = 0;
  double m_stat = 0.0;
  double d_hat = 0.0;  // m_stat / (s_hat (1 - s_hat))
  Curve mu1_hat;
  Curve mu2_hat;
  std::optional<ExtremalSets> sets;  // relevant test only
  TestReport report;
};

/// Test of "no change": reject iff M_n > max|W|^{(floor(R(1-alpha)))} / sqrt(n).
CpResult classical_cp_test(const CurveSet& s, const CpConfig& cfg, double alpha);

/// Test of "no relevant change" ||mu1 - mu2|| <= delta:
/// reject iff d_hat > delta + T^{(floor(R(1-alpha)))} / sqrt(n), with
///   T_r = max{ max_{E+} W_r(s_hat, .), max_{E-} -W_r(s_hat, .) } / (s_hat (1 - s_hat)).
CpResult relevant_cp_test(const CurveSet& s, const CpConfig& cfg, double delta, double alpha);

}  // namespace supnorm
