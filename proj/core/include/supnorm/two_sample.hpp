#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "supnorm/bootstrap.hpp"
#include "supnorm/grid.hpp"
#include "supnorm/rng.hpp"

namespace supnorm {

/// Two samples X_1..X_m and Y_1..Y_n of curves on a common grid; m, n >= 2.
class TwoSampleData {
 public:
  TwoSampleData(CurveSet x, CurveSet y);

  const CurveSet& x() const { return x_; }
  const CurveSet& y() const { return y_; }
  std::size_t m() const { return x_.count(); }
  std::size_t n() const { return y_.count(); }
  const Grid& grid() const { return x_.grid(); }

 private:
  CurveSet x_;
  CurveSet y_;
};

struct BootConfig2S {
  std::size_t replicates = 200;
  std::size_t block_x = 2;  // l1, 1 <= l1 <= m
  std::size_t block_y = 2;  // l2, 1 <= l2 <= n
  RngSpec rng;
  MultiplierMode multipliers = MultiplierMode::kGaussian;
  unsigned threads = 1;  // 0 = all cores; results do not depend on it
};

/// R bootstrap processes on the grid, one per row, plus sqrt(m + n).
struct BootstrapDraws {
  Grid grid;
  RowMatrix processes;
  double scale = 1.0;
  RngSpec rng;
  std::size_t block_x = 0;
  std::size_t block_y = 0;

  std::size_t replicates() const { return static_cast<std::size_t>(processes.rows()); }
  Curve process(std::size_t r) const;
};

/// Grid masks estimating where the mean difference attains +d and -d.
struct ExtremalSets {
  std::vector<std::uint8_t> plus;
  std::vector<std::uint8_t> minus;
  double threshold = 0.0;  // a point t is in plus iff diff(t) >= threshold
  double c = 0.0;
};

struct Band {
  Curve center;
  Curve lower;
  Curve upper;
  double alpha = 0.05;
  double half_width = 0.0;

  /// True iff lower <= f <= upper at every grid point.
  bool covers(const Curve& f) const;
};

/// mean(X) - mean(Y).
Curve mean_difference(const TwoSampleData& d);

/// sup_t |mean(X)(t) - mean(Y)(t)|.
double dhat_infty(const TwoSampleData& d);

/// Multiplier block bootstrap processes
///   B_r(t) = sqrt(n+m) [ (1/m) sum_k l1^{-1/2} (sum_{j=k}^{k+l1-1} X_j(t) - (l1/m) sum_j X_j(t)) xi_k
///                      + (1/n) sum_k l2^{-1/2} (sum_{j=k}^{k+l2-1} Y_j(t) - (l2/n) sum_j Y_j(t)) zeta_k ]
/// with k running over the m-l1+1 (resp. n-l2+1) block starts. Replicate r
/// draws xi_1.. then zeta_1.. from cfg.rng.child(r).
BootstrapDraws boot_processes_2s(const TwoSampleData& d, const BootConfig2S& cfg);

/// 0.1 log(m + n).
double default_c_2s(std::size_t m, std::size_t n);

/// E+ = {t : diff(t) >= dhat - c / scale}, E- = {t : -diff(t) >= dhat - c / scale}.
ExtremalSets extremal_sets(const Curve& diff, double dhat, double c, double scale);

/// Extremal sets of mean(X) - mean(Y) with threshold dhat - c / sqrt(m + n); c > 0.
ExtremalSets extremal_sets_2s(const TwoSampleData& d, double c);

/// T_r = sup_t |B_r(t)|.
std::vector<double> sup_statistics(const BootstrapDraws& draws);

/// K_r = max{ max_{E+} B_r, max_{E-} (-B_r) }. Throws InternalError if both
/// masks are empty.
std::vector<double> extremal_statistics(const BootstrapDraws& draws, const ExtremalSets& sets);

/// Classical test of mu1 == mu2: reject iff dhat > T^{(floor(R(1-alpha)))} / sqrt(m + n).
TestReport classical_test_2s(const TwoSampleData& d, const BootConfig2S& cfg, double alpha);
TestReport classical_test_2s(const TwoSampleData& d, const BootstrapDraws& draws, double alpha);

/// Simultaneous band mean(X) - mean(Y) -/+ T^{(floor(R(1-alpha)))} / sqrt(m + n).
Band confidence_band_2s(const TwoSampleData& d, const BootConfig2S& cfg, double alpha);
Band confidence_band_2s(const TwoSampleData& d, const BootstrapDraws& draws, double alpha);

/// Relevant test of ||mu1 - mu2|| <= delta: reject iff
/// dhat > delta + K^{(floor(R(1-alpha)))} / sqrt(m + n). `c` defaults to default_c_2s.
TestReport relevant_test_2s(const TwoSampleData& d, const BootConfig2S& cfg, double delta,
                            double alpha, std::optional<double> c = std::nullopt);
TestReport relevant_test_2s(const TwoSampleData& d, const BootstrapDraws& draws, double delta,
                            double alpha, std::optional<double> c = std::nullopt);

}  // namespace supnorm
