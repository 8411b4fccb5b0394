#include "supnorm/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "supnorm/error.hpp"

namespace supnorm {

void draw_multipliers(const RngSpec& base, std::size_t r, MultiplierMode mode, std::span<double> out) {
  if (mode == MultiplierMode::kZero) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  auto engine = base.child(r).engine();
  std::normal_distribution<double> normal;
  for (double& v : out) {
    v = normal(engine);
  }
}

RowMatrix centered_block_sums(const RowMatrix& rows, std::size_t block, double factor) {
  const auto count = rows.rows();
  const auto l = static_cast<Eigen::Index>(block);
  if (l < 1 || l > count) {
    throw InvalidInput(fmt::format("block length {} must lie in [1, {}]", block, count));
  }
  const Eigen::RowVectorXd centering =
      rows.colwise().sum() * (static_cast<double>(l) / static_cast<double>(count));
  const double weight = factor / std::sqrt(static_cast<double>(l));
  RowMatrix out(count - l + 1, rows.cols());
  for (Eigen::Index k = 0; k < out.rows(); ++k) {
    out.row(k) = (rows.middleRows(k, l).colwise().sum() - centering) * weight;
  }
  return out;
}

double empirical_quantile(std::span<const double> values, double alpha) {
  if (values.empty()) {
    throw InvalidInput("empirical quantile of an empty sample");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }
  const auto r = static_cast<double>(values.size());
  // R (1 - alpha) is an integer for the usual R and alpha but 200 * 0.95 does
  // not come out exact in binary; snap before flooring.
  const double target = r * (1.0 - alpha);
  const double snapped = std::abs(target - std::round(target)) < 1e-9 ? std::round(target)
                                                                       : std::floor(target);
  const auto index = static_cast<std::size_t>(std::clamp(snapped, 1.0, r));
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(index - 1),
                   sorted.end());
  return sorted[index - 1];
}

TestReport bootstrap_decision(std::string test, double statistic, double delta, double alpha,
                              std::vector<double> boot_stats, double scale) {
  if (!(delta >= 0.0)) {
    throw InvalidInput(fmt::format("delta must be >= 0, got {}", delta));
  }
  if (!(scale > 0.0)) {
    throw InvalidInput("bootstrap scale must be positive");
  }
  TestReport report;
  report.test = std::move(test);
  report.statistic = statistic;
  report.delta = delta;
  report.alpha = alpha;
  report.scale = scale;
  report.quantile = empirical_quantile(boot_stats, alpha);
  report.reject = statistic > delta + report.quantile / scale;
  const double excess = statistic - delta;
  const auto exceed = std::count_if(boot_stats.begin(), boot_stats.end(),
                                    [&](double b) { return b / scale >= excess; });
  report.p_value = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(boot_stats.size()) + 1.0);
  report.boot_stats = std::move(boot_stats);
  return report;
}

}  // namespace supnorm
