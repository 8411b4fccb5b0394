#include "supnorm/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "supnorm/error.hpp"
#include "supnorm/parallel.hpp"

namespace supnorm {

namespace {

void validate(const TwoSampleData& d, const BootConfig2S& cfg) {
  if (cfg.replicates < 1) {
    throw InvalidInput("bootstrap needs at least one replicate");
  }
  if (cfg.block_x < 1 || cfg.block_x > d.m()) {
    throw InvalidInput(fmt::format("block length l1 = {} must lie in [1, m = {}]", cfg.block_x, d.m()));
  }
  if (cfg.block_y < 1 || cfg.block_y > d.n()) {
    throw InvalidInput(fmt::format("block length l2 = {} must lie in [1, n = {}]", cfg.block_y, d.n()));
  }
}

}  // namespace

TwoSampleData::TwoSampleData(CurveSet x, CurveSet y) : x_(std::move(x)), y_(std::move(y)) {
  require_same_grid(x_.grid(), y_.grid(), "two-sample data");
  if (x_.count() < 2 || y_.count() < 2) {
    throw InvalidInput(
        fmt::format("two-sample procedures need m, n >= 2 (got m={}, n={})", x_.count(), y_.count()));
  }
}

Curve BootstrapDraws::process(std::size_t r) const {
  if (r >= replicates()) {
    throw InvalidInput(fmt::format("replicate {} out of range", r));
  }
  return Curve(grid, processes.row(static_cast<Eigen::Index>(r)).transpose());
}

bool Band::covers(const Curve& f) const {
  require_same_grid(center.grid(), f.grid(), "Band::covers");
  return (f.values().array() >= lower.values().array()).all() &&
         (f.values().array() <= upper.values().array()).all();
}

Curve mean_difference(const TwoSampleData& d) {
  return diff(mean_curve(d.x()), mean_curve(d.y()));
}

double dhat_infty(const TwoSampleData& d) {
  return sup_norm(mean_difference(d));
}

BootstrapDraws boot_processes_2s(const TwoSampleData& d, const BootConfig2S& cfg) {
  validate(d, cfg);
  const double scale = std::sqrt(static_cast<double>(d.m() + d.n()));
  const RowMatrix ax =
      centered_block_sums(d.x().rows(), cfg.block_x, scale / static_cast<double>(d.m()));
  const RowMatrix ay =
      centered_block_sums(d.y().rows(), cfg.block_y, scale / static_cast<double>(d.n()));
  const auto kx = ax.rows();
  const auto ky = ay.rows();

  BootstrapDraws draws{d.grid(), RowMatrix(static_cast<Eigen::Index>(cfg.replicates), ax.cols()),
                       scale, cfg.rng, cfg.block_x, cfg.block_y};
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    Eigen::RowVectorXd multipliers(kx + ky);
    draw_multipliers(cfg.rng, r, cfg.multipliers, {multipliers.data(), static_cast<std::size_t>(kx + ky)});
    draws.processes.row(static_cast<Eigen::Index>(r)) =
        multipliers.head(kx) * ax + multipliers.tail(ky) * ay;
  });
  return draws;
}

double default_c_2s(std::size_t m, std::size_t n) {
  return 0.1 * std::log(static_cast<double>(m + n));
}

ExtremalSets extremal_sets(const Curve& diff, double dhat, double c, double scale) {
  ExtremalSets sets;
  sets.c = c;
  sets.threshold = dhat - c / scale;
  const auto& v = diff.values();
  sets.plus.resize(diff.size());
  sets.minus.resize(diff.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    sets.plus[static_cast<std::size_t>(i)] = v[i] >= sets.threshold ? 1 : 0;
    sets.minus[static_cast<std::size_t>(i)] = -v[i] >= sets.threshold ? 1 : 0;
  }
  return sets;
}

ExtremalSets extremal_sets_2s(const TwoSampleData& d, double c) {
  if (!(c > 0.0)) {
    throw InvalidInput(fmt::format("extremal-set constant must be > 0, got {}", c));
  }
  const Curve difference = mean_difference(d);
  return extremal_sets(difference, sup_norm(difference), c,
                       std::sqrt(static_cast<double>(d.m() + d.n())));
}

std::vector<double> sup_statistics(const BootstrapDraws& draws) {
  std::vector<double> stats(draws.replicates());
  for (std::size_t r = 0; r < stats.size(); ++r) {
    stats[r] = draws.processes.row(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff();
  }
  return stats;
}

std::vector<double> extremal_statistics(const BootstrapDraws& draws, const ExtremalSets& sets) {
  const auto g = static_cast<std::size_t>(draws.processes.cols());
  if (sets.plus.size() != g || sets.minus.size() != g) {
    throw InvalidInput("extremal sets do not match the bootstrap grid");
  }
  if (std::none_of(sets.plus.begin(), sets.plus.end(), [](auto b) { return b != 0; }) &&
      std::none_of(sets.minus.begin(), sets.minus.end(), [](auto b) { return b != 0; })) {
    throw InternalError("both estimated extremal sets are empty");
  }
  std::vector<double> stats(draws.replicates());
  for (std::size_t r = 0; r < stats.size(); ++r) {
    const auto row = draws.processes.row(static_cast<Eigen::Index>(r));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < g; ++t) {
      const double b = row[static_cast<Eigen::Index>(t)];
      if (sets.plus[t]) best = std::max(best, b);
      if (sets.minus[t]) best = std::max(best, -b);
    }
    stats[r] = best;
  }
  return stats;
}

TestReport classical_test_2s(const TwoSampleData& d, const BootstrapDraws& draws, double alpha) {
  auto report = bootstrap_decision("classical_two_sample", dhat_infty(d), 0.0, alpha,
                                   sup_statistics(draws), draws.scale);
  report.rng = draws.rng;
  report.block_x = draws.block_x;
  report.block_y = draws.block_y;
  return report;
}

TestReport classical_test_2s(const TwoSampleData& d, const BootConfig2S& cfg, double alpha) {
  return classical_test_2s(d, boot_processes_2s(d, cfg), alpha);
}

Band confidence_band_2s(const TwoSampleData& d, const BootstrapDraws& draws, double alpha) {
  Curve center = mean_difference(d);
  const double half_width = empirical_quantile(sup_statistics(draws), alpha) / draws.scale;
  Curve lower = shift(center, -half_width);
  Curve upper = shift(center, half_width);
  return Band{std::move(center), std::move(lower), std::move(upper), alpha, half_width};
}

Band confidence_band_2s(const TwoSampleData& d, const BootConfig2S& cfg, double alpha) {
  return confidence_band_2s(d, boot_processes_2s(d, cfg), alpha);
}

TestReport relevant_test_2s(const TwoSampleData& d, const BootstrapDraws& draws, double delta,
                            double alpha, std::optional<double> c) {
  const ExtremalSets sets = extremal_sets_2s(d, c.value_or(default_c_2s(d.m(), d.n())));
  auto report = bootstrap_decision("relevant_two_sample", dhat_infty(d), delta, alpha,
                                   extremal_statistics(draws, sets), draws.scale);
  report.rng = draws.rng;
  report.block_x = draws.block_x;
  report.block_y = draws.block_y;
  return report;
}

TestReport relevant_test_2s(const TwoSampleData& d, const BootConfig2S& cfg, double delta,
                            double alpha, std::optional<double> c) {
  return relevant_test_2s(d, boot_processes_2s(d, cfg), delta, alpha, c);
}

}  // namespace supnorm
