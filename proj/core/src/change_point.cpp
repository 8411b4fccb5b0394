#include "supnorm/change_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "supnorm/error.hpp"
#include "supnorm/parallel.hpp"

namespace supnorm {

namespace {

void validate(const CurveSet& s, const CpConfig& cfg) {
  if (s.count() < 2) {
    throw InvalidInput("change-point procedures need n >= 2");
  }
  if (cfg.replicates < 1) {
    throw InvalidInput("bootstrap needs at least one replicate");
  }
  if (cfg.block < 1 || cfg.block > s.count()) {
    throw InvalidInput(fmt::format("block length l = {} must lie in [1, n = {}]", cfg.block, s.count()));
  }
  if (!(cfg.vartheta > 0.0 && cfg.vartheta < 0.5)) {
    throw InvalidInput(fmt::format("vartheta must lie in (0, 1/2), got {}", cfg.vartheta));
  }
}

// Everything the bootstrap needs from the data once the change is located.
struct CpFit {
  ChangeLocation location;
  Curve mu1;
  Curve mu2;
  RowMatrix blocks;  // centered block sums of Y, pre-scaled by n^{-1/2}
};

CpFit fit(const CurveSet& s, const CpConfig& cfg) {
  validate(s, cfg);
  const std::size_t n = s.count();
  ChangeLocation location = locate_change(s, cfg.vartheta);
  Curve mu1 = partial_mean(s, 1, location.split);
  Curve mu2 = partial_mean(s, location.split + 1, n);

  RowMatrix y = s.rows();
  const Eigen::RowVectorXd jump = (mu2.values() - mu1.values()).transpose();
  y.bottomRows(static_cast<Eigen::Index>(n - location.split)).rowwise() -= jump;
  RowMatrix blocks = centered_block_sums(y, cfg.block, 1.0 / std::sqrt(static_cast<double>(n)));
  return CpFit{location, std::move(mu1), std::move(mu2), std::move(blocks)};
}

// sum_{i < count} xi_i C_i, accumulated in index order so that every partial
// sum below is bit-identical to the corresponding prefix of B(1).
Eigen::RowVectorXd accumulate(const RowMatrix& blocks, const Eigen::RowVectorXd& xi, Eigen::Index count) {
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(blocks.cols());
  for (Eigen::Index i = 0; i < count; ++i) {
    sum.noalias() += xi[i] * blocks.row(i);
  }
  return sum;
}

// Calls visit(k, W(k/n, .)) for k = 0..n for one multiplier draw.
template <typename Visit>
void walk_w(const RowMatrix& blocks, const Eigen::RowVectorXd& xi, std::size_t n, Visit&& visit) {
  const auto k_max = blocks.rows();
  const Eigen::RowVectorXd b_one = accumulate(blocks, xi, k_max);
  Eigen::RowVectorXd partial = Eigen::RowVectorXd::Zero(blocks.cols());
  const auto dn = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    if (kk >= 1 && kk <= k_max) {
      partial.noalias() += xi[kk - 1] * blocks.row(kk - 1);
    }
    visit(k, partial - (static_cast<double>(k) / dn) * b_one);
  }
}

// W(k/n, .) at a single knot.
Eigen::RowVectorXd w_at(const RowMatrix& blocks, const Eigen::RowVectorXd& xi, std::size_t n,
                        std::size_t k) {
  const Eigen::RowVectorXd b_one = accumulate(blocks, xi, blocks.rows());
  const auto used = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), blocks.rows());
  return accumulate(blocks, xi, used) - (static_cast<double>(k) / static_cast<double>(n)) * b_one;
}

CpResult make_result(CpFit&& f, TestReport report, std::optional<ExtremalSets> sets) {
  const double s_hat = f.location.s_hat;
  return CpResult{s_hat,
                  f.location.split,
                  f.location.m_stat,
                  f.location.m_stat / (s_hat * (1.0 - s_hat)),
                  std::move(f.mu1),
                  std::move(f.mu2),
                  std::move(sets),
                  std::move(report)};
}

}  // namespace

UProcess u_process(const CurveSet& s) {
  const std::size_t n = s.count();
  if (n < 2) {
    throw InvalidInput("CUSUM process needs n >= 2");
  }
  const auto& x = s.rows();
  const Eigen::RowVectorXd total = x.colwise().sum();
  const auto dn = static_cast<double>(n);
  RowMatrix values = RowMatrix::Zero(static_cast<Eigen::Index>(n + 1), x.cols());
  Eigen::RowVectorXd partial = Eigen::RowVectorXd::Zero(x.cols());
  for (std::size_t k = 1; k < n; ++k) {
    partial += x.row(static_cast<Eigen::Index>(k - 1));
    values.row(static_cast<Eigen::Index>(k)) = (partial - (static_cast<double>(k) / dn) * total) / dn;
  }
  return UProcess{s.grid(), std::move(values)};
}

double m_stat(const CurveSet& s) {
  return u_process(s).values.cwiseAbs().maxCoeff();
}

ChangeLocation locate_change(const CurveSet& s, double vartheta) {
  if (!(vartheta > 0.0 && vartheta < 0.5)) {
    throw InvalidInput(fmt::format("vartheta must lie in (0, 1/2), got {}", vartheta));
  }
  const UProcess u = u_process(s);
  const std::size_t n = u.n();
  ChangeLocation loc;
  loc.k_tilde = 1;
  double best = -1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double norm = u.values.row(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff();
    if (norm > best) {
      best = norm;
      loc.k_tilde = k;
    }
  }
  loc.m_stat = best;
  loc.s_tilde = static_cast<double>(loc.k_tilde) / static_cast<double>(n);
  loc.s_hat = std::max(vartheta, std::min(loc.s_tilde, 1.0 - vartheta));
  loc.split = std::clamp<std::size_t>(floor_index(loc.s_hat, n), 1, n - 1);
  return loc;
}

double estimate_cp(const CurveSet& s, double vartheta) {
  return locate_change(s, vartheta).s_hat;
}

double default_c_cp(std::size_t n) {
  return 0.1 * std::log(static_cast<double>(n));
}

std::vector<RowMatrix> cp_bootstrap(const CurveSet& s, const CpConfig& cfg) {
  const CpFit f = fit(s, cfg);
  const std::size_t n = s.count();
  std::vector<RowMatrix> tables(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    Eigen::RowVectorXd xi(f.blocks.rows());
    draw_multipliers(cfg.rng, r, cfg.multipliers, {xi.data(), static_cast<std::size_t>(xi.size())});
    RowMatrix table(static_cast<Eigen::Index>(n + 1), f.blocks.cols());
    walk_w(f.blocks, xi, n, [&](std::size_t k, const auto& w) {
      table.row(static_cast<Eigen::Index>(k)) = w;
    });
    tables[r] = std::move(table);
  });
  return tables;
}

CpResult classical_cp_test(const CurveSet& s, const CpConfig& cfg, double alpha) {
  CpFit f = fit(s, cfg);
  const std::size_t n = s.count();
  std::vector<double> stats(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    Eigen::RowVectorXd xi(f.blocks.rows());
    draw_multipliers(cfg.rng, r, cfg.multipliers, {xi.data(), static_cast<std::size_t>(xi.size())});
    double best = 0.0;
    walk_w(f.blocks, xi, n, [&](std::size_t, const auto& w) {
      best = std::max(best, w.cwiseAbs().maxCoeff());
    });
    stats[r] = best;
  });
  auto report = bootstrap_decision("classical_change_point", f.location.m_stat, 0.0, alpha,
                                   std::move(stats), std::sqrt(static_cast<double>(n)));
  report.rng = cfg.rng;
  report.block_x = cfg.block;
  return make_result(std::move(f), std::move(report), std::nullopt);
}

CpResult relevant_cp_test(const CurveSet& s, const CpConfig& cfg, double delta, double alpha) {
  CpFit f = fit(s, cfg);
  const std::size_t n = s.count();
  const double s_hat = f.location.s_hat;
  const double weight = s_hat * (1.0 - s_hat);
  const double d_hat = f.location.m_stat / weight;
  const double c = cfg.c_n.value_or(default_c_cp(n));
  if (!(c > 0.0)) {
    throw InvalidInput(fmt::format("extremal-set constant must be > 0, got {}", c));
  }

  const Curve difference = diff(f.mu1, f.mu2);
  ExtremalSets sets = extremal_sets(difference, d_hat, c, std::sqrt(static_cast<double>(n)));
  const bool any = std::any_of(sets.plus.begin(), sets.plus.end(), [](auto b) { return b != 0; }) ||
                   std::any_of(sets.minus.begin(), sets.minus.end(), [](auto b) { return b != 0; });
  if (!any) {
    // Only possible after clamping s_hat: the split means then need not reach
    // d_hat. Fall back to the point where |mu1 - mu2| is largest.
    const ArgMax peak = argmax_abs(difference);
    (peak.value >= 0.0 ? sets.plus : sets.minus)[peak.index] = 1;
  }

  std::vector<double> stats(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    Eigen::RowVectorXd xi(f.blocks.rows());
    draw_multipliers(cfg.rng, r, cfg.multipliers, {xi.data(), static_cast<std::size_t>(xi.size())});
    const Eigen::RowVectorXd w = w_at(f.blocks, xi, n, f.location.split);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < sets.plus.size(); ++t) {
      const double v = w[static_cast<Eigen::Index>(t)];
      if (sets.plus[t]) best = std::max(best, v);
      if (sets.minus[t]) best = std::max(best, -v);
    }
    stats[r] = best / weight;
  });
  auto report = bootstrap_decision("relevant_change_point", d_hat, delta, alpha, std::move(stats),
                                   std::sqrt(static_cast<double>(n)));
  report.rng = cfg.rng;
  report.block_x = cfg.block;
  return make_result(std::move(f), std::move(report), std::move(sets));
}

}  // namespace supnorm
