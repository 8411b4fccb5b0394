#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "supnorm/change_point.hpp"
#include "supnorm/dgp.hpp"
#include "supnorm/error.hpp"
#include "supnorm/mean_spec.hpp"

namespace supnorm {
namespace {

CurveSet scalar_series(const std::vector<double>& v, std::size_t g = 3) {
  RowMatrix r(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < v.size(); ++i) r.row(static_cast<Eigen::Index>(i)).setConstant(v[i]);
  return CurveSet(Grid::uniform(g), r);
}

CurveSet noisy_step(std::size_t n, double jump, double fraction, std::uint64_t seed) {
  const Grid g = Grid::uniform(51);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  RowMatrix r(static_cast<Eigen::Index>(n), 51);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = normal(gen);
  const CurveSet means = step_schedule(Curve::zero(g), eval_mean({MeanFamily::kRelex2, 0.0, jump}, g), n, fraction);
  return CurveSet(g, r + means.rows());
}

TEST(UProcess, SmallExample) {
  const CurveSet s = scalar_series({0, 0, 1, 1});
  const UProcess u = u_process(s);
  EXPECT_EQ(u.n(), 4u);
  EXPECT_EQ(u.values(0, 0), 0.0);
  EXPECT_EQ(u.values(1, 0), -0.125);
  EXPECT_EQ(u.values(2, 0), -0.25);
  EXPECT_EQ(u.values(3, 0), -0.125);
  EXPECT_EQ(u.values(4, 0), 0.0);
  EXPECT_EQ(m_stat(s), 0.25);
  const ChangeLocation loc = locate_change(s, 0.1);
  EXPECT_EQ(loc.k_tilde, 2u);
  EXPECT_EQ(loc.s_hat, 0.5);
  EXPECT_EQ(loc.split, 2u);
}

TEST(UProcess, ConstantSeriesIsZero) {
  const CurveSet s = scalar_series({2.5, 2.5, 2.5, 2.5, 2.5});
  EXPECT_EQ(m_stat(s), 0.0);
  EXPECT_EQ(locate_change(s, 0.1).k_tilde, 1u);
}

TEST(UProcess, DirectFormulaOracle) {
  const CurveSet s = noisy_step(37, 1.0, 0.4, 2);
  const UProcess u = u_process(s);
  for (std::size_t k = 0; k <= 37; ++k) {
    for (Eigen::Index t = 0; t < 51; t += 7) {
      double head = 0.0;
      double total = 0.0;
      for (std::size_t i = 0; i < 37; ++i) {
        total += s.rows()(static_cast<Eigen::Index>(i), t);
        if (i < k) head += s.rows()(static_cast<Eigen::Index>(i), t);
      }
      EXPECT_NEAR(u.values(static_cast<Eigen::Index>(k), t), (head - double(k) / 37.0 * total) / 37.0, 1e-14);
    }
  }
}

TEST(LocateChange, KnotMaximumAgreesWithFineScan) {
  // U(s) is piecewise linear between knots, so a fine scan in s cannot beat the knot maximum.
  const CurveSet s = noisy_step(40, 0.8, 0.3, 3);
  const UProcess u = u_process(s);
  const double knot_max = m_stat(s);
  const auto& x = s.rows();
  const Eigen::RowVectorXd total = x.colwise().sum();
  double scan_max = 0.0;
  for (int step = 0; step <= 4000; ++step) {
    const double sv = step / 4000.0;
    const double pos = sv * 40.0;
    const auto whole = static_cast<Eigen::Index>(std::floor(pos));
    Eigen::RowVectorXd partial = x.topRows(std::min<Eigen::Index>(whole, 40)).colwise().sum();
    if (whole < 40) partial += (pos - double(whole)) * x.row(whole);
    scan_max = std::max(scan_max, ((partial - sv * total) / 40.0).cwiseAbs().maxCoeff());
  }
  EXPECT_NEAR(scan_max, knot_max, 1e-12);
  EXPECT_EQ(u.values.row(0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LocateChange, ClampsToVartheta) {
  const CurveSet s = scalar_series({5, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  const ChangeLocation loc = locate_change(s, 0.2);
  EXPECT_EQ(loc.k_tilde, 1u);
  EXPECT_EQ(loc.s_hat, 0.2);
  EXPECT_EQ(loc.split, 2u);
  EXPECT_THROW(locate_change(s, 0.5), InvalidInput);
  EXPECT_THROW(locate_change(s, 0.0), InvalidInput);
}

TEST(RelevantCp, NoiselessStepIsExact) {
  const Grid g = Grid::uniform();
  const std::size_t n = 100;
  const Curve after = eval_mean({MeanFamily::kRelex1, 0.0, 17.65}, g);
  const CurveSet s = step_schedule(Curve::zero(g), after, n, 0.62);
  CpConfig cfg;
  cfg.replicates = 50;
  const CpResult r = relevant_cp_test(s, cfg, 1.0, 0.05);
  EXPECT_EQ(r.split, 62u);
  EXPECT_NEAR(r.s_hat, 0.62, 1e-15);
  EXPECT_NEAR(r.d_hat, 1.765, 1e-12);
  EXPECT_NEAR(sup_norm(diff(r.mu2_hat, after)), 0.0, 1e-12);
  EXPECT_NEAR(sup_norm(r.mu1_hat), 0.0, 1e-12);
  // Residuals vanish, so the bootstrap is degenerate and the decision is d_hat > delta.
  EXPECT_LT(*std::max_element(r.report.boot_stats.begin(), r.report.boot_stats.end()), 1e-12);
  EXPECT_TRUE(r.report.reject);
  EXPECT_EQ(r.report.statistic, r.d_hat);
  EXPECT_FALSE(relevant_cp_test(s, cfg, 1.8, 0.05).report.reject);
}

TEST(CpBootstrap, EndpointsVanish) {
  const CurveSet s = noisy_step(30, 1.0, 0.5, 4);
  CpConfig cfg;
  cfg.replicates = 5;
  cfg.block = 3;
  for (const RowMatrix& w : cp_bootstrap(s, cfg)) {
    EXPECT_EQ(w.row(0).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(w.row(30).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(CpBootstrap, RelevantStatisticMatchesTable) {
  const CurveSet s = noisy_step(60, 1.5, 0.5, 5);
  CpConfig cfg;
  cfg.replicates = 20;
  cfg.block = 4;
  const CpResult r = relevant_cp_test(s, cfg, 0.5, 0.05);
  const auto tables = cp_bootstrap(s, cfg);
  const double weight = r.s_hat * (1.0 - r.s_hat);
  for (std::size_t b = 0; b < tables.size(); ++b) {
    const auto w = tables[b].row(static_cast<Eigen::Index>(r.split));
    double best = -1e300;
    for (std::size_t t = 0; t < r.sets->plus.size(); ++t) {
      if (r.sets->plus[t]) best = std::max(best, w[static_cast<Eigen::Index>(t)]);
      if (r.sets->minus[t]) best = std::max(best, -w[static_cast<Eigen::Index>(t)]);
    }
    EXPECT_NEAR(r.report.boot_stats[b], best / weight, 1e-12);
  }
}

TEST(CpBootstrap, ClassicalStatisticMatchesTable) {
  const CurveSet s = noisy_step(45, 0.0, 0.5, 6);
  CpConfig cfg;
  cfg.replicates = 15;
  cfg.block = 3;
  const CpResult r = classical_cp_test(s, cfg, 0.1);
  const auto tables = cp_bootstrap(s, cfg);
  for (std::size_t b = 0; b < tables.size(); ++b) {
    EXPECT_NEAR(r.report.boot_stats[b], tables[b].cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(CpTests, ThreadCountDoesNotMatter) {
  const CurveSet s = noisy_step(80, 1.0, 0.5, 7);
  CpConfig cfg;
  cfg.replicates = 40;
  const CpResult a = relevant_cp_test(s, cfg, 0.3, 0.05);
  cfg.threads = 4;
  const CpResult b = relevant_cp_test(s, cfg, 0.3, 0.05);
  EXPECT_EQ(a.report.boot_stats, b.report.boot_stats);
  EXPECT_EQ(a.report.reject, b.report.reject);
}

TEST(CpTests, ZeroMultipliers) {
  const CurveSet s = noisy_step(50, 2.0, 0.5, 8);
  CpConfig cfg;
  cfg.replicates = 10;
  cfg.multipliers = MultiplierMode::kZero;
  const CpResult r = relevant_cp_test(s, cfg, 0.0, 0.05);
  EXPECT_EQ(r.report.quantile, 0.0);
  EXPECT_EQ(r.report.reject, r.d_hat > 0.0);
  EXPECT_TRUE(classical_cp_test(s, cfg, 0.05).report.reject);
}

TEST(CpTests, ValidatesConfig) {
  const CurveSet s = noisy_step(20, 1.0, 0.5, 9);
  CpConfig cfg;
  cfg.block = 21;
  EXPECT_THROW(classical_cp_test(s, cfg, 0.05), InvalidInput);
  cfg.block = 2;
  cfg.vartheta = 0.5;
  EXPECT_THROW(classical_cp_test(s, cfg, 0.05), InvalidInput);
  cfg.vartheta = 0.1;
  cfg.c_n = -1.0;
  EXPECT_THROW(relevant_cp_test(s, cfg, 0.1, 0.05), InvalidInput);
}

}  // namespace
}  // namespace supnorm
