// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: supnorm_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "supnorm/change_point.hpp"
#include "supnorm/cli.hpp"
#include "supnorm/csv.hpp"
#include "supnorm/dgp.hpp"
#include "supnorm/harness.hpp"
#include "supnorm/two_sample.hpp"

namespace {

using namespace supnorm;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "FAILED ") + note);
  }
  void info(const std::string& note) { notes.push_back(note); }
};

double pct(double rate) { return 100.0 * rate; }

const ResultRow& find_row(const ResultTable& t, MeanFamily f, double parameter, std::size_t n, double alpha) {
  for (const auto& r : t.rows) {
    if (r.family == f && std::abs(r.parameter - parameter) < 1e-12 && r.sizes.n == n &&
        std::abs(r.alpha - alpha) < 1e-12) {
      return r;
    }
  }
  throw std::runtime_error("missing result row");
}

void within(Verdict& v, const std::string& label, double value, double target, double tol) {
  v.require(std::abs(value - target) <= tol,
            fmt::format("{} {:.1f}% (target {:.1f} +/- {:.1f})", label, value, target, tol));
}

// 1. table2: boundary level at (m, n) = (100, 200).
Verdict table2_level() {
  ExperimentSpec spec = builtin_study(Study::kTable2);
  spec.sizes = {{100, 200}};
  spec.alphas = {0.05, 0.10};
  const ResultTable t = run_study(spec);
  Verdict v;
  const std::map<std::pair<MeanFamily, double>, double> targets{
      {{MeanFamily::kRelex1, 0.05}, 3.8}, {{MeanFamily::kRelex2, 0.05}, 4.2},
      {{MeanFamily::kRelex1, 0.10}, 9.7}, {{MeanFamily::kRelex2, 0.10}, 10.2}};
  for (const auto& [key, target] : targets) {
    const auto& row = find_row(t, key.first, 0.1, 200, key.second);
    within(v, fmt::format("{} alpha={:g}", to_string(key.first), key.second), pct(row.rate), target,
           key.second == 0.05 ? 2.5 : 3.5);
  }
  return v;
}

// 2. table3: coverage and half-width at (100, 200), 5%.
Verdict table3_band() {
  ExperimentSpec spec = builtin_study(Study::kTable3);
  spec.sizes = {{100, 200}};
  spec.alphas = {0.05};
  const ResultTable t = run_study(spec);
  Verdict v;
  for (auto [fam, target] : {std::pair{MeanFamily::kRelex1, 94.5}, std::pair{MeanFamily::kRelex2, 94.2}}) {
    const auto& row = find_row(t, fam, 0.1, 200, 0.05);
    within(v, fmt::format("{} coverage", to_string(fam)), pct(row.rate), target, 2.5);
    v.require(std::abs(*row.mean_half_width - 0.24) <= 0.03,
              fmt::format("{} half-width {:.3f} (target 0.24 +/- 0.03)", to_string(fam), *row.mean_half_width));
  }
  return v;
}

// 3. table4: boundary level (n = 200) and interior null (n = 500).
Verdict table4_cp() {
  Verdict v;
  ExperimentSpec spec = builtin_study(Study::kTable4);
  spec.sizes = {{0, 200}};
  spec.means = {{MeanFamily::kRelex1, {0.4}}, {MeanFamily::kRelex2, {0.4}}};
  spec.alphas = {0.05};
  const ResultTable boundary = run_study(spec);
  for (auto [fam, target] : {std::pair{MeanFamily::kRelex1, 5.1}, std::pair{MeanFamily::kRelex2, 5.4}}) {
    within(v, fmt::format("n=200 {} a=0.4", to_string(fam)), pct(find_row(boundary, fam, 0.4, 200, 0.05).rate),
           target, 2.5);
  }
  spec.sizes = {{0, 500}};
  spec.means = {{MeanFamily::kRelex1, {0.38}}, {MeanFamily::kRelex2, {0.38}}};
  spec.alphas = {0.10};
  const ResultTable interior = run_study(spec);
  for (auto fam : {MeanFamily::kRelex1, MeanFamily::kRelex2}) {
    const double rate = pct(find_row(interior, fam, 0.38, 500, 0.10).rate);
    v.require(rate <= 1.5, fmt::format("n=500 {} a=0.38 at 10%: {:.1f}% (<= 1.5)", to_string(fam), rate));
  }
  return v;
}

// 4. table1: classical test: level window and power ordering in a.
Verdict table1_classical() {
  Verdict v;
  const ExperimentSpec spec = builtin_study(Study::kTable1);
  const ResultTable t = run_study(spec);
  const std::vector<double> grid{0.0, 0.4, 0.6, 0.8};
  const double level = pct(find_row(t, MeanFamily::kMeanClass1, 0.0, 200, 0.05).rate);
  v.require(level >= 3.0 && level <= 12.0, fmt::format("a=0 level at 5%: {:.1f}% (window [3, 12])", level));
  for (double alpha : spec.alphas) {
    std::string line = fmt::format("alpha={:g}:", alpha);
    bool increasing = true;
    double previous = -1.0;
    for (double a : grid) {
      const double r = find_row(t, MeanFamily::kMeanClass1, a, 200, alpha).rate;
      increasing = increasing && r > previous;
      previous = r;
      line += fmt::format(" {:.1f}", pct(r));
    }
    v.require(increasing, "strictly increasing in a " + line);
  }
  std::string k_line = "meanclass2 k=2..5 at 5%:";
  for (double k : {2.0, 3.0, 4.0, 5.0}) {
    k_line += fmt::format(" {:.1f}", pct(find_row(t, MeanFamily::kMeanClass2, k, 200, 0.05).rate));
  }
  v.info(k_line);

  ExperimentSpec spline = spec;
  spline.process = ProcessKind::kFar1;
  spline.means = {{MeanFamily::kMeanClass1, grid}};
  spline.alphas = {0.05};
  const ResultTable s = run_study(spline);
  std::string s_line = "B-spline fAR(1) variant, a=0,0.4,0.6,0.8 at 5%:";
  for (double a : grid) s_line += fmt::format(" {:.1f}", pct(find_row(s, MeanFamily::kMeanClass1, a, 200, 0.05).rate));
  v.info(s_line + " (informational)");
  return v;
}

// 5. Power curve shape for the relevant two-sample test.
Verdict fig1_shape() {
  Verdict v;
  const ExperimentSpec spec = builtin_study(Study::kFig1);
  const ResultTable t = power_curve(spec);
  std::map<std::size_t, double> interior_total;
  for (const auto& sizes : spec.sizes) {
    for (const auto& fg : spec.means) {
      for (double alpha : spec.alphas) {
        std::vector<const ResultRow*> rows;
        for (const auto& r : t.rows) {
          if (r.family == fg.family && r.sizes.n == sizes.n && r.alpha == alpha) rows.push_back(&r);
        }
        std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->d_infinity < b->d_infinity; });
        const std::string tag = fmt::format("({},{}) {} alpha={:g}", sizes.m, sizes.n, to_string(fg.family), alpha);
        bool below_ok = true;
        bool increasing = true;
        double previous = -1.0;
        std::string curve;
        for (const auto* r : rows) {
          curve += fmt::format(" {:.1f}", pct(r->rate));
          if (r->d_infinity < spec.delta - 1e-12) {
            below_ok = below_ok && r->rate < alpha;
            interior_total[sizes.n] += r->rate;
          } else if (std::abs(r->d_infinity - spec.delta) <= 1e-12) {
            v.require(std::abs(r->rate - alpha) <= 0.03,
                      fmt::format("{} boundary {:.1f}% (|rate - alpha| <= 3pp)", tag, pct(r->rate)));
          } else {
            increasing = increasing && r->rate > previous;
            previous = r->rate;
          }
        }
        v.require(below_ok, tag + " interior rates below alpha, curve:" + curve);
        v.require(increasing, tag + " strictly increasing above delta");
      }
    }
  }
  v.require(interior_total.at(200) < interior_total.at(100),
            fmt::format("interior null total {:.3f} at (100,200) < {:.3f} at (50,100)", interior_total.at(200),
                        interior_total.at(100)));
  return v;
}

// 6. Property suite without simulation studies.
Verdict properties() {
  Verdict v;
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal;
  const Grid g = Grid::uniform();
  const auto random_rows = [&](std::size_t n) {
    RowMatrix r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g.size()));
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = normal(gen);
    return r;
  };

  bool axioms = true;
  for (int trial = 0; trial < 100; ++trial) {
    const CurveSet s(g, random_rows(2));
    const Curve f = s.curve(0);
    const Curve h = s.curve(1);
    const double c = normal(gen);
    axioms = axioms && sup_norm(f) > 0.0 && sup_norm(Curve::zero(g)) == 0.0;
    axioms = axioms && std::abs(sup_norm(scale(f, c)) - std::abs(c) * sup_norm(f)) <= 1e-12;
    axioms = axioms && sup_norm(diff(f, scale(h, -1.0))) <= sup_norm(f) + sup_norm(h) + 1e-12;
  }
  v.require(axioms, "sup-norm axioms");

  const CurveSet series(g, random_rows(60));
  const UProcess u = u_process(series);
  v.require(u.values.row(0).cwiseAbs().maxCoeff() == 0.0 && u.values.row(60).cwiseAbs().maxCoeff() == 0.0,
            "CUSUM vanishes at s = 0 and s = 1");

  const Curve bump = eval_mean({MeanFamily::kMeanClass2, 3.0, 4.0}, g);
  const CurveSet shifted = add_to_rows(series, bump);
  const ChangeLocation a = locate_change(series, 0.1);
  const ChangeLocation b = locate_change(shifted, 0.1);
  v.require(std::abs(a.m_stat - b.m_stat) <= 1e-12 && a.s_hat == b.s_hat, "common-shift invariance of M and s_hat");

  const TwoSampleData data(CurveSet(g, random_rows(40)), CurveSet(g, random_rows(50)));
  const TwoSampleData moved(add_to_rows(data.x(), bump), add_to_rows(data.y(), bump));
  BootConfig2S boot;
  boot.replicates = 100;
  boot.rng = {77, 1};
  const RowMatrix p1 = boot_processes_2s(data, boot).processes;
  v.require((p1 - boot_processes_2s(moved, boot).processes).cwiseAbs().maxCoeff() <= 1e-12,
            "common-shift invariance of the two-sample bootstrap");

  BootConfig2S zero = boot;
  zero.multipliers = MultiplierMode::kZero;
  const double dhat = dhat_infty(data);
  CpConfig cp_zero;
  cp_zero.multipliers = MultiplierMode::kZero;
  cp_zero.replicates = 20;
  const CpResult cz = relevant_cp_test(series, cp_zero, 0.0, 0.05);
  v.require(relevant_test_2s(data, zero, dhat * 0.999, 0.05).reject && !relevant_test_2s(data, zero, dhat, 0.05).reject &&
                cz.report.quantile == 0.0 && cz.report.reject == (cz.d_hat > 0.0),
            "zero-multiplier degeneracies");

  const auto& x = series.rows();
  const Eigen::RowVectorXd total = x.colwise().sum();
  double scan = 0.0;
  for (int step = 0; step <= 6000; ++step) {
    const double sv = step / 6000.0;
    const double pos = sv * 60.0;
    const auto whole = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), 60);
    Eigen::RowVectorXd partial = x.topRows(whole).colwise().sum();
    if (whole < 60) partial += (pos - double(whole)) * x.row(whole);
    scan = std::max(scan, ((partial - sv * total) / 60.0).cwiseAbs().maxCoeff());
  }
  v.require(std::abs(scan - m_stat(series)) <= 1e-12, "knot maximum equals refined s-grid maximum");

  const Curve after = eval_mean({MeanFamily::kRelex1, 0.0, 17.65}, g);
  const CpResult step = relevant_cp_test(step_schedule(Curve::zero(g), after, 100, 0.62), CpConfig{}, 1.0, 0.05);
  v.require(std::abs(step.s_hat - 0.62) <= 1e-12 && std::abs(step.d_hat - 1.765) <= 1e-12,
            fmt::format("noiseless step: s_hat={} d_hat={}", format_double(step.s_hat), format_double(step.d_hat)));

  bool quantiles = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> values(1 + gen() % 400);
    for (double& q : values) q = normal(gen);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    for (double alpha : {0.01, 0.05, 0.1, 0.5}) {
      const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(values.size() * (1.0 - alpha) + 1e-9)));
      quantiles = quantiles && empirical_quantile(values, alpha) == sorted[k - 1];
    }
  }
  v.require(quantiles, "empirical quantile equals order-statistic oracle");

  const BootstrapDraws draws = boot_processes_2s(data, boot);
  const Curve md = mean_difference(data);
  const double c = default_c_2s(40, 50);
  const std::vector<double> stats = extremal_statistics(draws, extremal_sets_2s(data, c));
  bool brute = true;
  for (std::size_t r = 0; r < stats.size(); ++r) {
    double best = -1e300;
    for (std::size_t t = 0; t < g.size(); ++t) {
      const double val = draws.processes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t));
      if (md[t] >= dhat - c / std::sqrt(90.0)) best = std::max(best, val);
      if (-md[t] >= dhat - c / std::sqrt(90.0)) best = std::max(best, -val);
    }
    brute = brute && best == stats[r];
  }
  v.require(brute, "extremal-set statistic equals brute force");

  BootConfig2S threaded = boot;
  threaded.threads = 4;
  CpConfig cp1;
  cp1.replicates = 50;
  CpConfig cp4 = cp1;
  cp4.threads = 4;
  ExperimentSpec small = builtin_study(Study::kTable2);
  small.runs = 8;
  small.replicates = 20;
  small.sizes = {{30, 40}};
  small.threads = 1;
  ExperimentSpec small4 = small;
  small4.threads = 4;
  std::ostringstream s1;
  std::ostringstream s4;
  write_result_csv(s1, run_study(small));
  write_result_csv(s4, run_study(small4));
  v.require(p1 == boot_processes_2s(data, threaded).processes &&
                relevant_cp_test(series, cp1, 0.1, 0.05).report.boot_stats ==
                    relevant_cp_test(series, cp4, 0.1, 0.05).report.boot_stats &&
                s1.str() == s4.str(),
            "bit-exact results with 1 and 4 threads");
  return v;
}

std::map<std::string, std::string> read_kv(const std::filesystem::path& p) {
  std::map<std::string, std::string> kv;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

// 7. Synthetic-step CLI check and the raw-panel pipeline on generated data.
Verdict cli_pipeline() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "supnorm_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  std::ostringstream out;
  std::ostringstream err;
  const auto cli = [&](std::vector<std::string> args) {
    const int rc = run_cli(args, out, err);
    if (rc != kExitOk) v.info(fmt::format("exit {} from {}: {}", rc, args.front(), err.str()));
    return rc;
  };

  int rc = cli({"generate", "--out", p("step.csv"), "--n", "100", "--after", "relex1*17.65",
                "--change-fraction", "0.62", "--noise", "0"});
  rc |= cli({"changepoint", "--input", p("step.csv"), "--out", p("step"), "--delta", "1"});
  const auto step = read_kv(dir / "step.txt");
  v.require(rc == 0 && step.count("s_hat") && std::abs(parse_double(step.at("s_hat")) - 0.62) <= 1e-12 &&
                std::abs(parse_double(step.at("d_hat")) - 1.765) <= 1e-12,
            fmt::format("changepoint on step CSV: s_hat={} d_hat={}", step.count("s_hat") ? step.at("s_hat") : "?",
                        step.count("d_hat") ? step.at("d_hat") : "?"));

  rc = cli({"generate", "--out", p("before.csv"), "--n", "40", "--raw-obs", "365", "--missing-share", "0.05",
            "--seed", "11"});
  rc |= cli({"generate", "--out", p("after.csv"), "--n", "40", "--raw-obs", "365", "--missing-share", "0.05",
             "--mean", "relex1*10", "--seed", "12"});
  rc |= cli({"generate", "--out", p("series.csv"), "--n", "80", "--raw-obs", "365", "--missing-share", "0.05",
             "--after", "relex1*10", "--change-fraction", "0.5", "--seed", "13"});
  rc |= cli({"two-sample", "--raw", "--x", p("before.csv"), "--y", p("after.csv"), "--out", p("ts"), "--delta",
             "0.5", "--seed", "5"});
  rc |= cli({"changepoint", "--raw", "--input", p("series.csv"), "--out", p("cp"), "--delta", "0.5", "--seed", "5"});
  const auto ts = read_kv(dir / "ts.txt");
  const auto cp = read_kv(dir / "cp.txt");
  v.require(rc == 0 && ts.count("reject") && cp.count("reject"),
            fmt::format("raw panel -> Fourier smoothing -> tests: two-sample d_hat={} reject={}; "
                        "changepoint s_hat={} d_hat={} reject={}",
                        ts.count("statistic") ? ts.at("statistic") : "?", ts.count("reject") ? ts.at("reject") : "?",
                        cp.count("s_hat") ? cp.at("s_hat") : "?", cp.count("d_hat") ? cp.at("d_hat") : "?",
                        cp.count("reject") ? cp.at("reject") : "?"));
  fs::remove_all(dir);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, table2_level}, {2, table3_band}, {3, table4_cp}, {4, table1_classical},
      {5, fig1_shape},   {6, properties},  {7, cli_pipeline}};
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

  bool all = true;
  for (const auto& [id, run] : criteria) {
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && v.pass;
    for (const auto& note : v.notes) std::cout << fmt::format("  [{}] {}\n", id, note);
    std::cout << fmt::format("criterion {}: {} ({:.0f} s)\n", id, v.pass ? "PASS" : "FAIL", secs) << std::flush;
  }
  return all ? 0 : 1;
}
