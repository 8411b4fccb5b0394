#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "supnorm/dgp.hpp"
#include "supnorm/mean_spec.hpp"

namespace supnorm {

enum class Study { kTable1, kTable2, kTable3, kTable4, kFig1, kCustom };
enum class Procedure { kClassical2S, kRelevant2S, kBand2S, kClassicalCp, kRelevantCp };

/// kPerRun redraws Psi in every replication; kFixed draws it once per study.
enum class PsiPolicy { kPerRun, kFixed };

std::string_view to_string(Study s);
std::string_view to_string(Procedure p);
Study parse_study(std::string_view name);
Procedure parse_procedure(std::string_view name);

/// Sample sizes of one scenario; m is ignored by change-point procedures.
struct SampleSizes {
  std::size_t m = 0;
  std::size_t n = 0;
};

/// One mean family and the parameter values to sweep (see MeanSpec::for_parameter).
struct FamilyGrid {
  MeanFamily family = MeanFamily::kZero;
  std::vector<double> parameters;
};

/// A Monte Carlo experiment. Two-sample scenarios use mu1 = 0 and mu2 = the
/// family mean; change-point scenarios switch from 0 to the family mean after
/// floor(n * change_fraction) curves.
struct ExperimentSpec {
  Study study = Study::kCustom;
  Procedure procedure = Procedure::kRelevant2S;
  ProcessKind process = ProcessKind::kFma1;
  int dimension = 21;
  double kappa = 0.5;
  int burn_in = 100;
  PsiPolicy psi_policy = PsiPolicy::kPerRun;
  std::vector<SampleSizes> sizes;
  std::vector<FamilyGrid> means;
  double delta = 0.0;
  std::vector<double> alphas{0.01, 0.05, 0.10};
  std::size_t runs = 1000;
  std::size_t replicates = 200;
  std::size_t block = 2;    // change-point procedures
  std::size_t block_x = 2;  // two-sample procedures
  std::size_t block_y = 2;
  double vartheta = 0.1;
  double change_fraction = 0.5;
  std::optional<double> c_const;  // default 0.1 log(m + n) or 0.1 log n
  std::size_t grid_size = 101;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  // 0 = all cores; results do not depend on it

  void validate() const;
};

/// The built-in configuration of each simulation study.
ExperimentSpec builtin_study(Study study);

struct ResultRow {
  MeanFamily family = MeanFamily::kZero;
  double parameter = 0.0;
  double d_infinity = 0.0;  // sup-norm of the true mean difference
  SampleSizes sizes;
  double alpha = 0.05;
  double rate = 0.0;  // rejection rate, or coverage for band studies
  double mc_se = 0.0;  // sqrt(rate (1 - rate) / runs)
  std::optional<double> mean_half_width;  // band studies only
  std::size_t runs = 0;
  double wall_seconds = 0.0;  // time spent on this row's sample sizes
};

struct ResultTable {
  ExperimentSpec spec;
  std::vector<ResultRow> rows;
  double wall_seconds = 0.0;

  /// "rejection_rate" or "coverage".
  std::string_view metric() const;
};

/// Runs every (sizes, family, parameter) scenario of `spec` for spec.runs
/// replications and tallies one row per scenario and alpha.
///
/// Replication i draws everything (Psi, innovations, multipliers) from
/// RngSpec{master_seed, i}, so the table is independent of thread scheduling
/// and scenarios sharing a replication index share their noise.
ResultTable run_study(const ExperimentSpec& spec);

/// run_study for a relevant test whose parameter grid has points below, at
/// and above delta.
ResultTable power_curve(const ExperimentSpec& spec);

/// Rows as CSV. Timing is left out so that reruns are byte-identical.
void write_result_csv(std::ostream& out, const ResultTable& table);

/// (family, m, n, alpha, d_infinity, rate) pairs for plotting power curves.
void write_plot_csv(std::ostream& out, const ResultTable& table);

/// JSON manifest: spec echo, seeds, timings.
void write_manifest(std::ostream& out, const ResultTable& table);

}  // namespace supnorm
