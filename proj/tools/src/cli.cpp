#include "supnorm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "supnorm/bspline.hpp"
#include "supnorm/change_point.hpp"
#include "supnorm/csv.hpp"
#include "supnorm/dgp.hpp"
#include "supnorm/error.hpp"
#include "supnorm/harness.hpp"
#include "supnorm/mean_spec.hpp"
#include "supnorm/report.hpp"
#include "supnorm/smoothing.hpp"
#include "supnorm/two_sample.hpp"

namespace supnorm {

namespace {

// Flags shared by the subcommands that read curves.
struct InputOptions {
  bool raw = false;
  std::size_t basis = 49;
  std::size_t grid_size = kCanonicalGridSize;
};

struct TestOptions {
  std::string test = "relevant";
  double delta = 0.0;
  double alpha = 0.05;
  std::size_t reps = 200;
  std::size_t block = 2;
  std::optional<std::size_t> block_x;
  std::optional<std::size_t> block_y;
  std::uint64_t seed = 1;
  std::optional<double> c_const;
  double vartheta = 0.1;
  unsigned threads = 1;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput(fmt::format("cannot write '{}'", path));
  }
  out.precision(17);
  return out;
}

CurveSet load_curves(const std::string& path, const InputOptions& in) {
  if (!in.raw) {
    return read_curve_set_csv(path);
  }
  FourierSpec spec;
  spec.n_basis = in.basis;
  return smooth_to_curves(read_raw_panel_csv(path), spec, Grid::uniform(in.grid_size));
}

void add_input_flags(CLI::App* cmd, InputOptions& in) {
  cmd->add_flag("--raw", in.raw, "Inputs are raw panels (label, observations...) to smooth first");
  cmd->add_option("--basis", in.basis, "Number of Fourier basis functions for --raw (odd)")
      ->capture_default_str();
  cmd->add_option("--grid-size", in.grid_size, "Grid size for smoothed curves")->capture_default_str();
}

void add_test_flags(CLI::App* cmd, TestOptions& t, bool two_sample) {
  cmd->add_option("--test", t.test, "relevant or classical")
      ->check(CLI::IsMember({"relevant", "classical"}))
      ->capture_default_str();
  cmd->add_option("--delta", t.delta, "Relevance threshold")->capture_default_str();
  cmd->add_option("--alpha", t.alpha, "Nominal level")->capture_default_str();
  cmd->add_option("--reps", t.reps, "Bootstrap replicates R")->capture_default_str();
  cmd->add_option("--block", t.block, "Block length l (both samples unless overridden)")
      ->capture_default_str();
  if (two_sample) {
    cmd->add_option("--block-x", t.block_x, "Block length l1 of the first sample");
    cmd->add_option("--block-y", t.block_y, "Block length l2 of the second sample");
  } else {
    cmd->add_option("--vartheta", t.vartheta, "Trimming of the change location")->capture_default_str();
  }
  cmd->add_option("--seed", t.seed, "Master seed")->capture_default_str();
  cmd->add_option("--c-const", t.c_const, "Extremal-set constant c");
  cmd->add_option("--threads", t.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

BootConfig2S boot_config(const TestOptions& t) {
  BootConfig2S cfg;
  cfg.replicates = t.reps;
  cfg.block_x = t.block_x.value_or(t.block);
  cfg.block_y = t.block_y.value_or(t.block);
  cfg.rng = RngSpec{t.seed, 0};
  cfg.threads = t.threads;
  return cfg;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput(fmt::format("--alpha must lie in (0, 1), got {}", alpha));
  }
}

void run_two_sample_cmd(const std::string& x_path, const std::string& y_path, const InputOptions& in,
                        const TestOptions& t, const std::string& prefix, std::ostream& out) {
  check_alpha(t.alpha);
  const TwoSampleData data(load_curves(x_path, in), load_curves(y_path, in));
  const TestReport report = t.test == "classical"
                                ? classical_test_2s(data, boot_config(t), t.alpha)
                                : relevant_test_2s(data, boot_config(t), t.delta, t.alpha, t.c_const);
  auto text = open_out(prefix + ".txt");
  write_report_text(text, report);
  auto csv = open_out(prefix + ".csv");
  write_report_csv(csv, report);
  out << fmt::format("wrote {0}.txt and {0}.csv\n", prefix);
}

void run_band_cmd(const std::string& x_path, const std::string& y_path, const InputOptions& in,
                  const TestOptions& t, const std::string& prefix, std::ostream& out) {
  check_alpha(t.alpha);
  const TwoSampleData data(load_curves(x_path, in), load_curves(y_path, in));
  const Band band = confidence_band_2s(data, boot_config(t), t.alpha);
  auto text = open_out(prefix + ".txt");
  write_band_text(text, band);
  auto csv = open_out(prefix + ".csv");
  write_band_csv(csv, band);
  out << fmt::format("wrote {0}.txt and {0}.csv\n", prefix);
}

void run_changepoint_cmd(const std::string& path, const InputOptions& in, const TestOptions& t,
                         const std::string& prefix, std::ostream& out) {
  check_alpha(t.alpha);
  const CurveSet data = load_curves(path, in);
  CpConfig cfg;
  cfg.block = t.block;
  cfg.replicates = t.reps;
  cfg.vartheta = t.vartheta;
  cfg.c_n = t.c_const;
  cfg.rng = RngSpec{t.seed, 0};
  cfg.threads = t.threads;
  const CpResult result = t.test == "classical" ? classical_cp_test(data, cfg, t.alpha)
                                                : relevant_cp_test(data, cfg, t.delta, t.alpha);
  auto text = open_out(prefix + ".txt");
  write_cp_text(text, result);
  auto csv = open_out(prefix + ".csv");
  write_cp_csv(csv, result);
  out << fmt::format("wrote {0}.txt and {0}.csv\n", prefix);
}

struct SimulateOptions {
  std::string study = "table2";
  std::optional<std::size_t> runs;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> block;
  std::optional<std::size_t> block_x;
  std::optional<std::size_t> block_y;
  std::optional<double> delta;
  std::optional<double> vartheta;
  std::optional<double> c_const;
  std::optional<std::size_t> grid_size;
  std::optional<std::string> process;
  std::string psi = "per-run";
  std::vector<double> alphas;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool power_curve = false;
};

void run_simulate_cmd(const SimulateOptions& o, const std::string& prefix, std::ostream& out) {
  ExperimentSpec spec = builtin_study(parse_study(o.study));
  spec.master_seed = o.seed;
  spec.threads = o.threads;
  spec.psi_policy = o.psi == "fixed" ? PsiPolicy::kFixed : PsiPolicy::kPerRun;
  if (o.runs) spec.runs = *o.runs;
  if (o.reps) spec.replicates = *o.reps;
  if (o.block) spec.block = spec.block_x = spec.block_y = *o.block;
  if (o.block_x) spec.block_x = *o.block_x;
  if (o.block_y) spec.block_y = *o.block_y;
  if (o.delta) spec.delta = *o.delta;
  if (o.vartheta) spec.vartheta = *o.vartheta;
  if (o.c_const) spec.c_const = *o.c_const;
  if (o.grid_size) spec.grid_size = *o.grid_size;
  if (o.process) spec.process = parse_process_kind(*o.process);
  if (!o.alphas.empty()) spec.alphas = o.alphas;

  const ResultTable table = o.power_curve ? power_curve(spec) : run_study(spec);
  auto csv = open_out(prefix + ".csv");
  write_result_csv(csv, table);
  auto plot = open_out(prefix + "_plot.csv");
  write_plot_csv(plot, table);
  auto manifest = open_out(prefix + ".json");
  write_manifest(manifest, table);
  out << fmt::format("wrote {0}.csv, {0}_plot.csv and {0}.json ({1:.1f} s)\n", prefix,
                     table.wall_seconds);
}

struct GenerateOptions {
  std::string process = "fma1";
  std::size_t n = 100;
  std::string mean = "zero";
  std::optional<std::string> after;
  double change_fraction = 0.5;
  double kappa = 0.5;
  int dimension = 21;
  double noise = 1.0;
  std::size_t grid_size = kCanonicalGridSize;
  std::optional<std::size_t> raw_obs;
  double missing_share = 0.0;
  std::optional<std::string> config;
  std::optional<std::string> psi;
  std::optional<std::string> config_out;
  std::uint64_t seed = 1;
};

// Synthetic data: a fMA(1)/fAR(1) error process plus a mean (or a mean step).
// With --raw-obs N the curves are sampled at d/N, d = 0..N-1 and written as a
// raw panel, optionally with random blank cells.
void run_generate_cmd(const GenerateOptions& o, const std::string& path, std::ostream& out) {
  if (!(o.noise >= 0.0)) {
    throw InvalidInput("--noise must be >= 0");
  }
  if (!(o.missing_share >= 0.0 && o.missing_share < 1.0)) {
    throw InvalidInput("--missing-share must lie in [0, 1)");
  }
  if (o.raw_obs && *o.raw_obs < 2) {
    throw InvalidInput("--raw-obs must be >= 2");
  }
  const RngSpec root{o.seed, 0};
  FtsConfig cfg;
  if (o.config) {
    std::ifstream in(*o.config);
    if (!in) throw InvalidInput(fmt::format("cannot open '{}'", *o.config));
    cfg = read_config_text(in);
    if (!o.psi) throw InvalidInput("--config requires --psi");
    std::ifstream psi_in(*o.psi);
    if (!psi_in) throw InvalidInput(fmt::format("cannot open '{}'", *o.psi));
    cfg.psi = read_psi_csv(psi_in);
    cfg.validate();
  } else {
    cfg = FtsConfig::standard(parse_process_kind(o.process), o.dimension, o.kappa, root.child(1));
  }
  if (o.config_out) {
    auto text = open_out(*o.config_out + ".txt");
    write_config_text(text, cfg);
    auto psi = open_out(*o.config_out + "_psi.csv");
    write_psi_csv(psi, cfg.psi);
  }

  const Grid grid = o.raw_obs ? Grid::uniform(*o.raw_obs + 1) : Grid::uniform(o.grid_size);
  const BSplineBasis basis = BSplineBasis::clamped_uniform(cfg.dimension, 3, grid);
  const Curve before = eval_mean(parse_mean_spec(o.mean), grid);
  const CurveSet means = o.after
                             ? step_schedule(before, eval_mean(parse_mean_spec(*o.after), grid), o.n,
                                             o.change_fraction)
                             : constant_schedule(before, o.n);
  const RowMatrix noise = o.noise * gen_error_curves(o.n, cfg, basis, root.child(2));
  const CurveSet curves(grid, means.rows() + noise);

  auto file = open_out(path);
  if (!o.raw_obs) {
    write_curve_set_csv(file, curves);
  } else {
    std::mt19937_64 engine = root.child(3).engine();
    std::bernoulli_distribution drop(o.missing_share);
    for (std::size_t u = 0; u < curves.count(); ++u) {
      file << "unit" << (u + 1);
      for (std::size_t d = 0; d < *o.raw_obs; ++d) {
        file << ',';
        if (!drop(engine)) {
          file << format_double(curves.rows()(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(d)));
        }
      }
      file << '\n';
    }
  }
  out << fmt::format("wrote {} ({} curves)\n", path, o.n);
}

void run_smooth_cmd(const std::string& raw, const InputOptions& in, const std::string& path,
                    std::ostream& out) {
  InputOptions opts = in;
  opts.raw = true;
  const CurveSet curves = load_curves(raw, opts);
  auto file = open_out(path);
  write_curve_set_csv(file, curves);
  out << fmt::format("wrote {} ({} curves)\n", path, curves.count());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sup-norm tests for functional time series"};
  app.name("supnorm");
  app.require_subcommand(1);

  InputOptions input;
  TestOptions test;
  std::string x_path;
  std::string y_path;
  std::string data_path;
  std::string prefix;

  auto* two = app.add_subcommand("two-sample", "Two-sample test of equal or similar mean functions");
  two->add_option("--x", x_path, "First sample (curve CSV)")->required();
  two->add_option("--y", y_path, "Second sample (curve CSV)")->required();
  two->add_option("--out", prefix, "Output prefix; writes PREFIX.txt and PREFIX.csv")->required();
  add_input_flags(two, input);
  add_test_flags(two, test, true);

  auto* band = app.add_subcommand("band", "Simultaneous confidence band for the mean difference");
  band->add_option("--x", x_path, "First sample (curve CSV)")->required();
  band->add_option("--y", y_path, "Second sample (curve CSV)")->required();
  band->add_option("--out", prefix, "Output prefix; writes PREFIX.txt and PREFIX.csv")->required();
  add_input_flags(band, input);
  add_test_flags(band, test, true);

  auto* cp = app.add_subcommand("changepoint", "Test for a (relevant) change in the mean function");
  cp->add_option("--input", data_path, "Curve CSV in time order")->required();
  cp->add_option("--out", prefix, "Output prefix; writes PREFIX.txt and PREFIX.csv")->required();
  add_input_flags(cp, input);
  add_test_flags(cp, test, false);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study");
  simulate->add_option("--study", sim.study, "table1, table2, table3, table4, fig1 or custom")
      ->capture_default_str();
  simulate->add_option("--out", prefix, "Output prefix; writes PREFIX.csv, PREFIX_plot.csv, PREFIX.json")
      ->required();
  simulate->add_option("--runs", sim.runs, "Monte Carlo replications");
  simulate->add_option("--reps", sim.reps, "Bootstrap replicates R");
  simulate->add_option("--block", sim.block, "Block length for all samples");
  simulate->add_option("--block-x", sim.block_x, "Block length l1");
  simulate->add_option("--block-y", sim.block_y, "Block length l2");
  simulate->add_option("--delta", sim.delta, "Relevance threshold");
  simulate->add_option("--vartheta", sim.vartheta, "Change-location trimming");
  simulate->add_option("--c-const", sim.c_const, "Extremal-set constant");
  simulate->add_option("--grid-size", sim.grid_size, "Grid size");
  simulate->add_option("--process", sim.process, "fma1, far1 or far1-bridge");
  simulate->add_option("--psi", sim.psi, "per-run or fixed")
      ->check(CLI::IsMember({"per-run", "fixed"}))
      ->capture_default_str();
  simulate->add_option("--alpha", sim.alphas, "Nominal levels (repeatable)");
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")->capture_default_str();
  simulate->add_flag("--power-curve", sim.power_curve, "Require parameters below, at and above delta");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write synthetic curves or a raw panel");
  generate->add_option("--out", data_path, "Output CSV")->required();
  generate->add_option("--n", gen.n, "Number of curves")->capture_default_str();
  generate->add_option("--process", gen.process, "fma1, far1 or far1-bridge")->capture_default_str();
  generate->add_option("--mean", gen.mean, "Mean, e.g. zero, relex1*4, meanclass2:3")->capture_default_str();
  generate->add_option("--after", gen.after, "Mean after the change (makes a step)");
  generate->add_option("--change-fraction", gen.change_fraction, "Location of the step")
      ->capture_default_str();
  generate->add_option("--kappa", gen.kappa, "Dependence strength")->capture_default_str();
  generate->add_option("--dimension", gen.dimension, "Number of B-spline basis functions")
      ->capture_default_str();
  generate->add_option("--noise", gen.noise, "Multiplier of the error process (0 = noiseless)")
      ->capture_default_str();
  generate->add_option("--grid-size", gen.grid_size, "Grid size")->capture_default_str();
  generate->add_option("--raw-obs", gen.raw_obs, "Write a raw panel with this many observations per unit");
  generate->add_option("--missing-share", gen.missing_share, "Share of raw cells left blank")
      ->capture_default_str();
  generate->add_option("--config", gen.config, "Process parameters (key=value text)");
  generate->add_option("--psi", gen.psi, "Psi CSV for --config");
  generate->add_option("--config-out", gen.config_out, "Write PREFIX.txt and PREFIX_psi.csv");
  generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();

  std::string raw_path;
  auto* smooth = app.add_subcommand("smooth", "Smooth a raw panel into curves");
  smooth->add_option("--input", raw_path, "Raw panel CSV")->required();
  smooth->add_option("--out", data_path, "Output curve CSV")->required();
  smooth->add_option("--basis", input.basis, "Number of Fourier basis functions (odd)")
      ->capture_default_str();
  smooth->add_option("--grid-size", input.grid_size, "Grid size")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::Success& e) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "supnorm: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*two) {
      run_two_sample_cmd(x_path, y_path, input, test, prefix, out);
    } else if (*band) {
      run_band_cmd(x_path, y_path, input, test, prefix, out);
    } else if (*cp) {
      run_changepoint_cmd(data_path, input, test, prefix, out);
    } else if (*simulate) {
      run_simulate_cmd(sim, prefix, out);
    } else if (*generate) {
      run_generate_cmd(gen, data_path, out);
    } else if (*smooth) {
      run_smooth_cmd(raw_path, input, data_path, out);
    }
  } catch (const InvalidInput& e) {
    err << "supnorm: invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "supnorm: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace supnorm
