#include "supnorm/harness.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "supnorm/bspline.hpp"
#include "supnorm/change_point.hpp"
#include "supnorm/csv.hpp"
#include "supnorm/error.hpp"
#include "supnorm/parallel.hpp"
#include "supnorm/two_sample.hpp"

namespace supnorm {

namespace {

constexpr std::uint64_t kFixedPsiStream = 0xffffffffffffffffULL;

bool is_two_sample(Procedure p) {
  return p == Procedure::kClassical2S || p == Procedure::kRelevant2S || p == Procedure::kBand2S;
}

struct Scenario {
  MeanFamily family;
  double parameter;
  Curve mu2;
  double d_infinity;
};

// Tallies of one replication for every (scenario, alpha) cell, scenario-major.
struct Outcome {
  std::vector<std::uint8_t> hit;
  std::vector<double> half_width;
};

std::vector<Scenario> build_scenarios(const ExperimentSpec& spec, const Grid& grid) {
  std::vector<Scenario> out;
  for (const auto& fg : spec.means) {
    for (double p : fg.parameters) {
      Curve mu2 = eval_mean(MeanSpec::for_parameter(fg.family, p), grid);
      const double d = sup_norm(mu2);
      out.push_back(Scenario{fg.family, p, std::move(mu2), d});
    }
  }
  return out;
}

Outcome run_two_sample(const ExperimentSpec& spec, const SampleSizes& sizes, const FtsConfig& process,
                       const BSplineBasis& basis, const std::vector<Scenario>& scenarios,
                       const RngSpec& rep) {
  const auto to_curves = [&](std::size_t count, std::uint64_t tag) {
    return CurveSet(basis.grid(), gen_error_curves(count, process, basis, rep.child(tag)));
  };
  const CurveSet noise_x = to_curves(sizes.m, 2);
  const CurveSet noise_y = to_curves(sizes.n, 3);

  BootConfig2S boot;
  boot.replicates = spec.replicates;
  boot.block_x = spec.block_x;
  boot.block_y = spec.block_y;
  boot.rng = rep.child(4);
  // The centered block sums cancel any curve shared by all rows of a sample,
  // so the bootstrap processes of the pure-noise samples serve every mean scenario.
  const BootstrapDraws draws = boot_processes_2s(TwoSampleData(noise_x, noise_y), boot);
  const double c = spec.c_const.value_or(default_c_2s(sizes.m, sizes.n));

  const std::size_t cells = scenarios.size() * spec.alphas.size();
  Outcome out{std::vector<std::uint8_t>(cells, 0), std::vector<double>(cells, 0.0)};
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const TwoSampleData data(noise_x, add_to_rows(noise_y, scenarios[s].mu2));
    const Curve truth = scale(scenarios[s].mu2, -1.0);
    for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
      const double alpha = spec.alphas[a];
      const std::size_t cell = s * spec.alphas.size() + a;
      switch (spec.procedure) {
        case Procedure::kClassical2S:
          out.hit[cell] = classical_test_2s(data, draws, alpha).reject;
          break;
        case Procedure::kRelevant2S:
          out.hit[cell] = relevant_test_2s(data, draws, spec.delta, alpha, c).reject;
          break;
        case Procedure::kBand2S: {
          const Band band = confidence_band_2s(data, draws, alpha);
          out.hit[cell] = band.covers(truth);
          out.half_width[cell] = band.half_width;
          break;
        }
        default:
          throw InternalError("not a two-sample procedure");
      }
    }
  }
  return out;
}

Outcome run_change_point(const ExperimentSpec& spec, const SampleSizes& sizes,
                         const FtsConfig& process, const BSplineBasis& basis,
                         const std::vector<Scenario>& scenarios, const RngSpec& rep) {
  const RowMatrix noise = gen_error_curves(sizes.n, process, basis, rep.child(2));
  const Curve zero = Curve::zero(basis.grid());

  CpConfig cfg;
  cfg.block = spec.block;
  cfg.replicates = spec.replicates;
  cfg.vartheta = spec.vartheta;
  cfg.c_n = spec.c_const;
  cfg.rng = rep.child(4);

  const std::size_t cells = scenarios.size() * spec.alphas.size();
  Outcome out{std::vector<std::uint8_t>(cells, 0), std::vector<double>(cells, 0.0)};
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const CurveSet schedule = step_schedule(zero, scenarios[s].mu2, sizes.n, spec.change_fraction);
    const CurveSet data(basis.grid(), schedule.rows() + noise);
    const CpResult result = spec.procedure == Procedure::kRelevantCp
                                ? relevant_cp_test(data, cfg, spec.delta, spec.alphas.front())
                                : classical_cp_test(data, cfg, spec.alphas.front());
    for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
      // The bootstrap sample does not depend on alpha; only the decision does.
      const TestReport& base = result.report;
      const auto decision = bootstrap_decision(base.test, base.statistic, base.delta,
                                               spec.alphas[a], base.boot_stats, base.scale);
      out.hit[s * spec.alphas.size() + a] = decision.reject;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Study s) {
  switch (s) {
    case Study::kTable1: return "table1";
    case Study::kTable2: return "table2";
    case Study::kTable3: return "table3";
    case Study::kTable4: return "table4";
    case Study::kFig1: return "fig1";
    case Study::kCustom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(Procedure p) {
  switch (p) {
    case Procedure::kClassical2S: return "classical_two_sample";
    case Procedure::kRelevant2S: return "relevant_two_sample";
    case Procedure::kBand2S: return "band_two_sample";
    case Procedure::kClassicalCp: return "classical_change_point";
    case Procedure::kRelevantCp: return "relevant_change_point";
  }
  return "unknown";
}

Study parse_study(std::string_view name) {
  for (Study s : {Study::kTable1, Study::kTable2, Study::kTable3, Study::kTable4, Study::kFig1,
                  Study::kCustom}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidInput(fmt::format("unknown study '{}'", name));
}

Procedure parse_procedure(std::string_view name) {
  for (Procedure p : {Procedure::kClassical2S, Procedure::kRelevant2S, Procedure::kBand2S,
                      Procedure::kClassicalCp, Procedure::kRelevantCp}) {
    if (to_string(p) == name) return p;
  }
  throw InvalidInput(fmt::format("unknown procedure '{}'", name));
}

void ExperimentSpec::validate() const {
  if (runs < 1) {
    throw InvalidInput("experiment needs runs >= 1");
  }
  if (replicates < 1) {
    throw InvalidInput("experiment needs at least one bootstrap replicate");
  }
  if (sizes.empty()) {
    throw InvalidInput("experiment needs at least one sample-size pair");
  }
  if (means.empty()) {
    throw InvalidInput("experiment needs a mean family");
  }
  for (const auto& fg : means) {
    if (fg.parameters.empty()) {
      throw InvalidInput(fmt::format("parameter grid for {} is empty", to_string(fg.family)));
    }
  }
  if (alphas.empty()) {
    throw InvalidInput("experiment needs at least one alpha");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw InvalidInput(fmt::format("alpha must lie in (0, 1), got {}", a));
    }
  }
  if (!(delta >= 0.0)) {
    throw InvalidInput("delta must be >= 0");
  }
  for (const auto& s : sizes) {
    if (is_two_sample(procedure)) {
      if (s.m < 2 || s.n < 2 || block_x < 1 || block_x > s.m || block_y < 1 || block_y > s.n) {
        throw InvalidInput(fmt::format("invalid two-sample sizes/blocks (m={}, n={}, l1={}, l2={})",
                                       s.m, s.n, block_x, block_y));
      }
    } else if (s.n < 2 || block < 1 || block > s.n) {
      throw InvalidInput(fmt::format("invalid change-point size/block (n={}, l={})", s.n, block));
    }
  }
  if (!is_two_sample(procedure) && !(vartheta > 0.0 && vartheta < 0.5)) {
    throw InvalidInput("vartheta must lie in (0, 1/2)");
  }
  if (!(change_fraction > 0.0 && change_fraction < 1.0)) {
    throw InvalidInput("change fraction must lie in (0, 1)");
  }
  if (c_const && !(*c_const > 0.0)) {
    throw InvalidInput("extremal-set constant must be > 0");
  }
  if (grid_size < 2) {
    throw InvalidInput("grid needs at least 2 points");
  }
  if (dimension < 4 || !(kappa >= 0.0 && kappa < 1.0) || burn_in < 0) {
    throw InvalidInput("invalid process parameters (dimension >= 4, 0 <= kappa < 1, burn_in >= 0)");
  }
}

ExperimentSpec builtin_study(Study study) {
  ExperimentSpec spec;
  spec.study = study;
  const std::vector<SampleSizes> band_sizes{{50, 100}, {100, 100}, {100, 200}};
  switch (study) {
    case Study::kTable1:
      spec.procedure = Procedure::kClassical2S;
      spec.process = ProcessKind::kFar1Bridge;
      spec.sizes = {{100, 200}};
      spec.means = {{MeanFamily::kMeanClass1, {0.0, 0.4, 0.6, 0.8}},
                    {MeanFamily::kMeanClass2, {2, 3, 4, 5}}};
      break;
    case Study::kTable2:
      spec.procedure = Procedure::kRelevant2S;
      spec.sizes = band_sizes;
      spec.means = {{MeanFamily::kRelex1, {0.1}}, {MeanFamily::kRelex2, {0.1}}};
      spec.delta = 0.1;
      break;
    case Study::kTable3:
      spec.procedure = Procedure::kBand2S;
      spec.sizes = band_sizes;
      spec.means = {{MeanFamily::kRelex1, {0.1}}, {MeanFamily::kRelex2, {0.1}}};
      break;
    case Study::kTable4: {
      spec.procedure = Procedure::kRelevantCp;
      spec.sizes = {{0, 100}, {0, 200}, {0, 500}};
      const std::vector<double> grid{0.37, 0.38, 0.39, 0.4, 0.41, 0.42, 0.43};
      spec.means = {{MeanFamily::kRelex1, grid}, {MeanFamily::kRelex2, grid}};
      spec.delta = 0.4;
      break;
    }
    case Study::kFig1: {
      spec.procedure = Procedure::kRelevant2S;
      spec.sizes = {{50, 100}, {100, 200}};
      const std::vector<double> grid{0.0, 0.025, 0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2, 0.25};
      spec.means = {{MeanFamily::kRelex1, grid}, {MeanFamily::kRelex2, grid}};
      spec.delta = 0.1;
      spec.alphas = {0.05, 0.10};
      break;
    }
    case Study::kCustom:
      spec.sizes = {{100, 200}};
      spec.means = {{MeanFamily::kRelex1, {0.1}}};
      spec.delta = 0.1;
      break;
  }
  return spec;
}

std::string_view ResultTable::metric() const {
  return spec.procedure == Procedure::kBand2S ? "coverage" : "rejection_rate";
}

ResultTable run_study(const ExperimentSpec& spec) {
  spec.validate();
  const auto study_start = std::chrono::steady_clock::now();
  const Grid grid = Grid::uniform(spec.grid_size);
  const BSplineBasis basis = BSplineBasis::clamped_uniform(spec.dimension, 3, grid);
  const std::vector<Scenario> scenarios = build_scenarios(spec, grid);
  const std::vector<double> sigmas = default_sigmas(spec.dimension);

  std::optional<RowMatrix> fixed_psi;
  if (spec.psi_policy == PsiPolicy::kFixed && spec.process != ProcessKind::kFar1Bridge) {
    fixed_psi = make_psi(spec.dimension, sigmas, RngSpec{spec.master_seed, kFixedPsiStream}.child(1));
  }

  ResultTable table{spec, {}, 0.0};
  const std::size_t n_alpha = spec.alphas.size();
  for (const auto& sizes : spec.sizes) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Outcome> outcomes(spec.runs);
    parallel_for(spec.runs, spec.threads, [&](std::size_t i) {
      const RngSpec rep{spec.master_seed, i};
      try {
        FtsConfig process;
        process.kind = spec.process;
        process.dimension = spec.dimension;
        process.kappa = spec.kappa;
        process.sigmas = sigmas;
        process.burn_in = spec.burn_in;
        if (spec.process != ProcessKind::kFar1Bridge) {
          process.psi = fixed_psi ? *fixed_psi : make_psi(spec.dimension, sigmas, rep.child(1));
        }
        outcomes[i] = is_two_sample(spec.procedure)
                          ? run_two_sample(spec, sizes, process, basis, scenarios, rep)
                          : run_change_point(spec, sizes, process, basis, scenarios, rep);
      } catch (const std::exception& e) {
        throw InternalError(fmt::format("replication {} failed (master_seed={}, stream_id={}): {}",
                                        i, rep.master_seed, rep.stream_id, e.what()));
      }
    });
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto runs = static_cast<double>(spec.runs);
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      for (std::size_t a = 0; a < n_alpha; ++a) {
        const std::size_t cell = s * n_alpha + a;
        double hits = 0.0;
        double widths = 0.0;
        for (const auto& o : outcomes) {
          hits += o.hit[cell];
          widths += o.half_width[cell];
        }
        ResultRow row;
        row.family = scenarios[s].family;
        row.parameter = scenarios[s].parameter;
        row.d_infinity = scenarios[s].d_infinity;
        row.sizes = sizes;
        row.alpha = spec.alphas[a];
        row.rate = hits / runs;
        row.mc_se = std::sqrt(row.rate * (1.0 - row.rate) / runs);
        if (spec.procedure == Procedure::kBand2S) {
          row.mean_half_width = widths / runs;
        }
        row.runs = spec.runs;
        row.wall_seconds = seconds;
        table.rows.push_back(row);
      }
    }
  }
  table.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - study_start).count();
  return table;
}

ResultTable power_curve(const ExperimentSpec& spec) {
  if (spec.procedure != Procedure::kRelevant2S && spec.procedure != Procedure::kRelevantCp) {
    throw InvalidInput("power curves are defined for the relevant tests");
  }
  const Grid grid = Grid::uniform(spec.grid_size);
  for (const auto& fg : spec.means) {
    bool below = false;
    bool at = false;
    bool above = false;
    for (double p : fg.parameters) {
      const double d = sup_norm(eval_mean(MeanSpec::for_parameter(fg.family, p), grid));
      below |= d < spec.delta - 1e-12;
      at |= std::abs(d - spec.delta) <= 1e-12;
      above |= d > spec.delta + 1e-12;
    }
    if (!(below && at && above)) {
      throw InvalidInput(fmt::format(
          "power curve grid for {} must contain sup-norms below, at and above delta = {}",
          to_string(fg.family), spec.delta));
    }
  }
  return run_study(spec);
}

void write_result_csv(std::ostream& out, const ResultTable& table) {
  out << "study,procedure,family,parameter,d_infinity,m,n,alpha,metric,value,mc_se,mean_half_width,"
         "runs\n";
  for (const auto& row : table.rows) {
    out << to_string(table.spec.study) << ',' << to_string(table.spec.procedure) << ','
        << to_string(row.family) << ',' << format_double(row.parameter) << ','
        << format_double(row.d_infinity) << ',' << row.sizes.m << ',' << row.sizes.n << ','
        << format_double(row.alpha) << ',' << table.metric() << ',' << format_double(row.rate)
        << ',' << format_double(row.mc_se) << ','
        << (row.mean_half_width ? format_double(*row.mean_half_width) : std::string()) << ','
        << row.runs << '\n';
  }
}

void write_plot_csv(std::ostream& out, const ResultTable& table) {
  out << "family,m,n,alpha,d_infinity,rate\n";
  for (const auto& row : table.rows) {
    out << to_string(row.family) << ',' << row.sizes.m << ',' << row.sizes.n << ','
        << format_double(row.alpha) << ',' << format_double(row.d_infinity) << ','
        << format_double(row.rate) << '\n';
  }
}

void write_manifest(std::ostream& out, const ResultTable& table) {
  const ExperimentSpec& s = table.spec;
  nlohmann::json j;
  j["study"] = to_string(s.study);
  j["procedure"] = to_string(s.procedure);
  j["process"] = to_string(s.process);
  j["dimension"] = s.dimension;
  j["kappa"] = s.kappa;
  j["burn_in"] = s.burn_in;
  j["psi_policy"] = s.psi_policy == PsiPolicy::kPerRun ? "per_run" : "fixed";
  j["delta"] = s.delta;
  j["alphas"] = s.alphas;
  j["runs"] = s.runs;
  j["replicates"] = s.replicates;
  j["block"] = s.block;
  j["block_x"] = s.block_x;
  j["block_y"] = s.block_y;
  j["vartheta"] = s.vartheta;
  j["change_fraction"] = s.change_fraction;
  j["c_const"] = s.c_const ? nlohmann::json(*s.c_const) : nlohmann::json("default");
  j["grid_size"] = s.grid_size;
  j["master_seed"] = s.master_seed;
  j["replication_streams"] = fmt::format("stream_id = 0..{}", s.runs - 1);
  j["threads"] = s.threads == 0 ? default_thread_count() : s.threads;
  auto& sizes = j["sizes"] = nlohmann::json::array();
  for (const auto& sz : s.sizes) {
    sizes.push_back({{"m", sz.m}, {"n", sz.n}});
  }
  auto& means = j["means"] = nlohmann::json::array();
  for (const auto& fg : s.means) {
    means.push_back({{"family", to_string(fg.family)}, {"parameters", fg.parameters}});
  }
  auto& timing = j["timing_seconds"] = nlohmann::json::array();
  std::optional<std::pair<std::size_t, std::size_t>> last;
  for (const auto& row : table.rows) {
    const std::pair key{row.sizes.m, row.sizes.n};
    if (last != key) {
      timing.push_back({{"m", row.sizes.m}, {"n", row.sizes.n}, {"seconds", row.wall_seconds}});
      last = key;
    }
  }
  j["total_seconds"] = table.wall_seconds;
  out << j.dump(2) << '\n';
}

}  // namespace supnorm
