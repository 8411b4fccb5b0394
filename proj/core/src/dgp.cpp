#include "supnorm/dgp.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "supnorm/csv.hpp"
#include "supnorm/error.hpp"

namespace supnorm {

namespace {

RowMatrix draw_coefficients(std::size_t n, std::span<const double> sigmas, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  const auto d = static_cast<Eigen::Index>(sigmas.size());
  RowMatrix coef(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index j = 0; j < coef.rows(); ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      coef(j, i) = sigmas[static_cast<std::size_t>(i)] * normal(engine);
    }
  }
  return coef;
}

void check_sigmas(std::span<const double> sigmas) {
  for (double s : sigmas) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InvalidInput("innovation standard deviations must be finite and non-negative");
    }
  }
}

// int_0^1 exp(s^2) ds
constexpr double kExpSquareIntegral = 1.4626517459071815;

bool uses_basis(ProcessKind kind) {
  return kind != ProcessKind::kFar1Bridge;
}

// Brownian bridge on the grid from G-1 independent increments.
void draw_bridge(std::span<const double> t, std::mt19937_64& engine, Eigen::Ref<Eigen::RowVectorXd> out) {
  std::normal_distribution<double> normal;
  out[0] = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out[k] = out[k - 1] + std::sqrt(t[i] - t[i - 1]) * normal(engine);
  }
  const double end = out[out.size() - 1];
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] -= t[i] * end;
  }
}

RowMatrix gen_bridge_far1(std::size_t n, const FtsConfig& cfg, const Grid& grid, const RngSpec& rng) {
  const auto g = static_cast<Eigen::Index>(grid.size());
  const auto t = grid.points();
  // psi(t, s) = c f(t) f(s) with f(t) = exp(t^2 / 2) is rank one: (Psi eta)(t) = c f(t) <f, eta>.
  Eigen::RowVectorXd f(g);
  Eigen::RowVectorXd weights(g);
  for (Eigen::Index i = 0; i < g; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    f[i] = std::exp(0.5 * ti * ti);
    const double left = i > 0 ? ti - t[static_cast<std::size_t>(i - 1)] : 0.0;
    const double right = i + 1 < g ? t[static_cast<std::size_t>(i + 1)] - ti : 0.0;
    weights[i] = 0.5 * (left + right);
  }
  const double c = cfg.kappa / kExpSquareIntegral;
  const Eigen::RowVectorXd project = (weights.array() * f.array()).matrix();

  Eigen::RowVectorXd state = Eigen::RowVectorXd::Zero(g);
  Eigen::RowVectorXd innovation(g);
  auto step = [&](std::mt19937_64& engine) {
    draw_bridge(t, engine, innovation);
    const double inner = project.dot(state);
    state = c * inner * f + innovation;
  };
  auto extra_engine = rng.child(1).engine();
  for (int b = 0; b < cfg.burn_in; ++b) {
    step(extra_engine);
  }
  auto engine = rng.engine();
  RowMatrix out(static_cast<Eigen::Index>(n), g);
  for (Eigen::Index j = 0; j < out.rows(); ++j) {
    step(engine);
    out.row(j) = state;
  }
  return out;
}

}  // namespace

std::string_view to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::kFma1: return "fma1";
    case ProcessKind::kFar1: return "far1";
    case ProcessKind::kFar1Bridge: return "far1-bridge";
  }
  return "unknown";
}

ProcessKind parse_process_kind(std::string_view name) {
  if (name == "fma1") return ProcessKind::kFma1;
  if (name == "far1") return ProcessKind::kFar1;
  if (name == "far1-bridge") return ProcessKind::kFar1Bridge;
  throw InvalidInput(
      fmt::format("unknown process kind '{}' (expected fma1, far1 or far1-bridge)", name));
}

std::vector<double> default_sigmas(int dimension) {
  std::vector<double> sigmas(static_cast<std::size_t>(std::max(dimension, 0)));
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    sigmas[i] = 1.0 / static_cast<double>(i + 1);
  }
  return sigmas;
}

double spectral_norm(const RowMatrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

RowMatrix make_psi(int dimension, std::span<const double> sigmas, const RngSpec& rng) {
  if (dimension < 1) {
    throw InvalidInput("Psi needs dimension >= 1");
  }
  if (sigmas.size() != static_cast<std::size_t>(dimension)) {
    throw InvalidInput(fmt::format("Psi: expected {} sigmas, got {}", dimension, sigmas.size()));
  }
  check_sigmas(sigmas);
  auto engine = rng.engine();
  std::normal_distribution<double> normal;
  RowMatrix psi(dimension, dimension);
  for (Eigen::Index i = 0; i < dimension; ++i) {
    for (Eigen::Index j = 0; j < dimension; ++j) {
      psi(i, j) = sigmas[static_cast<std::size_t>(i)] * sigmas[static_cast<std::size_t>(j)] *
                  normal(engine);
    }
  }
  const double norm = spectral_norm(psi);
  if (!(norm > 0.0)) {
    throw InvalidInput("Psi: drawn matrix is zero and cannot be normalised");
  }
  return psi / norm;
}

FtsConfig FtsConfig::standard(ProcessKind kind, int dimension, double kappa, const RngSpec& psi_rng) {
  FtsConfig cfg;
  cfg.kind = kind;
  cfg.dimension = dimension;
  cfg.kappa = kappa;
  cfg.sigmas = default_sigmas(dimension);
  if (uses_basis(kind)) {
    cfg.psi = make_psi(dimension, cfg.sigmas, psi_rng);
  }
  return cfg;
}

void FtsConfig::validate() const {
  if (!uses_basis(kind)) {
    if (!(kappa >= 0.0 && kappa < 1.0)) {
      throw InvalidInput(fmt::format("kappa must lie in [0, 1), got {}", kappa));
    }
    if (burn_in < 0) {
      throw InvalidInput("burn_in must be non-negative");
    }
    return;
  }
  if (dimension < 1) {
    throw InvalidInput("process dimension must be >= 1");
  }
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw InvalidInput(fmt::format("kappa must lie in [0, 1), got {}", kappa));
  }
  if (sigmas.size() != static_cast<std::size_t>(dimension)) {
    throw InvalidInput(fmt::format("expected {} sigmas, got {}", dimension, sigmas.size()));
  }
  check_sigmas(sigmas);
  if (psi.rows() != dimension || psi.cols() != dimension) {
    throw InvalidInput(fmt::format("Psi must be {0}x{0}", dimension));
  }
  if (!psi.allFinite() || std::abs(spectral_norm(psi) - 1.0) > 1e-9) {
    throw InvalidInput("Psi must have spectral norm 1");
  }
  if (burn_in < 0) {
    throw InvalidInput("burn_in must be non-negative");
  }
}

CurveSet gen_noise(std::size_t n, const BSplineBasis& basis, std::span<const double> sigmas,
                   const RngSpec& rng) {
  if (n < 1) {
    throw InvalidInput("gen_noise needs n >= 1");
  }
  if (sigmas.size() != static_cast<std::size_t>(basis.dimension())) {
    throw InvalidInput(fmt::format("gen_noise: basis has {} functions but {} sigmas given",
                                   basis.dimension(), sigmas.size()));
  }
  check_sigmas(sigmas);
  auto engine = rng.engine();
  const RowMatrix coef = draw_coefficients(n, sigmas, engine);
  return CurveSet(basis.grid(), coef * basis.values());
}

RowMatrix gen_series_coefficients(std::size_t n, const FtsConfig& cfg, const RngSpec& rng) {
  cfg.validate();
  if (!uses_basis(cfg.kind)) {
    throw InvalidInput(fmt::format("{} has no coefficient representation", to_string(cfg.kind)));
  }
  auto engine = rng.engine();
  const RowMatrix eps = draw_coefficients(n, cfg.sigmas, engine);
  auto extra_engine = rng.child(1).engine();
  // Row-vector convention: (Theta e)^T = e^T Theta^T.
  const RowMatrix theta_t = cfg.kappa * cfg.psi.transpose();

  RowMatrix eta(eps.rows(), eps.cols());
  if (cfg.kind == ProcessKind::kFma1) {
    const RowMatrix eps0 = draw_coefficients(1, cfg.sigmas, extra_engine);
    for (Eigen::Index j = 0; j < eps.rows(); ++j) {
      const auto prev = j == 0 ? eps0.row(0) : eps.row(j - 1);
      eta.row(j) = eps.row(j) + prev * theta_t;
    }
  } else {
    Eigen::RowVectorXd state = Eigen::RowVectorXd::Zero(cfg.dimension);
    if (cfg.burn_in > 0) {
      const RowMatrix warm =
          draw_coefficients(static_cast<std::size_t>(cfg.burn_in), cfg.sigmas, extra_engine);
      for (Eigen::Index b = 0; b < warm.rows(); ++b) {
        state = (state * theta_t + warm.row(b)).eval();
      }
    }
    for (Eigen::Index j = 0; j < eps.rows(); ++j) {
      state = (state * theta_t + eps.row(j)).eval();
      eta.row(j) = state;
    }
  }
  return eta;
}

RowMatrix gen_error_curves(std::size_t n, const FtsConfig& cfg, const BSplineBasis& basis,
                           const RngSpec& rng) {
  if (!uses_basis(cfg.kind)) {
    cfg.validate();
    return gen_bridge_far1(n, cfg, basis.grid(), rng);
  }
  if (basis.dimension() != cfg.dimension) {
    throw InvalidInput("basis dimension does not match the process dimension");
  }
  return gen_series_coefficients(n, cfg, rng) * basis.values();
}

CurveSet gen_series(std::size_t n, const FtsConfig& cfg, const BSplineBasis& basis,
                    const CurveSet& means, const RngSpec& rng) {
  if (n < 1) {
    throw InvalidInput("gen_series needs n >= 1");
  }
  if (means.count() != n) {
    throw InvalidInput(
        fmt::format("gen_series: mean schedule has {} curves, expected {}", means.count(), n));
  }
  require_same_grid(basis.grid(), means.grid(), "gen_series");
  return CurveSet(basis.grid(), means.rows() + gen_error_curves(n, cfg, basis, rng));
}

CurveSet constant_schedule(const Curve& mean, std::size_t n) {
  if (n < 1) {
    throw InvalidInput("schedule needs n >= 1");
  }
  RowMatrix rows = mean.values().transpose().replicate(static_cast<Eigen::Index>(n), 1);
  return CurveSet(mean.grid(), std::move(rows));
}

CurveSet step_schedule(const Curve& before, const Curve& after, std::size_t n,
                       double change_fraction) {
  require_same_grid(before.grid(), after.grid(), "step_schedule");
  if (n < 1 || !(change_fraction >= 0.0 && change_fraction <= 1.0)) {
    throw InvalidInput("step schedule needs n >= 1 and a change fraction in [0,1]");
  }
  const auto split = static_cast<Eigen::Index>(floor_index(change_fraction, n));
  RowMatrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(before.size()));
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    rows.row(j) = (j < split ? before : after).values().transpose();
  }
  return CurveSet(before.grid(), std::move(rows));
}

void write_config_text(std::ostream& out, const FtsConfig& cfg) {
  out << "kind=" << to_string(cfg.kind) << '\n';
  out << "dimension=" << cfg.dimension << '\n';
  out << "kappa=" << format_double(cfg.kappa) << '\n';
  out << "sigmas=";
  for (std::size_t i = 0; i < cfg.sigmas.size(); ++i) {
    out << (i ? ";" : "") << format_double(cfg.sigmas[i]);
  }
  out << '\n';
  out << "burn_in=" << cfg.burn_in << '\n';
}

FtsConfig read_config_text(std::istream& in) {
  std::map<std::string, std::string, std::less<>> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(fmt::format("config line without '=': {}", line));
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  FtsConfig cfg;
  if (auto it = kv.find("kind"); it != kv.end()) cfg.kind = parse_process_kind(it->second);
  if (auto it = kv.find("dimension"); it != kv.end()) {
    cfg.dimension = static_cast<int>(parse_double(it->second));
  }
  if (auto it = kv.find("kappa"); it != kv.end()) cfg.kappa = parse_double(it->second);
  if (auto it = kv.find("burn_in"); it != kv.end()) {
    cfg.burn_in = static_cast<int>(parse_double(it->second));
  }
  if (auto it = kv.find("sigmas"); it != kv.end() && !it->second.empty()) {
    std::stringstream ss(it->second);
    std::string cell;
    while (std::getline(ss, cell, ';')) {
      cfg.sigmas.push_back(parse_double(cell));
    }
  } else {
    cfg.sigmas = default_sigmas(cfg.dimension);
  }
  return cfg;
}

void write_psi_csv(std::ostream& out, const RowMatrix& psi) {
  for (Eigen::Index i = 0; i < psi.rows(); ++i) {
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
      out << (j ? "," : "") << format_double(psi(i, j));
    }
    out << '\n';
  }
}

RowMatrix read_psi_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split_csv_line(line)) {
      row.push_back(parse_double(cell));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InvalidInput("Psi CSV is empty");
  }
  RowMatrix psi(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw InvalidInput("Psi CSV rows have different lengths");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return psi;
}

}  // namespace supnorm
