#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "supnorm/bspline.hpp"
#include "supnorm/grid.hpp"
#include "supnorm/rng.hpp"

namespace supnorm {

/// kFma1 and kFar1 live on the B-spline space below. kFar1Bridge is a
/// grid-level fAR(1) driven by Brownian bridges:
///   eta_j(t) = int_0^1 psi(t, s) eta_{j-1}(s) ds + W_j(t),
///   psi(t, s) = c exp((t^2 + s^2) / 2),  c = kappa / int_0^1 exp(s^2) ds,
/// so the integral operator has norm kappa (c = 0.3418 for kappa = 0.5). The integral uses the trapezoidal
/// rule on the grid; dimension, sigmas and psi are not used.
enum class ProcessKind { kFma1, kFar1, kFar1Bridge };

std::string_view to_string(ProcessKind kind);
ProcessKind parse_process_kind(std::string_view name);

/// Functional MA(1) / AR(1) error process on a D-dimensional B-spline space.
///
/// Innovations are eps_j = sum_i N_ij nu_i with N_ij ~ N(0, sigma_i^2).
///   fMA(1): eta_j = eps_j + kappa Psi eps_{j-1}
///   fAR(1): eta_j = kappa Psi eta_{j-1} + eps_j, started at zero and run for
///           burn_in discarded steps.
struct FtsConfig {
  ProcessKind kind = ProcessKind::kFma1;
  int dimension = 21;
  double kappa = 0.5;
  std::vector<double> sigmas;  // sigma_i = 1/i by default
  RowMatrix psi;               // dimension x dimension, spectral norm 1
  int burn_in = 100;

  /// Default sigmas, with Psi drawn by make_psi from `psi_rng`.
  static FtsConfig standard(ProcessKind kind, int dimension, double kappa, const RngSpec& psi_rng);

  /// Throws InvalidInput if any invariant is violated.
  void validate() const;
};

/// sigma_i = 1/i, i = 1..dimension.
std::vector<double> default_sigmas(int dimension);

/// Largest singular value.
double spectral_norm(const RowMatrix& m);

/// Random coefficient operator: entries N(0, (sigma_i sigma_j)^2), then the
/// whole matrix divided by its spectral norm.
RowMatrix make_psi(int dimension, std::span<const double> sigmas, const RngSpec& rng);

/// n i.i.d. innovations on the basis grid. Draw order: row-major (curve j,
/// then coefficient i) from rng.engine().
CurveSet gen_noise(std::size_t n, const BSplineBasis& basis, std::span<const double> sigmas,
                   const RngSpec& rng);

/// n curves X_j = means[j] + eta_j. The n innovations eps_1..eps_n are drawn
/// exactly as gen_noise(n, ...) would draw them from `rng`; the extra
/// innovations (eps_0 for fMA(1), the burn-in for fAR(1)) come from
/// rng.child(1). With kappa = 0 the output is therefore means + gen_noise.
CurveSet gen_series(std::size_t n, const FtsConfig& cfg, const BSplineBasis& basis,
                    const CurveSet& means, const RngSpec& rng);

/// Error process only (zero means), in coefficient space: n x dimension.
/// Not defined for kFar1Bridge.
RowMatrix gen_series_coefficients(std::size_t n, const FtsConfig& cfg, const RngSpec& rng);

/// Error process only, on the grid of `basis`: n x G. Same draw order as
/// gen_series. For kFar1Bridge the bridges are drawn as G-1 normal increments
/// per curve (main curves from rng, burn-in from rng.child(1)).
RowMatrix gen_error_curves(std::size_t n, const FtsConfig& cfg, const BSplineBasis& basis,
                           const RngSpec& rng);

/// n copies of `mean`.
CurveSet constant_schedule(const Curve& mean, std::size_t n);

/// Rows 1..floor(n s*) equal `before`, the remaining rows equal `after`.
CurveSet step_schedule(const Curve& before, const Curve& after, std::size_t n, double change_fraction);

/// Plain-text key=value form of the scalar parameters. Psi is not included;
/// it is exchanged through write_psi_csv/read_psi_csv.
void write_config_text(std::ostream& out, const FtsConfig& cfg);
FtsConfig read_config_text(std::istream& in);

void write_psi_csv(std::ostream& out, const RowMatrix& psi);
RowMatrix read_psi_csv(std::istream& in);

}  // namespace supnorm
