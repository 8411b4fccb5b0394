#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "supnorm/grid.hpp"

namespace supnorm {

/// Discrete observations of one unit (e.g. the daily values of one year).
/// Missing cells hold NaN and are flagged in `missing`.
struct RawUnit {
  std::string label;
  std::vector<double> values;
  std::vector<std::uint8_t> missing;

  std::size_t missing_count() const;
};

/// Units may have different numbers of observations (365 vs 366 days); each
/// unit's observations are placed at t_d = d / N, d = 0..N-1.
struct RawPanel {
  std::vector<RawUnit> units;
};

/// Share of missing cells above which a unit is rejected.
inline constexpr double kMaxMissingShare = 0.10;

/// CSV with one unit per line: label, then the observations in order. Blank
/// cells are missing. No header row.
RawPanel read_raw_panel_csv(std::istream& in);
RawPanel read_raw_panel_csv(const std::string& path);

/// Constant plus (n_basis - 1) / 2 sine/cosine pairs of period 1:
///   1, sqrt(2) sin(2 pi k t), sqrt(2) cos(2 pi k t), k = 1..(n_basis-1)/2.
struct FourierSpec {
  std::size_t n_basis = 49;  // odd

  void validate() const;
};

/// n_basis x points table of the basis functions.
RowMatrix fourier_design(const FourierSpec& spec, std::span<const double> points);

/// Least-squares fit of every unit onto the Fourier basis, evaluated on
/// `grid`. Throws IngestionError naming the unit when it has fewer than 2
/// observations, more than 10% missing, fewer observed cells than basis
/// functions, or a rank-deficient design.
CurveSet smooth_to_curves(const RawPanel& panel, const FourierSpec& spec, const Grid& grid);

}  // namespace supnorm
