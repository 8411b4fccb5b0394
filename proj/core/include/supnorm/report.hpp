#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "supnorm/bootstrap.hpp"
#include "supnorm/change_point.hpp"
#include "supnorm/two_sample.hpp"

namespace supnorm {

// Serialisation of results. Text reports are one `key=value` per line; all
// floating-point values carry 17 significant digits.

void write_report_text(std::ostream& out, const TestReport& r);
void write_report_csv(std::ostream& out, const TestReport& r);

/// Scalars as text; the curves as CSV with columns t,center,lower,upper.
void write_band_text(std::ostream& out, const Band& b);
void write_band_csv(std::ostream& out, const Band& b);

/// Includes the embedded TestReport and, for the relevant test, the extremal
/// masks as 0/1 strings.
void write_cp_text(std::ostream& out, const CpResult& r);
void write_cp_csv(std::ostream& out, const CpResult& r);

std::string mask_string(const std::vector<std::uint8_t>& mask);

}  // namespace supnorm
