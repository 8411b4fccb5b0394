#include "supnorm/report.hpp"

#include <cmath>
#include <ostream>

#include "supnorm/csv.hpp"

namespace supnorm {

namespace {

const char* bool_text(bool b) {
  return b ? "true" : "false";
}

}  // namespace

std::string mask_string(const std::vector<std::uint8_t>& mask) {
  std::string out;
  out.reserve(mask.size());
  for (auto b : mask) {
    out.push_back(b ? '1' : '0');
  }
  return out;
}

void write_report_text(std::ostream& out, const TestReport& r) {
  out << "test=" << r.test << '\n'
      << "statistic=" << format_double(r.statistic) << '\n'
      << "delta=" << format_double(r.delta) << '\n'
      << "alpha=" << format_double(r.alpha) << '\n'
      << "quantile=" << format_double(r.quantile) << '\n'
      << "scale=" << format_double(r.scale) << '\n'
      << "critical_value=" << format_double(r.delta + r.quantile / r.scale) << '\n'
      << "reject=" << bool_text(r.reject) << '\n'
      << "p_value=" << format_double(r.p_value) << '\n'
      << "replicates=" << r.boot_stats.size() << '\n'
      << "block_x=" << r.block_x << '\n'
      << "block_y=" << r.block_y << '\n'
      << "master_seed=" << r.rng.master_seed << '\n'
      << "stream_id=" << r.rng.stream_id << '\n'
      << "boot_stats=";
  for (std::size_t i = 0; i < r.boot_stats.size(); ++i) {
    out << (i ? ";" : "") << format_double(r.boot_stats[i]);
  }
  out << '\n';
}

void write_report_csv(std::ostream& out, const TestReport& r) {
  out << "test,statistic,delta,alpha,quantile,scale,reject,p_value,replicates,block_x,block_y,"
         "master_seed,stream_id\n";
  out << r.test << ',' << format_double(r.statistic) << ',' << format_double(r.delta) << ','
      << format_double(r.alpha) << ',' << format_double(r.quantile) << ',' << format_double(r.scale)
      << ',' << bool_text(r.reject) << ',' << format_double(r.p_value) << ',' << r.boot_stats.size()
      << ',' << r.block_x << ',' << r.block_y << ',' << r.rng.master_seed << ','
      << r.rng.stream_id << '\n';
}

void write_band_text(std::ostream& out, const Band& b) {
  const ArgMax peak = argmax_abs(b.center);
  out << "alpha=" << format_double(b.alpha) << '\n'
      << "half_width=" << format_double(b.half_width) << '\n'
      << "dhat=" << format_double(std::abs(peak.value)) << '\n'
      << "argmax_t=" << format_double(b.center.grid()[peak.index]) << '\n';
}

void write_band_csv(std::ostream& out, const Band& b) {
  out << "t,center,lower,upper\n";
  const auto points = b.center.grid().points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_double(points[i]) << ',' << format_double(b.center[i]) << ','
        << format_double(b.lower[i]) << ',' << format_double(b.upper[i]) << '\n';
  }
}

void write_cp_text(std::ostream& out, const CpResult& r) {
  out << "s_hat=" << format_double(r.s_hat) << '\n'
      << "split=" << r.split << '\n'
      << "m_stat=" << format_double(r.m_stat) << '\n'
      << "d_hat=" << format_double(r.d_hat) << '\n';
  if (r.sets) {
    out << "extremal_threshold=" << format_double(r.sets->threshold) << '\n'
        << "c_n=" << format_double(r.sets->c) << '\n'
        << "e_plus=" << mask_string(r.sets->plus) << '\n'
        << "e_minus=" << mask_string(r.sets->minus) << '\n';
  }
  write_report_text(out, r.report);
}

void write_cp_csv(std::ostream& out, const CpResult& r) {
  out << "test,s_hat,split,m_stat,d_hat,delta,alpha,quantile,reject,p_value,replicates,block,"
         "master_seed,stream_id,e_plus,e_minus\n";
  out << r.report.test << ',' << format_double(r.s_hat) << ',' << r.split << ','
      << format_double(r.m_stat) << ',' << format_double(r.d_hat) << ','
      << format_double(r.report.delta) << ',' << format_double(r.report.alpha) << ','
      << format_double(r.report.quantile) << ',' << bool_text(r.report.reject) << ','
      << format_double(r.report.p_value) << ',' << r.report.boot_stats.size() << ','
      << r.report.block_x << ',' << r.report.rng.master_seed << ',' << r.report.rng.stream_id << ','
      << (r.sets ? mask_string(r.sets->plus) : "") << ','
      << (r.sets ? mask_string(r.sets->minus) : "") << '\n';
}

}  // namespace supnorm
