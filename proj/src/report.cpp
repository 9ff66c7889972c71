#include "ricci_spectra/report.hpp"

#include <cstdio>

namespace ricci {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_value(const std::optional<double>& v) { return v ? format_value(*v) : std::string(); }

std::string csv_header() {
  std::string out;
  for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
    if (k) out += ',';
    out += kCsvColumns[k];
  }
  return out;
}

std::string csv_row(const MonotonicityReport& r) {
  const std::optional<double> cells[] = {
      r.t,
      r.lambda,
      r.r_avg,
      r.fd_dlambda,
      r.rhs_thm1,
      r.rhs_thm2,
      r.rhs_thm3,
      r.rhs_thm3_traceless,
      r.extension_term,
      r.eigen_identity_residual,
      r.ibp14_residual,
      r.ibp8_residual,
      r.hessian10_residual,
      r.soliton_residual,
      r.volume,
      r.min_conformal_factor,
  };
  static_assert(std::size(cells) == kCsvColumns.size());
  std::string out;
  for (std::size_t k = 0; k < std::size(cells); ++k) {
    if (k) out += ',';
    out += format_value(cells[k]);
  }
  return out;
}

}  // namespace ricci
