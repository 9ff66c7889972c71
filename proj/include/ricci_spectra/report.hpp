#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "ricci_spectra/monotonicity.hpp"

namespace ricci {

inline constexpr std::array<std::string_view, 16> kCsvColumns = {
    "t",
    "lambda",
    "r_avg",
    "fd_dlambda",
    "rhs_thm1",
    "rhs_thm2",
    "rhs_thm3",
    "rhs_thm3_traceless",
    "extension_term",
    "eigen_identity_residual",
    "ibp14_residual",
    "ibp8_residual",
    "hessian10_residual",
    "soliton_residual",
    "volume",
    "min_conformal_factor",
};

std::string csv_header();

/// One row, 17 significant digits, empty cells for absent values.
std::string csv_row(const MonotonicityReport& r);

std::string format_value(double v);
std::string format_value(const std::optional<double>& v);

}  // namespace ricci
