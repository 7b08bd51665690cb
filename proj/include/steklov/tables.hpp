#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "steklov/adaptivity.hpp"
#include "steklov/studies.hpp"

namespace steklov {

/// Fixed-point text with `decimals` digits after the point; negative zero is
/// printed as zero so that output is reproducible.
std::string format_fixed(double value, int decimals);
std::string format_sci(double value, int digits);

/// Digits after the point used for eigenvalues: 7 for real n, 6 for complex n.
int eigen_decimals(bool complex_n);

/// "dof,j,re,im,residual": one row per level and eigenvalue (j is 1-based).
void write_eigen_csv(std::ostream& out, const UniformStudy& study);

/// "dof,h,j,error": |lambda_j,h - reference_j| for log-log plots.
void write_error_csv(std::ostream& out, const UniformStudy& study,
                     const std::vector<cplx>& reference);

/// "level,dof,re,im,eta2,eta2_primal,eta2_dual,marked".
void write_adapt_csv(std::ostream& out, const AdaptRun& run);

}  // namespace steklov
