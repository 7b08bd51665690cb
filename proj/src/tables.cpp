#include "steklov/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace steklov {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  // "-0.000" -> "0.000"
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_sci(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, value);
  return buf;
}

int eigen_decimals(bool complex_n) { return complex_n ? 6 : 7; }

void write_eigen_csv(std::ostream& out, const UniformStudy& study) {
  const int d = eigen_decimals(study.complex_n());
  out << "dof,j,re,im,residual\n";
  for (const auto& level : study.levels) {
    for (std::size_t j = 0; j < level.lambdas.size(); ++j) {
      out << level.dof << ',' << j + 1 << ',' << format_fixed(level.lambdas[j].real(), d) << ','
          << format_fixed(level.lambdas[j].imag(), d) << ','
          << format_sci(level.residuals[j], 2) << '\n';
    }
  }
}

void write_error_csv(std::ostream& out, const UniformStudy& study,
                     const std::vector<cplx>& reference) {
  out << "dof,h,j,error\n";
  for (const auto& level : study.levels) {
    const std::size_t count = std::min(level.lambdas.size(), reference.size());
    for (std::size_t j = 0; j < count; ++j) {
      out << level.dof << ',' << format_sci(level.h, 6) << ',' << j + 1 << ','
          << format_sci(std::abs(level.lambdas[j] - reference[j]), 6) << '\n';
    }
  }
}

void write_adapt_csv(std::ostream& out, const AdaptRun& run) {
  const int d = eigen_decimals(run.config.n.imag() != 0.0);
  out << "level,dof,re,im,eta2,eta2_primal,eta2_dual,marked\n";
  for (const auto& r : run.records) {
    out << r.level << ',' << r.dof << ',' << format_fixed(r.lambda.real(), d) << ','
        << format_fixed(r.lambda.imag(), d) << ',' << format_sci(r.eta2, 6) << ','
        << format_sci(r.eta2_primal, 6) << ',' << format_sci(r.eta2_dual, 6) << ',' << r.marked
        << '\n';
  }
}

}  // namespace steklov
