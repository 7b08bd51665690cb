#pragma once

// Internal: dense shift-invert eigensolve for small pencils.

#include <vector>

#include "steklov/types.hpp"

namespace steklov::detail {

struct DenseSpectrum {
  std::vector<cplx> nu;  // eigenvalues of (A + sigma B)^{-1} B
  CMatrix vectors;
};

/// All eigenpairs of (A + sigma B)^{-1} B. Throws SolverError when
/// A + sigma B is numerically singular.
DenseSpectrum dense_shift_invert(const SpMat& a, const SpMat& b, cplx sigma);

}  // namespace steklov::detail
