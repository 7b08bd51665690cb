#pragma once

// Internal: restarted Krylov-Schur iteration for the dominant eigenvalues of
// a general complex linear operator, with Schur-vector deflation passes so
// that multiple eigenvalues are found with their full multiplicity.

#include <cstdint>
#include <functional>
#include <vector>

#include "steklov/types.hpp"

namespace steklov::detail {

using LinearOperator = std::function<void(const CVector& in, CVector& out)>;

struct KrylovOptions {
  int nev = 6;
  int ncv = 0;  // 0: automatic
  double tol = 1e-11;
  int max_restarts = 300;
  int max_passes = 4;
  int check_count = 4;
  std::uint64_t seed = 20240917;
};

struct KrylovResult {
  std::vector<cplx> values;  // sorted by decreasing modulus
  CMatrix vectors;           // unit 2-norm columns
  std::vector<double> residuals;  // ||op x - nu x||
  int restarts = 0;
  int applications = 0;
};

class KrylovConvergenceError : public SolverError {
public:
  KrylovConvergenceError(const std::string& what, KrylovResult partial)
      : SolverError(what), partial_(std::move(partial)) {}
  const KrylovResult& partial() const { return partial_; }

private:
  KrylovResult partial_;
};

/// Dominant (largest-modulus) eigenpairs of `op` acting on C^n.
KrylovResult krylov_schur(const LinearOperator& op, int n, const KrylovOptions& options);

}  // namespace steklov::detail
