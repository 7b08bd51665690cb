#pragma once

#include "steklov/types.hpp"

namespace steklov {

class SingularMatrixError : public SolverError {
public:
  using SolverError::SolverError;
};

/// Sparse direct LU factorization of a complex square matrix (UMFPACK, with
/// its fill-reducing ordering and one step of iterative refinement).
class SparseLU {
public:
  /// Factorizes `a`. Throws SingularMatrixError when the factorization is
  /// singular or the reciprocal condition estimate is below `min_rcond`.
  explicit SparseLU(const SpMat& a, double min_rcond = 1e-14);
  ~SparseLU();
  SparseLU(const SparseLU&) = delete;
  SparseLU& operator=(const SparseLU&) = delete;
  SparseLU(SparseLU&& other) noexcept;
  SparseLU& operator=(SparseLU&& other) noexcept;

  int size() const { return static_cast<int>(matrix_.rows()); }
  /// UMFPACK's cheap estimate min|U_ii| / max|U_ii|.
  double rcond() const { return rcond_; }

  CVector solve(const CVector& b) const;
  /// Solves A^H x = b.
  CVector solve_adjoint(const CVector& b) const;

private:
  CVector solve_system(int sys, const CVector& b) const;
  void release() noexcept;

  SpMat matrix_;
  void* numeric_ = nullptr;
  double rcond_ = 0.0;
};

}  // namespace steklov
