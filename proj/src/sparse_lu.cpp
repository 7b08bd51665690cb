#include "steklov/sparse_lu.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <suitesparse/umfpack.h>

namespace steklov {

namespace {

const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

}  // namespace

SparseLU::SparseLU(const SpMat& a, double min_rcond) : matrix_(a) {
  if (matrix_.rows() != matrix_.cols()) throw SolverError("SparseLU: matrix is not square");
  matrix_.makeCompressed();
  const int n = static_cast<int>(matrix_.rows());
  if (n == 0) return;

  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  void* symbolic = nullptr;
  int status = umfpack_zi_symbolic(n, n, matrix_.outerIndexPtr(), matrix_.innerIndexPtr(),
                                   raw(matrix_.valuePtr()), nullptr, &symbolic, control, info);
  if (status != UMFPACK_OK) {
    throw SolverError("SparseLU: symbolic analysis failed (status " + std::to_string(status) + ")");
  }
  status = umfpack_zi_numeric(matrix_.outerIndexPtr(), matrix_.innerIndexPtr(),
                              raw(matrix_.valuePtr()), nullptr, symbolic, &numeric_, control, info);
  umfpack_zi_free_symbolic(&symbolic);
  rcond_ = info[UMFPACK_RCOND];
  if (status == UMFPACK_WARNING_singular_matrix || !(rcond_ >= min_rcond)) {
    release();
    throw SingularMatrixError("SparseLU: matrix is singular or nearly singular (rcond estimate " +
                              std::to_string(rcond_) + ")");
  }
  if (status != UMFPACK_OK) {
    release();
    throw SolverError("SparseLU: numeric factorization failed (status " + std::to_string(status) +
                      ")");
  }
}

SparseLU::~SparseLU() { release(); }

SparseLU::SparseLU(SparseLU&& other) noexcept
    : matrix_(std::move(other.matrix_)), numeric_(std::exchange(other.numeric_, nullptr)),
      rcond_(other.rcond_) {}

SparseLU& SparseLU::operator=(SparseLU&& other) noexcept {
  if (this != &other) {
    release();
    matrix_ = std::move(other.matrix_);
    numeric_ = std::exchange(other.numeric_, nullptr);
    rcond_ = other.rcond_;
  }
  return *this;
}

void SparseLU::release() noexcept {
  if (numeric_ != nullptr) umfpack_zi_free_numeric(&numeric_);
  numeric_ = nullptr;
}

CVector SparseLU::solve(const CVector& b) const { return solve_system(UMFPACK_A, b); }

CVector SparseLU::solve_adjoint(const CVector& b) const { return solve_system(UMFPACK_At, b); }

CVector SparseLU::solve_system(int sys, const CVector& b) const {
  if (b.size() != matrix_.rows()) throw SolverError("SparseLU: right-hand side size mismatch");
  CVector x = CVector::Zero(b.size());
  if (b.size() == 0) return x;
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  control[UMFPACK_IRSTEP] = 1;
  const int status = umfpack_zi_solve(sys, matrix_.outerIndexPtr(), matrix_.innerIndexPtr(),
                                      raw(matrix_.valuePtr()), nullptr, raw(x.data()), nullptr,
                                      raw(b.data()), nullptr, numeric_, control, info);
  if (status != UMFPACK_OK) {
    throw SolverError("SparseLU: solve failed (status " + std::to_string(status) + ")");
  }
  return x;
}

}  // namespace steklov
