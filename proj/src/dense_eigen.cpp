#include "dense_eigen.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "steklov/sparse_lu.hpp"

namespace steklov::detail {

DenseSpectrum dense_shift_invert(const SpMat& a, const SpMat& b, cplx sigma) {
  const CMatrix shifted = CMatrix(a) + sigma * CMatrix(b);
  Eigen::FullPivLU<CMatrix> lu(shifted);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("dense_shift_invert: A + sigma B is singular");
  }
  const CMatrix op = lu.solve(CMatrix(b));
  Eigen::ComplexEigenSolver<CMatrix> eig(op);
  if (eig.info() != Eigen::Success) throw SolverError("dense_shift_invert: eigensolve failed");
  DenseSpectrum out;
  out.nu.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  out.vectors = eig.eigenvectors();
  return out;
}

}  // namespace steklov::detail
