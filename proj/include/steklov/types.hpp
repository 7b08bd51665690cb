#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace steklov {

using cplx = std::complex<double>;
using Point = Eigen::Vector2d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

/// Scalar field on the domain, e.g. a volume load or a refraction index.
using DomainFunction = std::function<cplx(const Point&)>;

/// Boundary datum evaluated at a point with the outward unit normal there.
using BoundaryFunction = std::function<cplx(const Point& x, const Point& normal)>;

class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class AssemblyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace steklov
