#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "steklov/mesh.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/types.hpp"

namespace steklov {

/// Crouzeix-Raviart P1 space: one degree of freedom per edge, the value at
/// the edge midpoint. Dof numbering coincides with edge numbering. The local
/// basis on a cell is phi_i = 1 - 2 * lambda_i, where lambda_i is the
/// barycentric coordinate of local vertex i; phi_i equals 1 on the edge
/// opposite vertex i.
class CRSpace {
public:
  explicit CRSpace(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int n_dof() const { return mesh_->num_edges(); }
  int dof_of_edge(int e) const { return e; }
  const std::array<int, 3>& cell_dofs(int c) const { return mesh_->cell_edges()[c]; }
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }

  double area(int c) const { return area_[c]; }
  /// Gradients of the barycentric coordinates on cell c.
  const std::array<Point, 3>& grad_lambda(int c) const { return grad_lambda_[c]; }

  /// Barycentric coordinates of x with respect to cell c.
  std::array<double, 3> barycentric(int c, const Point& x) const;
  Point point(int c, const std::array<double, 3>& bary) const;

  /// Value of the discrete function at a point of cell c.
  cplx value(const CVector& coeffs, int c, const std::array<double, 3>& bary) const;
  /// Cellwise constant gradient of the discrete function.
  Eigen::Vector2cd gradient(const CVector& coeffs, int c) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<int> boundary_dofs_;
  std::vector<double> area_;
  std::vector<std::array<Point, 3>> grad_lambda_;
};

CRSpace build_space(std::shared_ptr<const Mesh> mesh);
CRSpace build_space(Mesh mesh);

/// Index of refraction n(x) = n1(x) + i n2(x)/k: a complex constant or a
/// function sampled at quadrature points.
class Coefficient {
public:
  Coefficient(cplx constant) : value_(constant) {}  // NOLINT(google-explicit-constructor)
  Coefficient(double constant) : value_(cplx(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Coefficient(DomainFunction f) : value_(std::move(f)) {}

  bool is_constant() const { return std::holds_alternative<cplx>(value_); }
  cplx operator()(const Point& x) const;
  /// Re n > 0 and Im n >= 0 at x. Violations are reported, not rejected.
  bool physical_at(const Point& x) const;

private:
  std::variant<cplx, DomainFunction> value_;
};

/// Complex sparse matrix with a complex-symmetry flag (A^T == A, not Hermitian).
struct SparseOperator {
  SpMat matrix;
  bool symmetric = false;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

/// Entry-wise test of A^T == A.
bool is_complex_symmetric(const SpMat& a, double tol = 0.0);

/// Coordinate text export: one "row col re im" line per stored entry.
void write_coordinate(std::ostream& out, const SparseOperator& op);

/// K_ij = sum_k int_k grad phi_j . grad phi_i. Throws AssemblyError naming a
/// degenerate cell.
SparseOperator assemble_stiffness(const CRSpace& space);

/// M_ij = int n phi_j phi_i. The edge-midpoint rule is exact for constant n;
/// `rule` overrides the quadrature for variable n.
SparseOperator assemble_volume_mass(const CRSpace& space, const Coefficient& n,
                                    const std::optional<TriangleRule>& rule = std::nullopt);

/// B_ij = int_{boundary} phi_j phi_i ds, by 2-point Gauss per edge.
SparseOperator assemble_boundary_mass(const CRSpace& space);

/// b_i = int_{boundary} f phi_i ds with an n-point Gauss rule per edge.
CVector assemble_boundary_load(const CRSpace& space, const BoundaryFunction& f,
                               int gauss_points = 2);

/// b_i = int_Omega zeta phi_i dx.
CVector assemble_volume_load(const CRSpace& space, const DomainFunction& zeta,
                             const TriangleRule& rule = edge_midpoint_rule());

/// A = K - k^2 M_n, the matrix of a_h(u, v).
SparseOperator assemble_helmholtz(const CRSpace& space, const Coefficient& n, double k);

/// Trace of a discrete function on the boundary: for each boundary edge the
/// values of the adjacent cell's affine function at the two edge endpoints
/// (in the order of mesh.edges()).
struct BoundaryTrace {
  std::vector<int> edges;
  std::vector<std::array<cplx, 2>> values;
};

BoundaryTrace boundary_trace(const CRSpace& space, const CVector& coeffs);

/// <u, g> = int u conj(g) ds for a piecewise-affine trace u, using the same
/// 2-point Gauss rule as the boundary loads.
cplx boundary_inner(const CRSpace& space, const BoundaryTrace& u, const BoundaryFunction& g);

/// Load vector int u phi_i ds for a piecewise-affine boundary trace.
CVector trace_load(const CRSpace& space, const BoundaryTrace& trace);

}  // namespace steklov
