#include <cmath>
#include <ostream>
#include <sstream>

#include "steklov/cr_space.hpp"

namespace steklov {

namespace {

using Triplet = Eigen::Triplet<cplx, int>;

SparseOperator from_triplets(int n, const std::vector<Triplet>& triplets) {
  SparseOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  op.symmetric = true;
  return op;
}

// Barycentric coordinates of the point (1-s)*a + s*b on boundary edge e of
// its cell c, where (a, b) = mesh.edges()[e].
std::array<double, 3> edge_point(const Mesh& mesh, int c, int e, double s) {
  std::array<double, 3> bary{0.0, 0.0, 0.0};
  const Cell& v = mesh.cells()[c];
  for (int j = 0; j < 3; ++j) {
    if (v[j] == mesh.edges()[e][0]) bary[j] = 1.0 - s;
    if (v[j] == mesh.edges()[e][1]) bary[j] = s;
  }
  return bary;
}

Point outward_normal(const Mesh& mesh, int c, int e) {
  const Point& a = mesh.vertices()[mesh.edges()[e][0]];
  const Point& b = mesh.vertices()[mesh.edges()[e][1]];
  const Point t = (b - a).normalized();
  Point n(t.y(), -t.x());
  const Point& opposite = mesh.vertices()[mesh.cells()[c][mesh.local_edge_index(c, e)]];
  if (n.dot(0.5 * (a + b) - opposite) < 0.0) n = -n;
  return n;
}

}  // namespace

CRSpace::CRSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  const Mesh& m = *mesh_;
  area_.resize(m.num_cells());
  grad_lambda_.resize(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const Cell& v = m.cells()[c];
    const double a = m.cell_area(c);
    area_[c] = a;
    for (int i = 0; i < 3; ++i) {
      const Point e = m.vertices()[v[(i + 2) % 3]] - m.vertices()[v[(i + 1) % 3]];
      grad_lambda_[c][i] = Point(-e.y(), e.x()) / (2.0 * a);
    }
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.is_boundary_edge(e)) boundary_dofs_.push_back(dof_of_edge(e));
  }
}

std::array<double, 3> CRSpace::barycentric(int c, const Point& x) const {
  const Cell& v = mesh_->cells()[c];
  const Point centroid =
      (mesh_->vertices()[v[0]] + mesh_->vertices()[v[1]] + mesh_->vertices()[v[2]]) / 3.0;
  std::array<double, 3> bary{};
  for (int i = 0; i < 3; ++i) bary[i] = 1.0 / 3.0 + grad_lambda_[c][i].dot(x - centroid);
  return bary;
}

Point CRSpace::point(int c, const std::array<double, 3>& bary) const {
  const Cell& v = mesh_->cells()[c];
  return bary[0] * mesh_->vertices()[v[0]] + bary[1] * mesh_->vertices()[v[1]] +
         bary[2] * mesh_->vertices()[v[2]];
}

cplx CRSpace::value(const CVector& coeffs, int c, const std::array<double, 3>& bary) const {
  const auto& dofs = cell_dofs(c);
  cplx u = 0.0;
  for (int i = 0; i < 3; ++i) u += coeffs[dofs[i]] * (1.0 - 2.0 * bary[i]);
  return u;
}

Eigen::Vector2cd CRSpace::gradient(const CVector& coeffs, int c) const {
  const auto& dofs = cell_dofs(c);
  Eigen::Vector2cd g = Eigen::Vector2cd::Zero();
  for (int i = 0; i < 3; ++i) g -= 2.0 * coeffs[dofs[i]] * grad_lambda_[c][i].cast<cplx>();
  return g;
}

CRSpace build_space(std::shared_ptr<const Mesh> mesh) { return CRSpace(std::move(mesh)); }

CRSpace build_space(Mesh mesh) { return CRSpace(std::make_shared<const Mesh>(std::move(mesh))); }

cplx Coefficient::operator()(const Point& x) const {
  if (const auto* c = std::get_if<cplx>(&value_)) return *c;
  return std::get<DomainFunction>(value_)(x);
}

bool Coefficient::physical_at(const Point& x) const {
  const cplx n = (*this)(x);
  return n.real() > 0.0 && n.imag() >= 0.0;
}

bool is_complex_symmetric(const SpMat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const SpMat diff = SpMat(a.transpose()) - a;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SpMat::InnerIterator it(diff, k); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

void write_coordinate(std::ostream& out, const SparseOperator& op) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "%%MatrixMarket matrix coordinate complex general\n";
  buf << op.rows() << ' ' << op.cols() << ' ' << op.matrix.nonZeros() << '\n';
  for (int k = 0; k < op.matrix.outerSize(); ++k) {
    for (SpMat::InnerIterator it(op.matrix, k); it; ++it) {
      buf << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' '
          << it.value().imag() << '\n';
    }
  }
  out << buf.str();
}

SparseOperator assemble_stiffness(const CRSpace& space) {
  const Mesh& mesh = space.mesh();
  std::vector<Triplet> triplets;
  triplets.reserve(9 * static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double a = space.area(c);
    const double scale = mesh.cell_diameter(c);
    if (!(a > 1e-14 * scale * scale)) {
      throw AssemblyError("assemble_stiffness: degenerate cell " + std::to_string(c));
    }
    const auto& g = space.grad_lambda(c);
    const auto& dofs = space.cell_dofs(c);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(dofs[i], dofs[j], 4.0 * a * g[i].dot(g[j]));
      }
    }
  }
  return from_triplets(space.n_dof(), triplets);
}

SparseOperator assemble_volume_mass(const CRSpace& space, const Coefficient& n,
                                    const std::optional<TriangleRule>& rule) {
  const Mesh& mesh = space.mesh();
  const TriangleRule quad = (rule && !n.is_constant()) ? *rule : edge_midpoint_rule();
  std::vector<Triplet> triplets;
  triplets.reserve(9 * static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double a = space.area(c);
    const auto& dofs = space.cell_dofs(c);
    Eigen::Matrix3cd local = Eigen::Matrix3cd::Zero();
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const auto& bary = quad.points[q];
      const cplx w = a * quad.weights[q] * n(space.point(c, bary));
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          local(i, j) += w * (1.0 - 2.0 * bary[i]) * (1.0 - 2.0 * bary[j]);
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (local(i, j) != cplx(0.0)) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
      }
    }
  }
  return from_triplets(space.n_dof(), triplets);
}

SparseOperator assemble_boundary_mass(const CRSpace& space) {
  const Mesh& mesh = space.mesh();
  const LineRule gauss = gauss_legendre(2);
  std::vector<Triplet> triplets;
  for (int e : space.boundary_dofs()) {
    const int c = mesh.edge_cells()[e][0];
    const double len = mesh.edge_length(e);
    const auto& dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
      const auto bary = edge_point(mesh, c, e, gauss.nodes[q]);
      const double w = len * gauss.weights[q];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          triplets.emplace_back(dofs[i], dofs[j], w * (1.0 - 2.0 * bary[i]) * (1.0 - 2.0 * bary[j]));
        }
      }
    }
  }
  return from_triplets(space.n_dof(), triplets);
}

CVector assemble_boundary_load(const CRSpace& space, const BoundaryFunction& f, int gauss_points) {
  const Mesh& mesh = space.mesh();
  const LineRule gauss = gauss_legendre(gauss_points);
  CVector load = CVector::Zero(space.n_dof());
  for (int e : space.boundary_dofs()) {
    const int c = mesh.edge_cells()[e][0];
    const double len = mesh.edge_length(e);
    const Point normal = outward_normal(mesh, c, e);
    const auto& dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
      const auto bary = edge_point(mesh, c, e, gauss.nodes[q]);
      const cplx fw = len * gauss.weights[q] * f(space.point(c, bary), normal);
      for (int i = 0; i < 3; ++i) load[dofs[i]] += fw * (1.0 - 2.0 * bary[i]);
    }
  }
  return load;
}

CVector assemble_volume_load(const CRSpace& space, const DomainFunction& zeta,
                             const TriangleRule& rule) {
  const Mesh& mesh = space.mesh();
  CVector load = CVector::Zero(space.n_dof());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double a = space.area(c);
    const auto& dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& bary = rule.points[q];
      const cplx zw = a * rule.weights[q] * zeta(space.point(c, bary));
      for (int i = 0; i < 3; ++i) load[dofs[i]] += zw * (1.0 - 2.0 * bary[i]);
    }
  }
  return load;
}

SparseOperator assemble_helmholtz(const CRSpace& space, const Coefficient& n, double k) {
  if (!(k > 0.0)) throw AssemblyError("assemble_helmholtz: wavenumber must be positive");
  SparseOperator a = assemble_stiffness(space);
  const SparseOperator m = assemble_volume_mass(space, n);
  a.matrix = a.matrix - cplx(k * k) * m.matrix;
  a.matrix.makeCompressed();
  a.symmetric = true;
  return a;
}

BoundaryTrace boundary_trace(const CRSpace& space, const CVector& coeffs) {
  const Mesh& mesh = space.mesh();
  BoundaryTrace trace;
  trace.edges = space.boundary_dofs();
  trace.values.reserve(trace.edges.size());
  for (int e : trace.edges) {
    const int c = mesh.edge_cells()[e][0];
    trace.values.push_back({space.value(coeffs, c, edge_point(mesh, c, e, 0.0)),
                            space.value(coeffs, c, edge_point(mesh, c, e, 1.0))});
  }
  return trace;
}

cplx boundary_inner(const CRSpace& space, const BoundaryTrace& u, const BoundaryFunction& g) {
  const Mesh& mesh = space.mesh();
  const LineRule gauss = gauss_legendre(2);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < u.edges.size(); ++k) {
    const int e = u.edges[k];
    const int c = mesh.edge_cells()[e][0];
    const Point& a = mesh.vertices()[mesh.edges()[e][0]];
    const Point& b = mesh.vertices()[mesh.edges()[e][1]];
    const Point normal = outward_normal(mesh, c, e);
    const double len = (b - a).norm();
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
      const double s = gauss.nodes[q];
      const cplx us = (1.0 - s) * u.values[k][0] + s * u.values[k][1];
      sum += len * gauss.weights[q] * us * std::conj(g((1.0 - s) * a + s * b, normal));
    }
  }
  return sum;
}

CVector trace_load(const CRSpace& space, const BoundaryTrace& trace) {
  const Mesh& mesh = space.mesh();
  const LineRule gauss = gauss_legendre(2);
  CVector load = CVector::Zero(space.n_dof());
  for (std::size_t k = 0; k < trace.edges.size(); ++k) {
    const int e = trace.edges[k];
    const int c = mesh.edge_cells()[e][0];
    const double len = mesh.edge_length(e);
    const auto& dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
      const double s = gauss.nodes[q];
      const auto bary = edge_point(mesh, c, e, s);
      const cplx uw = len * gauss.weights[q] * ((1.0 - s) * trace.values[k][0] + s * trace.values[k][1]);
      for (int i = 0; i < 3; ++i) load[dofs[i]] += uw * (1.0 - 2.0 * bary[i]);
    }
  }
  return load;
}

}  // namespace steklov
