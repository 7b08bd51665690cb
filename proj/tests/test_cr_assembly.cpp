#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "steklov/cr_space.hpp"
#include "steklov/quadrature.hpp"

using namespace steklov;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Coefficients of the CR interpolant of a + b.x: the value at each edge midpoint.
CVector affine_dofs(const CRSpace& space, const cplx& a, const Eigen::Vector2cd& b) {
  CVector x(space.n_dof());
  for (int e = 0; e < space.n_dof(); ++e) {
    const Point m = space.mesh().edge_midpoint(e);
    x(e) = a + b(0) * m.x() + b(1) * m.y();
  }
  return x;
}

// int over the boundary of u * conj(w) for affine u, w by Simpson's rule,
// which is exact for the quadratic integrand.
cplx boundary_integral(const Mesh& mesh, const std::function<cplx(const Point&)>& u,
                       const std::function<cplx(const Point&)>& w) {
  cplx sum = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e)) continue;
    const Point p = mesh.vertices()[mesh.edges()[e][0]];
    const Point q = mesh.vertices()[mesh.edges()[e][1]];
    const Point m = 0.5 * (p + q);
    auto f = [&](const Point& x) { return u(x) * std::conj(w(x)); };
    sum += (q - p).norm() / 6.0 * (f(p) + 4.0 * f(m) + f(q));
  }
  return sum;
}

std::shared_ptr<const Mesh> shared(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

}  // namespace

TEST_CASE("Gauss-Legendre integrates degree 2n-1 exactly") {
  for (int n = 1; n <= 6; ++n) {
    const LineRule r = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double sum = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::pow(r.nodes[i], d);
      CHECK(sum == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rules on the reference triangle") {
  // int_T x^a y^b = a! b! / (a + b + 2)!, and the rule weights sum to 1 on |T| = 1/2.
  auto check_rule = [](const TriangleRule& r, int degree) {
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < r.points.size(); ++i) {
          sum += 0.5 * r.weights[i] * std::pow(r.points[i][1], a) * std::pow(r.points[i][2], b);
        }
        CHECK(sum == doctest::Approx(factorial(a) * factorial(b) / factorial(a + b + 2)).epsilon(1e-13));
      }
    }
  };
  check_rule(edge_midpoint_rule(), 2);
  for (int n = 1; n <= 6; ++n) check_rule(conical_rule(n), 2 * n - 2);
}

TEST_CASE("local matrices on a single triangle") {
  const std::vector<Point> v{Point(0.3, -0.2), Point(1.1, 0.5), Point(-0.4, 0.9)};
  const CRSpace space(shared(Mesh(DomainKind::Square, v, {{0, 1, 2}})));
  Eigen::Matrix3d coords;
  for (int i = 0; i < 3; ++i) coords.col(i) << 1.0, v[i].x(), v[i].y();
  const double area = 0.5 * coords.determinant();
  const Eigen::Matrix3d g = coords.inverse();  // row i = (c_i, grad lambda_i)
  const CMatrix k(assemble_stiffness(space).matrix);
  const CMatrix m(assemble_volume_mass(space, cplx(2.0, 1.0)).matrix);
  const auto& dofs = space.cell_dofs(0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double kij = 4.0 * area * g.row(i).tail<2>().dot(g.row(j).tail<2>());
      CHECK(std::abs(k(dofs[i], dofs[j]) - kij) < 1e-13);
      const cplx mij = i == j ? cplx(2.0, 1.0) * area / 3.0 : 0.0;
      CHECK(std::abs(m(dofs[i], dofs[j]) - mij) < 1e-13);
    }
  }
}

TEST_CASE("bilinear forms reproduce integrals of affine functions") {
  const CRSpace space(shared(build_level(DomainKind::LShape, 3)));
  const Eigen::Vector2cd bu(cplx(0.7, 0.1), cplx(-1.2, 0.4));
  const Eigen::Vector2cd bw(cplx(0.3, -0.5), cplx(0.9, 0.0));
  const CVector u = affine_dofs(space, cplx(0.5, 0.2), bu);
  const CVector w = affine_dofs(space, cplx(-1.0, 0.3), bw);
  const double area = domain_area(DomainKind::LShape);

  SUBCASE("stiffness") {
    // Eigen's dot conjugates its left operand: area * conj(bw) . bu.
    const SpMat& k = assemble_stiffness(space).matrix;
    CHECK(std::abs(w.dot(k * u) - area * bw.dot(bu)) < 1e-12);
    CHECK((k * CVector::Ones(space.n_dof())).norm() < 1e-12);
  }
  SUBCASE("volume mass with constant n") {
    // Integral of n * (a + b.x) over the L-shape by its three unit squares.
    const cplx n(4.0, 4.0);
    const Point centroid(-1.0 / 6.0, 1.0 / 6.0);
    const cplx integral = area * (cplx(0.5, 0.2) + bu(0) * centroid.x() + bu(1) * centroid.y());
    const SpMat& m = assemble_volume_mass(space, n).matrix;
    CHECK(std::abs(CVector::Ones(space.n_dof()).dot(m * u) - n * integral) < 1e-12);
  }
  SUBCASE("boundary mass") {
    const SpMat& b = assemble_boundary_mass(space).matrix;
    const auto fu = [&](const Point& x) { return cplx(0.5, 0.2) + bu(0) * x.x() + bu(1) * x.y(); };
    const auto fw = [&](const Point& x) { return cplx(-1.0, 0.3) + bw(0) * x.x() + bw(1) * x.y(); };
    CHECK(std::abs(w.dot(b * u) - boundary_integral(space.mesh(), fu, fw)) < 1e-12);
    CHECK(std::abs(CVector::Ones(space.n_dof()).dot(b * CVector::Ones(space.n_dof())) - 8.0) < 1e-12);
    CHECK(std::abs(boundary_inner(space, boundary_trace(space, u), [&](const Point& x, const Point&) { return fw(x); }) -
                   boundary_integral(space.mesh(), fu, fw)) < 1e-12);
  }
}

TEST_CASE("variable coefficient assembly agrees with the constant path") {
  const CRSpace space(shared(build_level(DomainKind::Square, 4)));
  const SpMat c = assemble_volume_mass(space, cplx(3.0, 2.0)).matrix;
  const SpMat f = assemble_volume_mass(space, Coefficient([](const Point&) { return cplx(3.0, 2.0); }),
                                       conical_rule(3)).matrix;
  CHECK(CMatrix(c - f).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Helmholtz matrix is complex symmetric, not Hermitian") {
  const CRSpace space(shared(build_level(DomainKind::Square, 4)));
  const SparseOperator a = assemble_helmholtz(space, cplx(4.0, 4.0), 1.0);
  CHECK(a.symmetric);
  CHECK(is_complex_symmetric(a.matrix, 1e-14));
  const SpMat ah = a.matrix.adjoint();
  CHECK(CMatrix(a.matrix - ah).cwiseAbs().maxCoeff() > 1.0e-3);
  const SpMat expected = assemble_stiffness(space).matrix - assemble_volume_mass(space, cplx(4.0, 4.0)).matrix;
  CHECK(CMatrix(a.matrix - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("load vectors") {
  const CRSpace space(shared(build_level(DomainKind::SlitSquare, 4)));
  const CVector ones = CVector::Ones(space.n_dof());
  const CVector bl = assemble_boundary_load(space, [](const Point&, const Point&) { return cplx(2.0, -1.0); });
  CHECK(std::abs(ones.dot(bl) - cplx(2.0, -1.0) * domain_perimeter(DomainKind::SlitSquare)) < 1e-12);
  const CVector vl = assemble_volume_load(space, [](const Point& x) { return cplx(x.x(), 1.0); });
  // Integral of x vanishes by symmetry; integral of i is 2i.
  CHECK(std::abs(ones.dot(vl) - cplx(0.0, 2.0)) < 1e-12);
  // trace_load of the trace of u is B u.
  CVector u(space.n_dof());
  for (int i = 0; i < space.n_dof(); ++i) u(i) = cplx(std::sin(i), std::cos(3.0 * i));
  const CVector bu = assemble_boundary_mass(space).matrix * u;
  CHECK((trace_load(space, boundary_trace(space, u)) - bu).norm() < 1e-12);
}

TEST_CASE("coordinate export") {
  const CRSpace space(shared(build_level(DomainKind::Square, 2)));
  std::stringstream out;
  write_coordinate(out, assemble_boundary_mass(space));
  std::string header;
  std::getline(out, header);
  CHECK(header == "%%MatrixMarket matrix coordinate complex general");
  int rows = 0, cols = 0, nnz = 0;
  out >> rows >> cols >> nnz;
  CHECK(rows == space.n_dof());
  CHECK(cols == space.n_dof());
  CHECK(nnz > 0);
}

TEST_CASE("unit right triangle") {
  const std::vector<Point> v{Point(0, 0), Point(1, 0), Point(0, 1)};
  const CRSpace space(shared(Mesh(DomainKind::Square, v, {{0, 1, 2}})));
  const CMatrix k(assemble_stiffness(space).matrix);
  const CMatrix b(assemble_boundary_mass(space).matrix);
  const auto& d = space.cell_dofs(0);
  const double expected[3][3] = {{4, -2, -2}, {-2, 2, 0}, {-2, 0, 2}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(std::abs(k(d[i], d[j]) - expected[i][j]) < 1e-14);
  }
  // Every edge is a boundary edge: the sum of the three edge blocks.
  const double len[3] = {std::sqrt(2.0), 1.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    double diag = len[i];
    for (int j = 0; j < 3; ++j) {
      if (j != i) diag += len[j] / 3.0;
    }
    CHECK(std::abs(b(d[i], d[i]) - diag) < 1e-14);
  }
}

TEST_CASE("loads are consistent with the mass matrices") {
  const CRSpace space(shared(build_level(DomainKind::LShape, 4)));
  const CVector ones = CVector::Ones(space.n_dof());
  const CVector f1 = assemble_boundary_load(space, [](const Point&, const Point&) { return cplx(1.0); });
  CHECK((f1 - assemble_boundary_mass(space).matrix * ones).norm() < 1e-13);
  const CVector z = assemble_volume_load(space, [](const Point&) { return cplx(4.0, 4.0); });
  CHECK((z - assemble_volume_mass(space, cplx(4.0, 4.0)).matrix * ones).norm() < 1e-13);
  const SpMat m1 = assemble_volume_mass(space, 1.0).matrix;
  const SpMat mc = assemble_volume_mass(space, cplx(4.0, 4.0)).matrix;
  CHECK(CMatrix(mc - cplx(4.0, 4.0) * m1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(ones.dot(m1 * ones) - 3.0) < 1e-12);
  // Each cell contributes |K| / 3 to the load of its three dofs.
  const CVector unit = assemble_volume_load(space, [](const Point&) { return cplx(1.0); });
  CVector expected = CVector::Zero(space.n_dof());
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    for (int dof : space.cell_dofs(c)) expected(dof) += space.mesh().cell_area(c) / 3.0;
  }
  CHECK((unit - expected).norm() < 1e-14);
}

TEST_CASE("boundary mass is supported on boundary cells") {
  const CRSpace space(shared(build_level(DomainKind::Square, 6)));
  const Mesh& mesh = space.mesh();
  CVector x = CVector::Zero(space.n_dof());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    bool touches = false;
    for (int e : mesh.cell_edges()[c]) touches = touches || mesh.is_boundary_edge(e);
    if (touches) continue;
    for (int dof : space.cell_dofs(c)) x(dof) = cplx(c, 1.0);
  }
  // Dofs of interior cells may still belong to a boundary cell; clear those.
  for (int c = 0; c < mesh.num_cells(); ++c) {
    bool touches = false;
    for (int e : mesh.cell_edges()[c]) touches = touches || mesh.is_boundary_edge(e);
    if (touches) {
      for (int dof : space.cell_dofs(c)) x(dof) = 0.0;
    }
  }
  CHECK(x.norm() > 0.0);
  CHECK((assemble_boundary_mass(space).matrix * x).norm() == 0.0);
}

TEST_CASE("slit sides do not couple") {
  const CRSpace space(shared(build_level(DomainKind::SlitSquare, 8)));
  const Mesh& mesh = space.mesh();
  const SpMat k = assemble_stiffness(space).matrix;
  const double s = std::sqrt(2.0) / 2.0;
  // Cells touching the slit from above and from below, excluding the tip.
  std::vector<int> side(mesh.num_cells(), 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Point m = mesh.edge_midpoint(e);
    if (!mesh.is_boundary_edge(e) || std::abs(m.y()) > 1e-14 || m.x() < 0.0 || m.x() > s) continue;
    const int c = mesh.edge_cells()[e][0];
    Point centroid = Point::Zero();
    for (int v : mesh.cells()[c]) centroid += mesh.vertices()[v] / 3.0;
    side[c] = centroid.y() > 0.0 ? 1 : -1;
  }
  for (int a = 0; a < mesh.num_cells(); ++a) {
    for (int b = 0; b < mesh.num_cells(); ++b) {
      if (side[a] * side[b] != -1) continue;
      for (int i : space.cell_dofs(a)) {
        for (int j : space.cell_dofs(b)) {
          if (i == j) continue;
          CHECK(k.coeff(i, j) == cplx(0.0));
        }
      }
    }
  }
}
