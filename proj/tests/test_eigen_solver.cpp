#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <lapacke.h>

#include "steklov/eigen_solver.hpp"
#include "steklov/studies.hpp"

using namespace steklov;

namespace {

struct Setup {
  CRSpace space;
  PencilProblem problem;
};

Setup setup(DomainKind kind, int resolution, const cplx& n) {
  CRSpace space(std::make_shared<const Mesh>(build_level(kind, resolution)));
  PencilProblem p = make_pencil(space, Coefficient(n), 1.0);
  return {std::move(space), std::move(p)};
}

// Finite eigenvalues of A x = -lambda B x from LAPACK's QZ algorithm.
std::vector<cplx> qz_eigenvalues(const PencilProblem& p, SortRule rule) {
  const int n = p.size();
  CMatrix a(p.a.matrix);
  CMatrix b = -CMatrix(p.b.matrix);
  std::vector<cplx> alpha(n), beta(n);
  REQUIRE(LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                        n, reinterpret_cast<lapack_complex_double*>(b.data()), n,
                        reinterpret_cast<lapack_complex_double*>(alpha.data()),
                        reinterpret_cast<lapack_complex_double*>(beta.data()), nullptr, 1, nullptr,
                        1) == 0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta[i]) > 1e-8 * std::abs(alpha[i])) out.push_back(alpha[i] / beta[i]);
  }
  std::sort(out.begin(), out.end(), [rule](const cplx& x, const cplx& y) { return sort_before(x, y, rule); });
  return out;
}

int rank_of_b(const PencilProblem& p) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(CMatrix(p.b.matrix).real()).singularValues();
  return static_cast<int>((sv.array() > 1e-12 * sv(0)).count());
}

double primal_residual(const PencilProblem& p, const EigenPair& e) {
  return (p.a.matrix * e.coeffs + e.lambda * (p.b.matrix * e.coeffs)).norm() / e.coeffs.norm();
}

}  // namespace

TEST_CASE("full finite spectrum matches the QZ oracle") {
  for (const cplx n : {cplx(4.0, 0.0), cplx(4.0, 4.0)}) {
    for (DomainKind kind : {DomainKind::Square, DomainKind::LShape}) {
      const Setup s = setup(kind, kind == DomainKind::Square ? 4 : 2, n);
      const SortRule rule = sort_rule_for(n);
      const std::vector<cplx> oracle = qz_eigenvalues(s.problem, rule);
      REQUIRE(static_cast<int>(oracle.size()) == rank_of_b(s.problem));
      for (SolverMode mode : {SolverMode::Dense, SolverMode::Krylov}) {
        EigenOptions opts;
        opts.mode = mode;
        const auto pairs = solve_eigs(s.problem, static_cast<int>(oracle.size()), rule, opts);
        REQUIRE(pairs.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
          CHECK(std::abs(pairs[i].lambda - oracle[i]) <= 1e-9 * std::max(1.0, std::abs(oracle[i])));
        }
      }
    }
  }
}

TEST_CASE("leading eigenvalues of the first tabulated meshes") {
  SUBCASE("square, 3136 dofs") {
    const Setup s = setup(DomainKind::Square, 32, 4.0);
    const auto pairs = solve_eigs(s.problem, 6, SortRule::DescendingReal);
    const double table[] = {2.2018805, -0.2116708, -0.2116751, -0.9069429, -2.7522381, -2.7589883};
    // The table lists lambda_5 and lambda_6 in the other order.
    for (int j = 0; j < 6; ++j) CHECK(std::abs(pairs[j].lambda.real() - table[j]) < 6e-8);
  }
  SUBCASE("L-shape, 9344 dofs") {
    const Setup s = setup(DomainKind::LShape, 32, 4.0);
    const auto pairs = solve_eigs(s.problem, 6, SortRule::DescendingReal);
    const double table[] = {2.5335485, 0.8592520, 0.1246281, -1.0845725, -1.0901869, -1.4147102};
    for (int j = 0; j < 6; ++j) CHECK(std::abs(pairs[j].lambda.real() - table[j]) < 6e-8);
  }
  SUBCASE("slit square, 12448 dofs") {
    const Setup s = setup(DomainKind::SlitSquare, 64, 4.0);
    const auto pairs = solve_eigs(s.problem, 6, SortRule::DescendingReal);
    const double table[] = {1.4848728, 0.4698829, -0.1840366, -0.6898362, -1.8987837, -1.9264514};
    for (int j = 0; j < 6; ++j) CHECK(std::abs(pairs[j].lambda.real() - table[j]) < 6e-8);
  }
}

TEST_CASE("eigenpair normalization and residuals") {
  const Setup s = setup(DomainKind::LShape, 8, cplx(4.0, 4.0));
  const auto pairs = solve_eigs(s.problem, 4, SortRule::DescendingImag);
  for (const auto& e : pairs) {
    CHECK(primal_residual(s.problem, e) <= 1e-8);
    CHECK(e.residual <= 1e-8);
    CHECK(e.dual_residual <= 1e-8);
    CHECK(std::abs(e.coeffs.dot(s.problem.b.matrix * e.coeffs) - 1.0) < 1e-12);
    CHECK(std::abs(e.dual_coeffs.dot(s.problem.b.matrix * e.dual_coeffs) - 1.0) < 1e-12);
    // Largest entry over the dofs with boundary mass; near-ties go to the first.
    int imax = -1;
    double largest = -1.0;
    for (int d = 0; d < e.coeffs.size(); ++d) {
      if (s.problem.b.matrix.coeff(d, d) == 0.0) continue;
      if (std::abs(e.coeffs(d)) > largest * (1.0 + 1e-12)) {
        largest = std::abs(e.coeffs(d));
        imax = d;
      }
    }
    REQUIRE(imax >= 0);
    CHECK(std::abs(e.coeffs(imax).imag()) < 1e-12);
    CHECK(e.coeffs(imax).real() > 0.0);
    CHECK(std::abs(e.mu() + 1.0 / e.lambda) < 1e-15);
  }
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    CHECK_FALSE(sort_before(pairs[i].lambda, pairs[i - 1].lambda, SortRule::DescendingImag));
  }
}

TEST_CASE("dual eigenvector against a dense null vector") {
  const Setup s = setup(DomainKind::Square, 4, cplx(4.0, 4.0));
  const auto pairs = solve_eigs(s.problem, 3, SortRule::DescendingImag);
  for (const auto& e : pairs) {
    const CMatrix m = CMatrix(s.problem.a.matrix).adjoint() + std::conj(e.lambda) * CMatrix(s.problem.b.matrix);
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const CVector null = svd.matrixV().col(m.cols() - 1);
    for (bool force : {false, true}) {
      const CVector y = dual_pair(e, s.problem, force);
      // Parallel vectors: |<y, null>| = ||y|| ||null||.
      CHECK(std::abs(y.dot(null)) == doctest::Approx(y.norm() * null.norm()).epsilon(1e-7));
      CHECK(dual_residual(s.problem, e.lambda, y) < 1e-8);
    }
  }
}

TEST_CASE("real index of refraction gives a real spectrum") {
  const Setup s = setup(DomainKind::Disk, 3, 4.0);
  for (const auto& e : solve_eigs(s.problem, 6, SortRule::DescendingReal)) {
    CHECK(std::abs(e.lambda.imag()) <= 1e-8 * (1.0 + std::abs(e.lambda)));
  }
}

TEST_CASE("shift choices give the same eigenvalues") {
  const Setup s = setup(DomainKind::Square, 16, 4.0);
  EigenOptions krylov;
  krylov.mode = SolverMode::Krylov;
  const auto base = solve_eigs(s.problem, 4, SortRule::DescendingReal, krylov);
  EigenOptions at_eigenvalue = krylov;
  // A + sigma B is singular for sigma = lambda.
  at_eigenvalue.shift = base[0].lambda;
  const auto shifted = solve_eigs(s.problem, 4, SortRule::DescendingReal, at_eigenvalue);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(shifted[j].lambda - base[j].lambda) < 1e-9);
  EigenOptions other = krylov;
  other.shift = 5.0;
  const auto moved = solve_eigs(s.problem, 4, SortRule::DescendingReal, other);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(moved[j].lambda - base[j].lambda) < 1e-8);
}

TEST_CASE("sorting") {
  std::vector<EigenPair> pairs(5);
  const cplx values[] = {cplx(-1, 2), cplx(3, 0), cplx(-1, 2.5), cplx(0.5, -1), cplx(3, 0.1)};
  for (int i = 0; i < 5; ++i) pairs[i].lambda = values[i];
  sort_eigs(pairs, SortRule::DescendingReal);
  CHECK(pairs[0].lambda == cplx(3, 0.1));
  CHECK(pairs[1].lambda == cplx(3, 0));
  CHECK(pairs[4].lambda == cplx(-1, 2));
  auto again = pairs;
  sort_eigs(again, SortRule::DescendingReal);
  for (int i = 0; i < 5; ++i) CHECK(again[i].lambda == pairs[i].lambda);
  sort_eigs(pairs, SortRule::DescendingImag);
  CHECK(pairs[0].lambda == cplx(-1, 2.5));
  CHECK(pairs[4].lambda == cplx(0.5, -1));
  CHECK_FALSE(sort_before(cplx(1, 1), cplx(1, 1), SortRule::DescendingImag));
}

TEST_CASE("invalid requests") {
  const Setup s = setup(DomainKind::Square, 2, 4.0);
  CHECK_THROWS_AS(solve_eigs(s.problem, 0, SortRule::DescendingReal), SolverError);
  CHECK_THROWS_AS(solve_eigs(s.problem, s.problem.size() + 1, SortRule::DescendingReal), SolverError);
}

TEST_CASE("source solve against a dense LU oracle") {
  const Setup s = setup(DomainKind::LShape, 4, cplx(4.0, 1.0));
  CVector load(s.problem.size());
  for (int i = 0; i < load.size(); ++i) load(i) = cplx(std::cos(0.3 * i), std::sin(0.7 * i));
  const CVector x = solve_source(s.problem.a, load);
  const CVector oracle = CMatrix(s.problem.a.matrix).fullPivLu().solve(load);
  CHECK((x - oracle).norm() < 1e-10 * oracle.norm());
}

TEST_CASE("NtD map of an eigenfunction trace is mu times the trace") {
  const Setup s = setup(DomainKind::SlitSquare, 8, cplx(4.0, 4.0));
  const NtdOperator ntd(s.space, s.problem.a);
  for (const auto& e : solve_eigs(s.problem, 3, SortRule::DescendingImag)) {
    const BoundaryTrace t = boundary_trace(s.space, e.coeffs);
    const BoundaryTrace mapped = ntd.apply(t);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      for (int k = 0; k < 2; ++k) {
        worst = std::max(worst, std::abs(mapped.values[i][k] - e.mu() * t.values[i][k]));
        scale = std::max(scale, std::abs(t.values[i][k]));
      }
    }
    CHECK(worst < 1e-9 * scale * std::abs(e.mu()));
  }
}

TEST_CASE("NtD adjointness on random boundary data") {
  const Setup s = setup(DomainKind::LShape, 4, cplx(4.0, 4.0));
  const NtdOperator ntd(s.space, s.problem.a);
  const BoundaryFunction f = [](const Point& x, const Point&) { return cplx(std::cos(2 * x.x()), x.y()); };
  const BoundaryFunction g = [](const Point& x, const Point&) { return cplx(x.x() * x.y(), std::sin(x.y())); };
  const cplx lhs = boundary_inner(s.space, ntd.apply(f), g);
  const cplx rhs = std::conj(boundary_inner(s.space, ntd.apply_adjoint(g), f));
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
  const cplx free_lhs = boundary_inner(s.space, apply_ntd(s.problem.a, s.space, f), g);
  CHECK(std::abs(free_lhs - lhs) < 1e-13 * std::abs(lhs));
}

TEST_CASE("NtD map for real n") {
  const Setup s = setup(DomainKind::LShape, 4, 4.0);
  const BoundaryFunction f = [](const Point& x, const Point&) { return cplx(std::cos(x.x() + 2 * x.y()), 0.0); };
  const cplx tff = boundary_inner(s.space, apply_ntd(s.problem.a, s.space, f), f);
  CHECK(std::abs(tff.imag()) < 1e-12 * std::max(1.0, std::abs(tff)));
  const BoundaryFunction zero = [](const Point&, const Point&) { return cplx(0.0); };
  for (const auto& v : apply_ntd(s.problem.a, s.space, zero).values) {
    CHECK(v[0] == cplx(0.0));
    CHECK(v[1] == cplx(0.0));
  }
}

TEST_CASE("square with complex n orders by imaginary part") {
  const Setup s = setup(DomainKind::Square, 32, cplx(4.0, 4.0));
  const auto pairs = solve_eigs(s.problem, 6, SortRule::DescendingImag);
  // First row of the square n = 4 + 4i table (3136 dofs).
  CHECK(std::abs(pairs[0].lambda - cplx(0.687353, 2.494448)) < 1e-6);
  CHECK(std::abs(pairs[1].lambda - cplx(-0.342525, 0.850899)) < 1e-6);
  CHECK(std::abs(pairs[2].lambda - cplx(-0.342514, 0.850890)) < 1e-6);
  for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i].lambda.imag() <= pairs[i - 1].lambda.imag());
}
