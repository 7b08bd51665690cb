#include "steklov/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dense_eigen.hpp"
#include "krylov_schur.hpp"

namespace steklov {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kInfiniteNu = 1e-10;

std::vector<int> boundary_rows(const SpMat& b) {
  std::vector<int> rows;
  const CVector d = b.diagonal();
  for (int i = 0; i < d.size(); ++i) {
    if (std::abs(d[i]) > 0.0) rows.push_back(i);
  }
  return rows;
}

double primal_residual(const PencilProblem& p, const cplx& lambda, const CVector& x) {
  return (p.a.matrix * x + lambda * (p.b.matrix * x)).norm() / x.norm();
}

// Scales x so that x^H B x = 1 and the largest-modulus boundary entry is real
// and positive. Returns false for vectors with (numerically) zero trace.
bool normalize(CVector& x, const SpMat& b, const std::vector<int>& boundary) {
  const double bnorm2 = std::real(x.dot(b * x));
  if (!(bnorm2 > 1e-28 * x.squaredNorm())) return false;
  x /= std::sqrt(bnorm2);
  int best = -1;
  double largest = -1.0;
  for (int i : boundary) {
    if (std::abs(x[i]) > largest * (1.0 + 1e-12)) {
      largest = std::abs(x[i]);
      best = i;
    }
  }
  if (best >= 0 && largest > 0.0) x *= std::conj(x[best]) / largest;
  return true;
}

cplx rayleigh_quotient(const PencilProblem& p, const CVector& x) {
  const CVector ax = p.a.matrix * x;
  const CVector bx = p.b.matrix * x;
  // Two-sided quotient with the left vector conj(x); falls back to the
  // one-sided quotient for (nearly) isotropic x.
  const cplx xtbx = x.transpose() * bx;
  const cplx xhbx = x.dot(bx);
  if (std::abs(xtbx) > 1e-8 * std::abs(xhbx)) return -cplx(x.transpose() * ax) / xtbx;
  return -x.dot(ax) / xhbx;
}

// Inverse iteration at a slightly perturbed eigenvalue estimate.
void refine(const PencilProblem& p, cplx& lambda, CVector& x) {
  for (int it = 0; it < 3; ++it) {
    const cplx shift = lambda + 1e-9 * (1.0 + std::abs(lambda));
    const SparseLU lu(SpMat(p.a.matrix + shift * p.b.matrix), 0.0);
    x = lu.solve(p.b.matrix * x);
    x.normalize();
    lambda = rayleigh_quotient(p, x);
    if (primal_residual(p, lambda, x) <= 1e-2 * kResidualTol) return;
  }
}

std::optional<EigenPair> finalize(const PencilProblem& p, cplx lambda, CVector x,
                                  const std::vector<int>& boundary) {
  if (!normalize(x, p.b.matrix, boundary)) return std::nullopt;
  double res = primal_residual(p, lambda, x);
  if (res > kResidualTol) {
    refine(p, lambda, x);
    if (!normalize(x, p.b.matrix, boundary)) return std::nullopt;
    res = primal_residual(p, lambda, x);
    if (res > kResidualTol) return std::nullopt;
  }
  EigenPair pair;
  pair.lambda = lambda;
  pair.coeffs = std::move(x);
  pair.residual = res;
  pair.dual_coeffs = dual_pair(pair, p);
  pair.dual_residual = dual_residual(p, lambda, pair.dual_coeffs);
  return pair;
}

cplx perturbed(const cplx& sigma) {
  return sigma + 1e-3 * (1.0 + std::abs(sigma)) * cplx(1.0, std::imag(sigma) != 0.0 ? 1.0 : 0.0);
}

// A shift within roundoff of an eigenvalue passes the factorization but gives
// a Ritz value so dominant that the others lose accuracy.
bool shift_hits_eigenvalue(const std::vector<cplx>& nu, const cplx& sigma) {
  for (const cplx& v : nu) {
    if (std::abs(v) * 1e-9 * (1.0 + std::abs(sigma)) > 1.0) return true;
  }
  return false;
}

SparseLU factor_shifted(const PencilProblem& p, cplx& sigma) {
  for (int attempt = 0;; ++attempt) {
    try {
      return SparseLU(SpMat(p.a.matrix + sigma * p.b.matrix));
    } catch (const SingularMatrixError&) {
      if (attempt == 3) throw;
      sigma = perturbed(sigma);
    }
  }
}

std::vector<EigenPair> take_first(std::vector<EigenPair> pairs, int count, SortRule rule) {
  sort_eigs(pairs, rule);
  if (static_cast<int>(pairs.size()) > count) pairs.resize(count);
  return pairs;
}

}  // namespace

PencilProblem make_pencil(const CRSpace& space, const Coefficient& n, double k) {
  return PencilProblem{assemble_helmholtz(space, n, k), assemble_boundary_mass(space)};
}

bool sort_before(const cplx& a, const cplx& b, SortRule rule) {
  const double a1 = rule == SortRule::DescendingReal ? a.real() : a.imag();
  const double b1 = rule == SortRule::DescendingReal ? b.real() : b.imag();
  if (a1 != b1) return a1 > b1;
  const double a2 = rule == SortRule::DescendingReal ? a.imag() : a.real();
  const double b2 = rule == SortRule::DescendingReal ? b.imag() : b.real();
  if (a2 != b2) return a2 > b2;
  return std::abs(a) > std::abs(b);
}

void sort_eigs(std::vector<EigenPair>& pairs, SortRule rule) {
  std::stable_sort(pairs.begin(), pairs.end(), [rule](const EigenPair& x, const EigenPair& y) {
    return sort_before(x.lambda, y.lambda, rule);
  });
}

cplx default_shift(SortRule rule) {
  return rule == SortRule::DescendingReal ? cplx(8.0, 0.0) : cplx(0.0, 4.5);
}

std::vector<EigenPair> solve_eigs(const PencilProblem& problem, int count, SortRule rule,
                                  const EigenOptions& options) {
  const int n = problem.size();
  if (count <= 0) throw SolverError("solve_eigs: count must be positive");
  if (problem.b.rows() != n || problem.a.cols() != n) {
    throw SolverError("solve_eigs: A and B must be square and of equal size");
  }
  const std::vector<int> boundary = boundary_rows(problem.b.matrix);
  const int finite = static_cast<int>(boundary.size());
  if (count > finite) {
    throw SolverError("solve_eigs: requested " + std::to_string(count) +
                      " eigenvalues but the pencil has at most " + std::to_string(finite));
  }
  cplx sigma = options.shift.value_or(default_shift(rule));
  const bool dense = options.mode == SolverMode::Dense ||
                     (options.mode == SolverMode::Auto && n <= options.dense_threshold);

  std::vector<EigenPair> pairs;
  if (dense) {
    detail::DenseSpectrum spectrum;
    for (int attempt = 0;; ++attempt) {
      try {
        spectrum = detail::dense_shift_invert(problem.a.matrix, problem.b.matrix, sigma);
      } catch (const SingularMatrixError&) {
        if (attempt == 3) throw;
        sigma = perturbed(sigma);
        continue;
      }
      if (attempt < 3 && shift_hits_eigenvalue(spectrum.nu, sigma)) {
        sigma = perturbed(sigma);
        continue;
      }
      break;
    }
    for (std::size_t i = 0; i < spectrum.nu.size(); ++i) {
      if (std::abs(spectrum.nu[i]) <= kInfiniteNu) continue;
      auto pair = finalize(problem, sigma - 1.0 / spectrum.nu[i], spectrum.vectors.col(i), boundary);
      if (pair) pairs.push_back(std::move(*pair));
    }
    if (static_cast<int>(pairs.size()) < count) {
      throw EigenConvergenceError("solve_eigs: dense path found only " +
                                      std::to_string(pairs.size()) + " verified eigenpairs",
                                  take_first(std::move(pairs), count, rule));
    }
    return take_first(std::move(pairs), count, rule);
  }

  const int extra = options.extra >= 0 ? options.extra : (rule == SortRule::DescendingReal ? 2 : 6);
  detail::KrylovOptions kopts;
  kopts.nev = std::min(count + extra, finite);
  kopts.tol = options.tol;
  kopts.max_restarts = options.max_restarts;
  kopts.seed = options.seed;

  auto convert = [&](const detail::KrylovResult& result) {
    std::vector<EigenPair> out;
    for (std::size_t i = 0; i < result.values.size(); ++i) {
      if (std::abs(result.values[i]) <= kInfiniteNu) continue;
      auto pair = finalize(problem, sigma - 1.0 / result.values[i], result.vectors.col(i), boundary);
      if (pair) out.push_back(std::move(*pair));
    }
    return out;
  };

  for (int attempt = 0;; ++attempt) {
    const SparseLU lu = factor_shifted(problem, sigma);
    const detail::LinearOperator op = [&](const CVector& in, CVector& out) {
      out = lu.solve(problem.b.matrix * in);
    };
    detail::KrylovResult result;
    try {
      result = detail::krylov_schur(op, n, kopts);
    } catch (const detail::KrylovConvergenceError& e) {
      throw EigenConvergenceError(e.what(), take_first(convert(e.partial()), count, rule));
    }
    if (attempt < 3 && shift_hits_eigenvalue(result.values, sigma)) {
      sigma = perturbed(sigma);
      continue;
    }
    pairs = convert(result);
    break;
  }
  if (static_cast<int>(pairs.size()) < count) {
    throw EigenConvergenceError("solve_eigs: only " + std::to_string(pairs.size()) +
                                    " verified eigenpairs found",
                                take_first(std::move(pairs), count, rule));
  }
  return take_first(std::move(pairs), count, rule);
}

double dual_residual(const PencilProblem& problem, const cplx& lambda, const CVector& y) {
  const CVector r = problem.a.matrix.adjoint() * y + std::conj(lambda) * (problem.b.matrix * y);
  return r.norm() / y.norm();
}

CVector dual_pair(const EigenPair& pair, const PencilProblem& problem, bool force_explicit) {
  const std::vector<int> boundary = boundary_rows(problem.b.matrix);
  if (!force_explicit) {
    CVector y = pair.coeffs.conjugate();
    if (normalize(y, problem.b.matrix, boundary) &&
        dual_residual(problem, pair.lambda, y) <= kResidualTol) {
      return y;
    }
  }
  // Inverse iteration with (A + (lambda + delta) B)^H = A^H + conj(lambda + delta) B.
  const cplx shift = pair.lambda + 1e-9 * (1.0 + std::abs(pair.lambda));
  const SparseLU lu(SpMat(problem.a.matrix + shift * problem.b.matrix), 0.0);
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVector y(problem.size());
  for (int i = 0; i < y.size(); ++i) y[i] = cplx(dist(rng), dist(rng));
  for (int it = 0; it < 20; ++it) {
    y = lu.solve_adjoint(problem.b.matrix * y);
    y.normalize();
    if (it >= 1 && dual_residual(problem, pair.lambda, y) <= 1e-2 * kResidualTol) break;
  }
  if (!normalize(y, problem.b.matrix, boundary) ||
      dual_residual(problem, pair.lambda, y) > kResidualTol) {
    throw SolverError("dual_pair: dual eigenvector could not be verified");
  }
  return y;
}

CVector solve_source(const SparseOperator& a, const CVector& load) {
  if (load.size() != a.rows()) throw SolverError("solve_source: load size mismatch");
  std::optional<SparseLU> lu;
  try {
    lu.emplace(a.matrix);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(std::string(e.what()) +
                              "; k^2 is (close to) a discrete eigenvalue, choose a different k "
                              "or mesh");
  }
  CVector x = lu->solve(load);
  const double target = 1e-10 * load.norm();
  CVector r = load - a.matrix * x;
  for (int it = 0; it < 2 && r.norm() > target; ++it) {
    x += lu->solve(r);
    r = load - a.matrix * x;
  }
  if (r.norm() > target) {
    throw SolverError("solve_source: residual " + std::to_string(r.norm() / load.norm()) +
                      " exceeds 1e-10; the system is too ill-conditioned");
  }
  return x;
}

NtdOperator::NtdOperator(const CRSpace& space, const SparseOperator& a)
    : space_(&space), lu_([&] {
        try {
          return SparseLU(a.matrix);
        } catch (const SingularMatrixError& e) {
          throw SingularMatrixError(std::string(e.what()) +
                                    "; choose a different k or mesh");
        }
      }()) {}

CVector NtdOperator::solve(const CVector& load) const { return lu_.solve(load); }

CVector NtdOperator::solve_adjoint(const CVector& load) const { return lu_.solve_adjoint(load); }

BoundaryTrace NtdOperator::apply(const BoundaryFunction& f) const {
  return boundary_trace(*space_, solve(assemble_boundary_load(*space_, f)));
}

BoundaryTrace NtdOperator::apply(const BoundaryTrace& f) const {
  return boundary_trace(*space_, solve(trace_load(*space_, f)));
}

BoundaryTrace NtdOperator::apply_adjoint(const BoundaryFunction& g) const {
  return boundary_trace(*space_, solve_adjoint(assemble_boundary_load(*space_, g)));
}

BoundaryTrace NtdOperator::apply_adjoint(const BoundaryTrace& g) const {
  return boundary_trace(*space_, solve_adjoint(trace_load(*space_, g)));
}

BoundaryTrace apply_ntd(const SparseOperator& a, const CRSpace& space, const BoundaryFunction& f) {
  return NtdOperator(space, a).apply(f);
}

BoundaryTrace apply_ntd_adjoint(const SparseOperator& a, const CRSpace& space,
                                const BoundaryFunction& g) {
  return NtdOperator(space, a).apply_adjoint(g);
}

}  // namespace steklov
