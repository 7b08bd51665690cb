#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "steklov/cr_space.hpp"
#include "steklov/sparse_lu.hpp"
#include "steklov/types.hpp"

namespace steklov {

/// Discrete Steklov pencil: find (lambda, x != 0) with A x = -lambda B x,
/// where A = K - k^2 M_n is complex symmetric and B is the real positive
/// semidefinite boundary mass matrix. Only rank(B) eigenvalues are finite.
struct PencilProblem {
  SparseOperator a;
  SparseOperator b;

  int size() const { return a.rows(); }
};

PencilProblem make_pencil(const CRSpace& space, const Coefficient& n, double k);

enum class SortRule {
  DescendingReal,  // real index of refraction
  DescendingImag,  // complex index of refraction
};

/// True when a comes strictly before b. DescendingReal orders by real part,
/// then imaginary part, then modulus, all descending. DescendingImag orders by
/// imaginary part first, then real part, then modulus.
bool sort_before(const cplx& a, const cplx& b, SortRule rule);

struct EigenPair {
  cplx lambda;
  /// Coefficients normalized so that coeffs^H B coeffs = 1, with the largest
  /// entry among the dofs carrying boundary mass (B_ii != 0) real and positive.
  CVector coeffs;
  /// Dual eigenvector: A^H y = -conj(lambda) B y, y^H B y = 1.
  CVector dual_coeffs;
  /// ||A x + lambda B x|| / ||x||.
  double residual = 0.0;
  /// ||A^H y + conj(lambda) B y|| / ||y||.
  double dual_residual = 0.0;

  /// Eigenvalue of the discrete Neumann-to-Dirichlet map.
  cplx mu() const { return -1.0 / lambda; }
};

enum class SolverMode { Auto, Dense, Krylov };

struct EigenOptions {
  std::optional<cplx> shift;  // default_shift(rule) when empty
  SolverMode mode = SolverMode::Auto;
  int dense_threshold = 500;  // Auto uses the dense path up to this many dofs
  double tol = 1e-11;
  int max_restarts = 300;
  /// Additional eigenvalues computed beyond `count`, so that the ones closest
  /// to the shift cover the first `count` in the sort order. Negative: a
  /// rule-dependent default.
  int extra = -1;
  std::uint64_t seed = 20240917;
};

/// Shift placed beyond the wanted end of the spectrum: 8 for real n and
/// 4.5i for complex n.
cplx default_shift(SortRule rule);

class EigenConvergenceError : public SolverError {
public:
  EigenConvergenceError(const std::string& what, std::vector<EigenPair> partial)
      : SolverError(what), partial_(std::move(partial)) {}
  const std::vector<EigenPair>& partial() const { return partial_; }

private:
  std::vector<EigenPair> partial_;
};

/// The first `count` finite eigenpairs in the order of `rule`, with verified
/// residuals (<= 1e-8) and dual vectors. Shift-invert Krylov-Schur on
/// (A + sigma B)^{-1} B, or a dense shift-invert eigensolve for small
/// problems. A shift that makes A + sigma B singular, or that coincides with
/// an eigenvalue to roundoff, is perturbed and the matrix refactorized.
std::vector<EigenPair> solve_eigs(const PencilProblem& problem, int count, SortRule rule,
                                  const EigenOptions& options = {});

void sort_eigs(std::vector<EigenPair>& pairs, SortRule rule);

/// Dual eigenvector of a solved pair. Because A^T = A and B is real, conj(x)
/// is a left eigenvector; it is returned after the defining relation has been
/// checked. Otherwise (or when forced) an inverse iteration on
/// A^H + conj(lambda) B computes it explicitly.
CVector dual_pair(const EigenPair& pair, const PencilProblem& problem,
                  bool force_explicit = false);

/// Relative residual ||A^H y + conj(lambda) B y|| / ||y||.
double dual_residual(const PencilProblem& problem, const cplx& lambda, const CVector& y);

/// Solves A x = load. Throws SingularMatrixError when A is (nearly) singular,
/// i.e. k^2 is close to a discrete Neumann eigenvalue.
CVector solve_source(const SparseOperator& a, const CVector& load);

/// Discrete Neumann-to-Dirichlet map T_h f: the boundary trace of the
/// solution of a_h(u, v) = <f, v>, and its adjoint T_h^* via A^H.
class NtdOperator {
public:
  NtdOperator(const CRSpace& space, const SparseOperator& a);

  BoundaryTrace apply(const BoundaryFunction& f) const;
  BoundaryTrace apply(const BoundaryTrace& f) const;
  BoundaryTrace apply_adjoint(const BoundaryFunction& g) const;
  BoundaryTrace apply_adjoint(const BoundaryTrace& g) const;

  /// Full coefficient vectors of the underlying discrete solutions.
  CVector solve(const CVector& load) const;
  CVector solve_adjoint(const CVector& load) const;

private:
  const CRSpace* space_;
  SparseLU lu_;
};

BoundaryTrace apply_ntd(const SparseOperator& a, const CRSpace& space, const BoundaryFunction& f);
BoundaryTrace apply_ntd_adjoint(const SparseOperator& a, const CRSpace& space,
                                const BoundaryFunction& g);

}  // namespace steklov
