#include "krylov_schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <lapacke.h>

namespace steklov::detail {

namespace {

using Rng = std::mt19937_64;

CVector random_vector(int n, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(dist(rng), dist(rng));
  return v;
}

// w <- (I - L L^H) w, applied twice.
void project_out(CVector& w, const CMatrix& locked) {
  if (locked.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) w.noalias() -= locked * (locked.adjoint() * w);
}

// Eigenvector of upper triangular T for diagonal index i (entries > i are 0).
CVector triangular_eigenvector(const CMatrix& t, int i) {
  CVector y = CVector::Zero(i + 1);
  y[i] = 1.0;
  const double smin = std::max(std::numeric_limits<double>::epsilon() * std::abs(t(i, i)),
                               std::numeric_limits<double>::min());
  for (int r = i - 1; r >= 0; --r) {
    cplx s = 0.0;
    for (int c = r + 1; c <= i; ++c) s += t(r, c) * y[c];
    cplx den = t(r, r) - t(i, i);
    if (std::abs(den) < smin) den = smin;
    y[r] = -s / den;
  }
  return y;
}

// Reorders the complex Schur form t = q^H h q by decreasing modulus of the
// diagonal.
void sort_schur(CMatrix& t, CMatrix& q) {
  const int m = static_cast<int>(t.rows());
  for (int i = 0; i < m; ++i) {
    int best = i;
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(t(j, j)) > std::abs(t(best, best))) best = j;
    }
    if (best == i) continue;
    const lapack_int info = LAPACKE_ztrexc(
        LAPACK_COL_MAJOR, 'V', m, reinterpret_cast<lapack_complex_double*>(t.data()), m,
        reinterpret_cast<lapack_complex_double*>(q.data()), m, best + 1, i + 1);
    if (info != 0) throw SolverError("krylov_schur: Schur reordering failed");
  }
}

struct PassResult {
  CMatrix schur_vectors;
  std::vector<cplx> diagonal;
  int converged = 0;
  bool complete = false;
  int restarts = 0;
  int applications = 0;
};

PassResult run_pass(const LinearOperator& op, int n, int nev, int ncv, const CMatrix& locked,
                    double tol, int max_restarts, Rng& rng) {
  PassResult out;
  const int avail = n - static_cast<int>(locked.cols());
  ncv = std::min(ncv, avail);
  nev = std::min(nev, ncv);
  if (nev <= 0) {
    out.complete = true;
    out.schur_vectors.resize(n, 0);
    return out;
  }

  CMatrix v = CMatrix::Zero(n, ncv + 1);
  CMatrix h = CMatrix::Zero(ncv + 1, ncv);
  CVector w(n);

  auto fresh_direction = [&](int cols) {
    for (int attempt = 0; attempt < 5; ++attempt) {
      CVector r = random_vector(n, rng);
      project_out(r, locked);
      for (int pass = 0; pass < 2; ++pass) {
        r.noalias() -= v.leftCols(cols) * (v.leftCols(cols).adjoint() * r);
      }
      const double norm = r.norm();
      if (norm > 1e-8) return CVector(r / norm);
    }
    throw SolverError("krylov_schur: could not extend the Krylov basis");
  };

  {
    CVector start = random_vector(n, rng);
    project_out(start, locked);
    op(start, w);
    ++out.applications;
    project_out(w, locked);
    const double norm = w.norm();
    v.col(0) = norm > 0.0 ? CVector(w / norm) : fresh_direction(0);
  }

  int k = 0;
  CMatrix t, q;
  Eigen::RowVectorXcd bq;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    out.restarts = restart;
    for (int j = k; j < ncv; ++j) {
      op(v.col(j), w);
      ++out.applications;
      project_out(w, locked);
      const double w0 = w.norm();
      CVector coeff = v.leftCols(j + 1).adjoint() * w;
      w.noalias() -= v.leftCols(j + 1) * coeff;
      const CVector again = v.leftCols(j + 1).adjoint() * w;
      w.noalias() -= v.leftCols(j + 1) * again;
      coeff += again;
      h.block(0, j, j + 1, 1) = coeff;
      const double beta = w.norm();
      if (j + 1 >= avail) {
        // Whole space spanned: the relation is exact.
        h(j + 1, j) = 0.0;
        v.col(j + 1).setZero();
      } else if (beta <= 1e-10 * w0 || beta == 0.0) {
        // Invariant subspace found; continue with a fresh direction.
        h(j + 1, j) = 0.0;
        v.col(j + 1) = fresh_direction(j + 1);
      } else {
        h(j + 1, j) = beta;
        v.col(j + 1) = w / beta;
      }
    }

    const int m = ncv;
    Eigen::ComplexSchur<CMatrix> schur(h.topLeftCorner(m, m));
    if (schur.info() != Eigen::Success) throw SolverError("krylov_schur: Schur decomposition failed");
    t = schur.matrixT();
    q = schur.matrixU();
    t.triangularView<Eigen::StrictlyLower>().setZero();
    sort_schur(t, q);
    bq = h.row(m).head(m) * q;

    int nconv = 0;
    for (int i = 0; i < nev; ++i) {
      const CVector y = triangular_eigenvector(t, i);
      cplx prod = 0.0;
      for (int r = 0; r <= i; ++r) prod += bq[r] * y[r];
      const double residual = std::abs(prod) / y.norm();
      const double scale = std::max(std::abs(t(i, i)), 1e-300);
      if (residual <= tol * scale) {
        ++nconv;
      } else {
        break;
      }
    }
    out.converged = nconv;
    if (nconv >= nev) {
      out.complete = true;
      break;
    }
    if (restart == max_restarts) break;

    int p = nev + (m - nev) / 2;
    p = std::clamp(p, std::min(nev + 1, m - 1), m - 1);
    const CMatrix kept = v.leftCols(m) * q.leftCols(p);
    v.col(p) = v.col(m);
    v.leftCols(p) = kept;
    h.setZero();
    h.topLeftCorner(p, p) = t.topLeftCorner(p, p);
    h.row(p).head(p) = bq.head(p);
    k = p;
  }

  const int keep = out.complete ? nev : out.converged;
  out.schur_vectors = v.leftCols(ncv) * q.leftCols(keep);
  for (int i = 0; i < keep; ++i) out.diagonal.push_back(t(i, i));
  return out;
}

// Rayleigh-Ritz on an orthonormal basis of an (approximately) invariant
// subspace.
KrylovResult rayleigh_ritz(const LinearOperator& op, const CMatrix& basis, int nev) {
  KrylovResult result;
  const int m = static_cast<int>(basis.cols());
  const int n = static_cast<int>(basis.rows());
  if (m == 0) {
    result.vectors.resize(n, 0);
    return result;
  }
  CMatrix image(n, m);
  CVector w(n);
  for (int j = 0; j < m; ++j) {
    op(basis.col(j), w);
    image.col(j) = w;
  }
  result.applications = m;
  const CMatrix g = basis.adjoint() * image;
  Eigen::ComplexEigenSolver<CMatrix> eig(g);
  if (eig.info() != Eigen::Success) throw SolverError("krylov_schur: projected eigenproblem failed");
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig.eigenvalues()[a]) > std::abs(eig.eigenvalues()[b]);
  });
  const int keep = std::min(nev, m);
  result.vectors.resize(n, keep);
  for (int i = 0; i < keep; ++i) {
    const cplx nu = eig.eigenvalues()[order[i]];
    const CVector s = eig.eigenvectors().col(order[i]).normalized();
    result.values.push_back(nu);
    result.vectors.col(i) = basis * s;
    result.residuals.push_back((image * s - nu * result.vectors.col(i)).norm());
  }
  return result;
}

}  // namespace

KrylovResult krylov_schur(const LinearOperator& op, int n, const KrylovOptions& options) {
  if (n <= 0) throw SolverError("krylov_schur: empty operator");
  Rng rng(options.seed);
  const int nev = std::min(options.nev, n);
  const int ncv = options.ncv > 0 ? options.ncv : std::max(2 * nev + 10, 24);

  int restarts = 0;
  int applications = 0;
  PassResult first = run_pass(op, n, nev, ncv, CMatrix(n, 0), options.tol, options.max_restarts, rng);
  restarts += first.restarts;
  applications += first.applications;
  CMatrix locked = first.schur_vectors;
  std::vector<cplx> found = first.diagonal;
  if (!first.complete) {
    KrylovResult partial = rayleigh_ritz(op, locked, nev);
    partial.restarts = restarts;
    partial.applications = applications + partial.applications;
    throw KrylovConvergenceError("krylov_schur: " + std::to_string(first.converged) + " of " +
                                     std::to_string(nev) + " eigenvalues converged after " +
                                     std::to_string(options.max_restarts) + " restarts",
                                 std::move(partial));
  }

  // Deflation passes: look for eigenvalues hidden from the first Krylov space
  // (extra copies of multiple eigenvalues) that belong to the wanted set.
  for (int pass = 1; pass < options.max_passes; ++pass) {
    const int room = n - static_cast<int>(locked.cols());
    const int count = std::min(options.check_count, room);
    if (count <= 0) break;
    std::vector<double> moduli;
    for (const cplx& z : found) moduli.push_back(std::abs(z));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    const double threshold = moduli[std::min<std::size_t>(nev, moduli.size()) - 1];

    PassResult extra = run_pass(op, n, count, std::max(2 * count + 10, 20), locked, options.tol,
                                options.max_restarts, rng);
    restarts += extra.restarts;
    applications += extra.applications;
    std::vector<int> take;
    for (int i = 0; i < static_cast<int>(extra.diagonal.size()); ++i) {
      if (std::abs(extra.diagonal[i]) > threshold * (1.0 - 1e-6)) take.push_back(i);
    }
    if (take.empty()) break;
    CMatrix added(n, static_cast<int>(take.size()));
    for (std::size_t i = 0; i < take.size(); ++i) {
      CVector col = extra.schur_vectors.col(take[i]);
      project_out(col, locked);
      added.col(static_cast<int>(i)) = col;
      found.push_back(extra.diagonal[take[i]]);
    }
    Eigen::HouseholderQR<CMatrix> qr(added);
    const CMatrix thin = qr.householderQ() * CMatrix::Identity(n, added.cols());
    CMatrix grown(n, locked.cols() + thin.cols());
    grown << locked, thin;
    locked = std::move(grown);
  }

  KrylovResult result = rayleigh_ritz(op, locked, nev);
  result.restarts = restarts;
  result.applications += applications;
  return result;
}

}  // namespace steklov::detail
