#pragma once

#include <array>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "steklov/cr_space.hpp"
#include "steklov/eigen_solver.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

/// Edge residuals of a discrete function. Gradients are cellwise constant, so
/// the interior jumps are constants per edge. On a boundary edge the normal
/// residual J = 2 (grad v . gamma + lambda v) is affine and stored by its
/// values at the two edge endpoints (mesh.edges() order); the tangential
/// residual vanishes there.
struct EdgeJumps {
  std::vector<cplx> normal;                    // interior edges, 0 on the boundary
  std::vector<cplx> tangential;                // interior edges, 0 on the boundary
  std::vector<std::array<cplx, 2>> boundary;   // boundary edges, 0 inside
};

/// Jumps of u_h with eigenvalue lambda. `flip_interior_normals` reverses the
/// chosen normal of every interior edge; the squared jumps do not change.
EdgeJumps compute_jumps(const CRSpace& space, const CVector& coeffs, const cplx& lambda,
                        bool flip_interior_normals = false);

struct Indicator {
  std::vector<double> cell;  // eta_K^2
  double total = 0.0;        // sum of cell
};

/// eta_K^2 = |K| ||k^2 n v||_K^2 + 1/2 sum_l |l| ||J_gamma||_l^2
///         + 1/2 sum_l |l| ||J_t||_l^2
/// for a discrete function v with eigenvalue lambda. The dual function is
/// estimated with conj(lambda) and conj(n).
Indicator estimate(const CRSpace& space, const CVector& coeffs, const cplx& lambda,
                   const Coefficient& n, double k, bool flip_interior_normals = false);

struct PairIndicator {
  Indicator primal;
  Indicator dual;

  /// eta_K^2(u_h) + eta_K^2(u_h^*).
  Indicator combined() const;
};

PairIndicator estimate(const CRSpace& space, const EigenPair& pair, const Coefficient& n,
                       double k);

/// Doerfler marking: the shortest prefix of cells sorted by decreasing
/// eta_K^2 (ties by increasing cell id) that carries at least theta * eta^2.
std::set<int> mark(const Indicator& indicator, double theta);

struct AdaptConfig {
  DomainKind domain = DomainKind::LShape;
  cplx n = 4.0;
  double k = 1.0;
  int j = 2;               // 1-based index of the tracked eigenvalue
  double theta = 0.5;
  int max_dof = 200000;    // stop once the dof count exceeds this
  double initial_h = 0.0;  // 0: 1/16 for the L-shape, sqrt(2)/32 otherwise
  int max_levels = 200;
  EigenOptions eigen;
};

struct AdaptRecord {
  int level = 0;
  int dof = 0;
  cplx lambda;
  double eta2 = 0.0;  // eta^2(u_h) + eta^2(u_h^*)
  double eta2_primal = 0.0;
  double eta2_dual = 0.0;
  int marked = 0;
  double seconds = 0.0;
};

struct AdaptRun {
  AdaptConfig config;
  std::vector<AdaptRecord> records;
  std::shared_ptr<const Mesh> final_mesh;
};

class AdaptError : public SolverError {
public:
  AdaptError(const std::string& what, AdaptRun partial)
      : SolverError(what), partial_(std::move(partial)) {}
  const AdaptRun& partial() const { return partial_; }

private:
  AdaptRun partial_;
};

/// Per-level hook, e.g. for mesh dumps.
using LevelCallback = std::function<void(const AdaptRecord&, const Mesh&)>;

/// Solve, estimate, mark and bisect until the dof count exceeds max_dof.
/// The eigenvalue is tracked by its sorted index. Throws AdaptError carrying
/// the completed levels when a solve fails.
AdaptRun adapt_loop(const AdaptConfig& config, const LevelCallback& on_level = {});

}  // namespace steklov
