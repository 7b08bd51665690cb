#pragma once

#include <functional>
#include <vector>

#include "steklov/eigen_solver.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

struct UniformLevel {
  int resolution = 0;  // see build_level
  int dof = 0;
  double h = 0.0;      // largest cell diameter
  std::vector<cplx> lambdas;
  std::vector<double> residuals;
  double seconds = 0.0;
};

/// Leading eigenvalues of one domain on a sequence of uniform meshes.
struct UniformStudy {
  DomainKind domain = DomainKind::Square;
  cplx n = 4.0;
  double k = 1.0;
  int count = 6;
  std::vector<UniformLevel> levels;

  bool complex_n() const { return n.imag() != 0.0; }
  /// Values of the j-th eigenvalue (0-based) across levels.
  std::vector<cplx> column(int j) const;
  std::vector<double> mesh_sizes() const;
  std::vector<double> dofs() const;
};

/// `levels` resolutions doubling from the desk-scale coarsest mesh: N = 32
/// for the square and the slit square, m = 16 for the L-shape and 4 red
/// refinements for the disk. The finest of four levels stays below 2e5 dofs.
std::vector<int> default_resolutions(DomainKind kind, int levels);

SortRule sort_rule_for(const cplx& n);

using UniformCallback = std::function<void(const UniformLevel&, const Mesh&)>;

UniformStudy run_uniform(DomainKind kind, const cplx& n, double k, int count,
                         const std::vector<int>& resolutions, const EigenOptions& options = {},
                         const UniformCallback& on_level = {});

}  // namespace steklov
