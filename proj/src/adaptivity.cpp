#include "steklov/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

namespace steklov {

namespace {

// Integral of |a (1 - s) + b s|^2 over [0, 1], exact.
double linear_square_mean(const cplx& a, const cplx& b) {
  return (std::norm(a) + std::norm(b) + std::real(a * std::conj(b))) / 3.0;
}

// Value of the cell's affine function at an edge endpoint.
cplx endpoint_value(const CRSpace& space, const CVector& coeffs, int c, int vertex) {
  std::array<double, 3> bary{0.0, 0.0, 0.0};
  const Cell& v = space.mesh().cells()[c];
  for (int i = 0; i < 3; ++i) {
    if (v[i] == vertex) bary[i] = 1.0;
  }
  return space.value(coeffs, c, bary);
}

}  // namespace

EdgeJumps compute_jumps(const CRSpace& space, const CVector& coeffs, const cplx& lambda,
                        bool flip_interior_normals) {
  const Mesh& mesh = space.mesh();
  const std::vector<EdgeGeometry> geo = edge_geometry(mesh);
  EdgeJumps jumps;
  jumps.normal.assign(mesh.num_edges(), 0.0);
  jumps.tangential.assign(mesh.num_edges(), 0.0);
  jumps.boundary.assign(mesh.num_edges(), {0.0, 0.0});
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto [k1, k2] = mesh.edge_cells()[e];
    const Eigen::Vector2cd g1 = space.gradient(coeffs, k1);
    if (k2 >= 0) {
      const double sign = flip_interior_normals ? -1.0 : 1.0;
      const Eigen::Vector2cd diff = space.gradient(coeffs, k2) - g1;
      const Point normal = sign * geo[e].normal;
      const Point tangent(-normal.y(), normal.x());
      jumps.normal[e] = diff[0] * normal.x() + diff[1] * normal.y();
      jumps.tangential[e] = diff[0] * tangent.x() + diff[1] * tangent.y();
    } else {
      const cplx dn = g1[0] * geo[e].normal.x() + g1[1] * geo[e].normal.y();
      for (int s = 0; s < 2; ++s) {
        const cplx u = endpoint_value(space, coeffs, k1, mesh.edges()[e][s]);
        jumps.boundary[e][s] = 2.0 * (dn + lambda * u);
      }
    }
  }
  return jumps;
}

Indicator estimate(const CRSpace& space, const CVector& coeffs, const cplx& lambda,
                   const Coefficient& n, double k, bool flip_interior_normals) {
  const Mesh& mesh = space.mesh();
  const EdgeJumps jumps = compute_jumps(space, coeffs, lambda, flip_interior_normals);
  const TriangleRule rule = n.is_constant() ? edge_midpoint_rule() : conical_rule(4);
  const double k4 = k * k * k * k;

  Indicator ind;
  ind.cell.assign(mesh.num_cells(), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double area = space.area(c);
    double volume = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& bary = rule.points[q];
      volume += rule.weights[q] * std::norm(n(space.point(c, bary))) *
                std::norm(space.value(coeffs, c, bary));
    }
    double sum = area * k4 * area * volume;
    for (int e : mesh.cell_edges()[c]) {
      const double len = mesh.edge_length(e);
      double edge_norm2 = 0.0;
      if (mesh.is_boundary_edge(e)) {
        edge_norm2 = len * linear_square_mean(jumps.boundary[e][0], jumps.boundary[e][1]);
      } else {
        edge_norm2 = len * (std::norm(jumps.normal[e]) + std::norm(jumps.tangential[e]));
      }
      sum += 0.5 * len * edge_norm2;
    }
    ind.cell[c] = sum;
  }
  ind.total = std::accumulate(ind.cell.begin(), ind.cell.end(), 0.0);
  return ind;
}

Indicator PairIndicator::combined() const {
  Indicator sum;
  sum.cell.resize(primal.cell.size());
  for (std::size_t c = 0; c < sum.cell.size(); ++c) sum.cell[c] = primal.cell[c] + dual.cell[c];
  sum.total = std::accumulate(sum.cell.begin(), sum.cell.end(), 0.0);
  return sum;
}

PairIndicator estimate(const CRSpace& space, const EigenPair& pair, const Coefficient& n,
                       double k) {
  PairIndicator out;
  out.primal = estimate(space, pair.coeffs, pair.lambda, n, k);
  // |conj(n)| = |n|, so the volume term of the dual problem uses n as is.
  out.dual = estimate(space, pair.dual_coeffs, std::conj(pair.lambda), n, k);
  return out;
}

std::set<int> mark(const Indicator& indicator, double theta) {
  if (indicator.cell.empty()) throw std::invalid_argument("mark: empty indicator");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("mark: theta must lie in (0, 1]");
  std::vector<int> order(indicator.cell.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return indicator.cell[a] > indicator.cell[b]; });
  const double total = std::accumulate(indicator.cell.begin(), indicator.cell.end(), 0.0);
  const double goal = theta * total * (1.0 - 1e-12);
  std::set<int> marked;
  double sum = 0.0;
  for (int c : order) {
    if (sum >= goal || indicator.cell[c] <= 0.0) break;
    marked.insert(c);
    sum += indicator.cell[c];
  }
  return marked;
}

AdaptRun adapt_loop(const AdaptConfig& config, const LevelCallback& on_level) {
  if (config.j < 1) throw std::invalid_argument("adapt_loop: j must be >= 1");
  if (!(config.theta > 0.0 && config.theta < 1.0)) {
    throw std::invalid_argument("adapt_loop: theta must lie in (0, 1)");
  }
  if (!(config.k > 0.0)) throw std::invalid_argument("adapt_loop: k must be positive");
  double h = config.initial_h;
  if (h <= 0.0) h = config.domain == DomainKind::LShape ? 1.0 / 16.0 : std::numbers::sqrt2 / 32.0;
  const SortRule rule =
      config.n.imag() == 0.0 ? SortRule::DescendingReal : SortRule::DescendingImag;
  const Coefficient n(config.n);

  AdaptRun run;
  run.config = config;
  auto mesh = std::make_shared<const Mesh>(build_domain(config.domain, h));
  for (int level = 1; level <= config.max_levels; ++level) {
    const auto start = std::chrono::steady_clock::now();
    const CRSpace space(mesh);
    AdaptRecord record;
    record.level = level;
    record.dof = space.n_dof();
    EigenPair pair;
    try {
      const PencilProblem problem = make_pencil(space, n, config.k);
      pair = solve_eigs(problem, config.j, rule, config.eigen)[config.j - 1];
    } catch (const SolverError& e) {
      run.final_mesh = mesh;
      throw AdaptError("adapt_loop: level " + std::to_string(level) + " (" +
                           std::to_string(record.dof) + " dofs) failed: " + e.what(),
                       std::move(run));
    }
    const PairIndicator eta = estimate(space, pair, n, config.k);
    const Indicator total = eta.combined();
    record.lambda = pair.lambda;
    record.eta2_primal = eta.primal.total;
    record.eta2_dual = eta.dual.total;
    record.eta2 = total.total;
    const bool last = record.dof > config.max_dof || level == config.max_levels;
    std::set<int> marked;
    if (!last) marked = mark(total, config.theta);
    record.marked = static_cast<int>(marked.size());
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.records.push_back(record);
    if (on_level) on_level(record, *mesh);
    if (last) break;
    mesh = std::make_shared<const Mesh>(refine_bisect(*mesh, marked));
  }
  run.final_mesh = mesh;
  return run;
}

}  // namespace steklov
