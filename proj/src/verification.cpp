#include "steklov/verification.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steklov/sparse_lu.hpp"

namespace steklov {

namespace {

constexpr double kPi = std::numbers::pi;

// Point at parameter s on edge e, and the barycentric coordinates of that
// point in cell c.
std::array<double, 3> bary_on_edge(const Mesh& mesh, int c, int e, double s) {
  std::array<double, 3> bary{0.0, 0.0, 0.0};
  const Cell& v = mesh.cells()[c];
  for (int i = 0; i < 3; ++i) {
    if (v[i] == mesh.edges()[e][0]) bary[i] = 1.0 - s;
    if (v[i] == mesh.edges()[e][1]) bary[i] = s;
  }
  return bary;
}

cplx dot(const Eigen::Vector2cd& g, const Point& p) { return g[0] * p.x() + g[1] * p.y(); }

}  // namespace

SmoothFunction cosine_product() {
  SmoothFunction f;
  f.value = [](const Point& x) { return cplx(std::cos(kPi * x.x()) * std::cos(kPi * x.y())); };
  f.gradient = [](const Point& x) {
    return Eigen::Vector2cd(-kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y()),
                            -kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y()));
  };
  f.laplacian = [](const Point& x) {
    return cplx(-2.0 * kPi * kPi * std::cos(kPi * x.x()) * std::cos(kPi * x.y()));
  };
  return f;
}

SmoothFunction affine(const cplx& a, const Eigen::Vector2cd& b) {
  SmoothFunction f;
  f.value = [a, b](const Point& x) { return a + b[0] * x.x() + b[1] * x.y(); };
  f.gradient = [b](const Point&) { return b; };
  f.laplacian = [](const Point&) { return cplx(0.0); };
  return f;
}

ManufacturedLoads manufactured_loads(const SmoothFunction& phi, double k, const Coefficient& n) {
  ManufacturedLoads loads;
  loads.f = [phi](const Point& x, const Point& normal) { return dot(phi.gradient(x), normal); };
  loads.zeta = [phi, k, n](const Point& x) {
    return -phi.laplacian(x) - k * k * n(x) * phi.value(x);
  };
  return loads;
}

double broken_h1_error(const CRSpace& space, const CVector& coeffs, const SmoothFunction& phi) {
  const TriangleRule rule = conical_rule(6);
  double sum = 0.0;
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const Eigen::Vector2cd grad = space.gradient(coeffs, c);
    double cell = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = space.point(c, rule.points[q]);
      const cplx e = phi.value(x) - space.value(coeffs, c, rule.points[q]);
      const Eigen::Vector2cd de = phi.gradient(x) - grad;
      cell += rule.weights[q] * (std::norm(e) + de.squaredNorm());
    }
    sum += space.area(c) * cell;
  }
  return std::sqrt(sum);
}

double boundary_l2_error(const CRSpace& space, const CVector& coeffs, const SmoothFunction& phi) {
  const Mesh& mesh = space.mesh();
  const LineRule gauss = gauss_legendre(6);
  double sum = 0.0;
  for (int e : space.boundary_dofs()) {
    const int c = mesh.edge_cells()[e][0];
    const Point& a = mesh.vertices()[mesh.edges()[e][0]];
    const Point& b = mesh.vertices()[mesh.edges()[e][1]];
    const double len = (b - a).norm();
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
      const double s = gauss.nodes[q];
      const Point x = (1.0 - s) * a + s * b;
      const cplx err = phi.value(x) - space.value(coeffs, c, bary_on_edge(mesh, c, e, s));
      sum += len * gauss.weights[q] * std::norm(err);
    }
  }
  return std::sqrt(sum);
}

CVector consistency_vector(const CRSpace& space, const SmoothFunction& phi,
                           const ManufacturedLoads& loads, double k, const Coefficient& n) {
  const Mesh& mesh = space.mesh();
  const TriangleRule rule = conical_rule(6);
  CVector d = CVector::Zero(space.n_dof());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& dofs = space.cell_dofs(c);
    const auto& gl = space.grad_lambda(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& bary = rule.points[q];
      const Point x = space.point(c, bary);
      const double w = space.area(c) * rule.weights[q];
      const Eigen::Vector2cd g = phi.gradient(x);
      const cplx reaction = k * k * n(x) * phi.value(x) + loads.zeta(x);
      for (int i = 0; i < 3; ++i) {
        const Point grad_i = -2.0 * gl[i];
        d[dofs[i]] += w * (dot(g, grad_i) - reaction * (1.0 - 2.0 * bary[i]));
      }
    }
  }
  d -= assemble_boundary_load(space, loads.f, 6);
  return d;
}

cplx consistency_term(const CRSpace& space, const SmoothFunction& phi,
                      const ManufacturedLoads& loads, double k, const Coefficient& n,
                      const CVector& v) {
  return v.dot(consistency_vector(space, phi, loads, k, n));
}

double consistency_dual_norm(const CRSpace& space, const SmoothFunction& phi,
                             const ManufacturedLoads& loads, double k, const Coefficient& n) {
  const CVector d = consistency_vector(space, phi, loads, k, n);
  SpMat gram = assemble_stiffness(space).matrix + assemble_volume_mass(space, 1.0).matrix;
  const SparseLU lu(gram);
  const CVector z = lu.solve(d);
  return std::sqrt(std::max(0.0, std::real(d.dot(z))));
}

CVector cr_interpolant(const CRSpace& space, const SmoothFunction& phi) {
  const Mesh& mesh = space.mesh();
  const LineRule gauss = gauss_legendre(4);
  CVector coeffs(space.n_dof());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Point& a = mesh.vertices()[mesh.edges()[e][0]];
    const Point& b = mesh.vertices()[mesh.edges()[e][1]];
    cplx mean = 0.0;
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
      mean += gauss.weights[q] * phi.value((1.0 - gauss.nodes[q]) * a + gauss.nodes[q] * b);
    }
    coeffs[space.dof_of_edge(e)] = mean;
  }
  return coeffs;
}

CVector from_vertex_values(const CRSpace& space, const CVector& vertex_values) {
  const Mesh& mesh = space.mesh();
  if (vertex_values.size() != mesh.num_vertices()) {
    throw std::invalid_argument("from_vertex_values: one value per vertex expected");
  }
  CVector coeffs(space.n_dof());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    coeffs[space.dof_of_edge(e)] =
        0.5 * (vertex_values[mesh.edges()[e][0]] + vertex_values[mesh.edges()[e][1]]);
  }
  return coeffs;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two (x, y) pairs");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("loglog_slope: values must be positive");
    }
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = m * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw std::invalid_argument("loglog_slope: x values coincide");
  return (m * sxy - sx * sy) / den;
}

double observed_order(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() < 3) throw std::invalid_argument("observed_order: need at least three points");
  return loglog_slope(h, errors);
}

double observed_order_dof(const std::vector<double>& dof, const std::vector<double>& errors) {
  if (dof.size() < 3) throw std::invalid_argument("observed_order_dof: need at least three points");
  return -2.0 * loglog_slope(dof, errors);
}

cplx cluster_mean(const std::vector<cplx>& values, int first, int last) {
  if (first < 0 || last < first || last >= static_cast<int>(values.size())) {
    throw std::invalid_argument("cluster_mean: invalid index range");
  }
  cplx sum = 0.0;
  for (int i = first; i <= last; ++i) sum += values[i];
  return sum / static_cast<double>(last - first + 1);
}

MonotonicityReport monotonicity_check(const std::vector<double>& sequence) {
  if (sequence.size() < 3) throw std::invalid_argument("monotonicity_check: need at least three values");
  MonotonicityReport r{true, true, true, true};
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    const double a = sequence[i - 1], b = sequence[i];
    if (b > a) r.decreasing = false;
    if (b >= a) r.strictly_decreasing = false;
    if (b < a) r.increasing = false;
    if (b <= a) r.strictly_increasing = false;
  }
  return r;
}

RateSpec rate_spec(DomainKind kind) {
  RateSpec spec;
  spec.domain = kind;
  const double omega = largest_interior_angle(kind);
  spec.r = omega < kPi + 1e-12 ? 1.0 : kPi / omega;
  spec.s = spec.r / 2.0;
  // The eigenvalue rates observed for the polygons correspond to t = r.
  spec.t = spec.r;
  return spec;
}

Extrapolation richardson(const std::vector<double>& h, const std::vector<cplx>& values) {
  const std::size_t m = values.size();
  if (m < 3 || h.size() != m) throw std::invalid_argument("richardson: need at least three levels");
  const double ratio = h[m - 2] / h[m - 1];
  const cplx d1 = values[m - 2] - values[m - 3];
  const cplx d2 = values[m - 1] - values[m - 2];
  if (std::abs(d2) == 0.0 || std::abs(d1) == 0.0) return {values[m - 1], 0.0};
  const auto extrapolate = [&](double p) {
    return values[m - 1] + d2 / (std::pow(ratio, p) - 1.0);
  };
  double p = std::log(std::abs(d1) / std::abs(d2)) / std::log(ratio);
  if (!(p > 0.0)) return {values[m - 1], p};
  cplx limit = extrapolate(p);
  std::vector<double> hs, errs;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = std::abs(values[i] - limit);
    if (e > 0.0) {
      hs.push_back(h[i]);
      errs.push_back(e);
    }
  }
  if (hs.size() >= 2) {
    const double fitted = loglog_slope(hs, errs);
    if (fitted > 0.0) {
      p = fitted;
      limit = extrapolate(p);
    }
  }
  return {limit, p};
}

}  // namespace steklov
