#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "steklov/cr_space.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

/// A smooth exact solution with its derivatives.
struct SmoothFunction {
  std::function<cplx(const Point&)> value;
  std::function<Eigen::Vector2cd(const Point&)> gradient;
  std::function<cplx(const Point&)> laplacian;
};

/// cos(pi x) cos(pi y).
SmoothFunction cosine_product();
/// a + b . x (affine, all second derivatives zero).
SmoothFunction affine(const cplx& a, const Eigen::Vector2cd& b);

/// Data for which phi solves a(phi, v) = <f, v> + (zeta, v): f = grad phi .
/// gamma on the boundary and zeta = -laplace(phi) - k^2 n phi.
struct ManufacturedLoads {
  BoundaryFunction f;
  DomainFunction zeta;
};

ManufacturedLoads manufactured_loads(const SmoothFunction& phi, double k, const Coefficient& n);

/// (sum_K ||phi - v||_{1,K}^2)^{1/2}, with a degree-10 exact cell rule.
double broken_h1_error(const CRSpace& space, const CVector& coeffs, const SmoothFunction& phi);

/// ||phi - v||_{0, boundary}, with 6-point Gauss per boundary edge.
double boundary_l2_error(const CRSpace& space, const CVector& coeffs, const SmoothFunction& phi);

/// Vector d with d_i = D_h(phi, phi_i) = a_h(phi, phi_i) - <f, phi_i> - (zeta, phi_i),
/// so that D_h(phi, v) = sum_i conj(v_i) d_i.
CVector consistency_vector(const CRSpace& space, const SmoothFunction& phi,
                           const ManufacturedLoads& loads, double k, const Coefficient& n);

/// D_h(phi, v) for the discrete function with coefficients v.
cplx consistency_term(const CRSpace& space, const SmoothFunction& phi,
                      const ManufacturedLoads& loads, double k, const Coefficient& n,
                      const CVector& v);

/// sup over discrete v of |D_h(phi, v)| / ||v||_h, through the Gram matrix of
/// the broken H1 inner product.
double consistency_dual_norm(const CRSpace& space, const SmoothFunction& phi,
                             const ManufacturedLoads& loads, double k, const Coefficient& n);

/// CR interpolant: the edge mean of phi for every dof (exact for affine phi).
CVector cr_interpolant(const CRSpace& space, const SmoothFunction& phi);

/// Coefficients of the vertex-continuous piecewise-affine function with the
/// given vertex values (edge midpoint averages).
CVector from_vertex_values(const CRSpace& space, const CVector& vertex_values);

// Reference eigenvalues.

struct DiskReference {
  std::vector<cplx> real_n;     // n = 4, six largest
  std::vector<cplx> complex_n;  // n = 4 + 4i, four with the largest imaginary part
};

/// Values for the unit disk with k = 1.
const DiskReference& disk_reference();

struct PolygonReference {
  std::array<cplx, 6> lshape_real;
  std::array<cplx, 6> slit_real;
  std::array<cplx, 6> lshape_complex;
  std::array<cplx, 6> slit_complex;

  /// Column for a domain (LShape or SlitSquare) and index of refraction.
  const std::array<cplx, 6>& column(DomainKind kind, bool complex_n) const;
};

/// Reference values for the L-shape and the slit square, k = 1 and
/// n = 4 or n = 4 + 4i.
const PolygonReference& polygon_reference();

// Rates.

/// Least-squares slope of log(y) against log(x). Needs >= 2 points with
/// positive values; throws std::invalid_argument otherwise.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Convergence order in h: slope of log(error) against log(h). Needs >= 3
/// points and positive errors.
double observed_order(const std::vector<double>& h, const std::vector<double>& errors);

/// Order in h from dof counts (dof ~ h^-2): -2 times the dof slope.
double observed_order_dof(const std::vector<double>& dof, const std::vector<double>& errors);

/// Mean of values[first..last] (inclusive, 0-based).
cplx cluster_mean(const std::vector<cplx>& values, int first, int last);

struct MonotonicityReport {
  bool decreasing = false;         // non-increasing
  bool strictly_decreasing = false;
  bool increasing = false;         // non-decreasing
  bool strictly_increasing = false;
};

MonotonicityReport monotonicity_check(const std::vector<double>& sequence);

/// Regularity exponents of a domain: r from the largest interior angle
/// (r = 1 if omega < pi, else pi/omega taken at its limit), s = r/2 and t.
struct RateSpec {
  DomainKind domain = DomainKind::Square;
  double r = 1.0;
  double s = 0.5;
  double t = 1.0;

  double source_h1() const { return t; }
  double source_boundary() const { return t + s; }
  double eigenvalue() const { return 2.0 * t; }
  double eigenfunction_boundary() const { return s + t; }
};

RateSpec rate_spec(DomainKind kind);

struct Extrapolation {
  cplx limit;
  double order = 0.0;  // in h
};

/// Richardson extrapolation of a sequence on meshes with sizes h (at least 3
/// values). The order is estimated from the last three values, used to
/// extrapolate, refitted by least squares against that limit, and the
/// extrapolation is repeated once with the fitted order.
Extrapolation richardson(const std::vector<double>& h, const std::vector<cplx>& values);

struct ConvergenceReport {
  std::string name;
  std::vector<double> x;  // h or dof
  std::vector<double> errors;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

}  // namespace steklov
