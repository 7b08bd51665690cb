#include <doctest.h>

#include <cmath>
#include <numbers>

#include "steklov/verification.hpp"

using namespace steklov;

namespace {

using std::numbers::pi;

const double kHalfSide = std::sqrt(2.0) / 2.0;

// int_{-s}^{s} cos^2(pi t) dt and int sin^2(pi t) dt.
double cos2() { return kHalfSide + std::sin(2.0 * pi * kHalfSide) / (2.0 * pi); }
double sin2() { return kHalfSide - std::sin(2.0 * pi * kHalfSide) / (2.0 * pi); }

CRSpace square(int n) { return CRSpace(std::make_shared<const Mesh>(build_level(DomainKind::Square, n))); }

}  // namespace

TEST_CASE("norms of the manufactured solution") {
  const SmoothFunction phi = cosine_product();
  const CRSpace space = square(8);
  const CVector zero = CVector::Zero(space.n_dof());
  const double l2 = cos2() * cos2();
  const double h1 = 2.0 * pi * pi * sin2() * cos2();
  CHECK(broken_h1_error(space, zero, phi) == doctest::Approx(std::sqrt(l2 + h1)).epsilon(1e-10));
  const double edge = std::pow(std::cos(pi * kHalfSide), 2) * cos2();
  CHECK(boundary_l2_error(space, zero, phi) == doctest::Approx(std::sqrt(4.0 * edge)).epsilon(1e-10));
}

TEST_CASE("derivatives of the manufactured solution") {
  const SmoothFunction phi = cosine_product();
  const Point x(0.31, -0.17);
  const double d = 1e-5;
  const Point ex(d, 0.0), ey(0.0, d);
  const Eigen::Vector2cd g = phi.gradient(x);
  CHECK(std::abs(g(0) - (phi.value(x + ex) - phi.value(x - ex)) / (2 * d)) < 1e-8);
  CHECK(std::abs(g(1) - (phi.value(x + ey) - phi.value(x - ey)) / (2 * d)) < 1e-8);
  const double dd = 1e-3;
  const Point fx(dd, 0.0), fy(0.0, dd);
  const cplx fd = (phi.value(x + fx) + phi.value(x - fx) + phi.value(x + fy) + phi.value(x - fy) -
                   4.0 * phi.value(x)) / (dd * dd);
  CHECK(std::abs(phi.laplacian(x) - fd) < 1e-4);
}

TEST_CASE("manufactured loads") {
  const SmoothFunction phi = affine(cplx(1.0, 2.0), Eigen::Vector2cd(cplx(0.5, 0.0), cplx(0.0, -1.0)));
  const ManufacturedLoads loads = manufactured_loads(phi, 2.0, cplx(4.0, 1.0));
  const Point x(0.2, 0.4);
  CHECK(std::abs(loads.zeta(x) + 4.0 * cplx(4.0, 1.0) * phi.value(x)) < 1e-14);
  CHECK(std::abs(loads.f(x, Point(0.0, 1.0)) - cplx(0.0, -1.0)) < 1e-14);
}

TEST_CASE("affine functions are reproduced") {
  const SmoothFunction phi = affine(cplx(-0.4, 0.1), Eigen::Vector2cd(cplx(1.0, 1.0), cplx(2.0, 0.0)));
  const CRSpace space(std::make_shared<const Mesh>(build_level(DomainKind::LShape, 3)));
  const CVector v = cr_interpolant(space, phi);
  CHECK(broken_h1_error(space, v, phi) < 1e-13);
  CHECK(boundary_l2_error(space, v, phi) < 1e-13);
}

TEST_CASE("consistency term") {
  const SmoothFunction phi = cosine_product();
  const Coefficient n(4.0);
  const ManufacturedLoads loads = manufactured_loads(phi, 1.0, n);
  const CRSpace space = square(16);
  SUBCASE("vanishes for vertex-continuous functions") {
    CVector vertex(space.mesh().num_vertices());
    for (int i = 0; i < vertex.size(); ++i) vertex(i) = cplx(std::cos(1.3 * i), std::sin(0.2 * i));
    const CVector v = from_vertex_values(space, vertex);
    CHECK(std::abs(consistency_term(space, phi, loads, 1.0, n, v)) < 1e-10);
  }
  SUBCASE("is nonzero for a generic CR function") {
    CVector v(space.n_dof());
    for (int i = 0; i < v.size(); ++i) v(i) = cplx(std::cos(1.3 * i), 0.0);
    CHECK(std::abs(consistency_term(space, phi, loads, 1.0, n, v)) > 1e-6);
  }
  SUBCASE("dual norm decays linearly") {
    std::vector<double> h, norm;
    for (int res : {8, 16, 32}) {
      const CRSpace s = square(res);
      h.push_back(s.mesh().max_diameter());
      norm.push_back(consistency_dual_norm(s, phi, loads, 1.0, n));
    }
    CHECK(observed_order(h, norm) == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("vertex values map to edge midpoint averages") {
  const CRSpace space = square(2);
  CVector vertex(space.mesh().num_vertices());
  for (int i = 0; i < vertex.size(); ++i) vertex(i) = cplx(i, -i);
  const CVector v = from_vertex_values(space, vertex);
  for (int e = 0; e < space.n_dof(); ++e) {
    const auto [a, b] = space.mesh().edges()[e];
    CHECK(std::abs(v(e) - 0.5 * (vertex(a) + vertex(b))) < 1e-15);
  }
}

TEST_CASE("rates and extrapolation") {
  CHECK(loglog_slope({1.0, 10.0, 100.0}, {1.0, 0.01, 1e-4}) == doctest::Approx(-2.0));
  CHECK(observed_order({1.0, 0.5, 0.25}, {1.0, 0.25, 0.0625}) == doctest::Approx(2.0));
  CHECK(observed_order_dof({100.0, 400.0, 1600.0}, {1.0, 0.5, 0.25}) == doctest::Approx(1.0));
  CHECK_THROWS(observed_order({1.0, 0.5}, {1.0, 0.5}));
  CHECK_THROWS(loglog_slope({1.0, 2.0}, {1.0, 0.0}));

  const Extrapolation ex = richardson({1.0, 0.5, 0.25}, {cplx(3.0), cplx(2.25), cplx(2.0625)});
  CHECK(ex.order == doctest::Approx(2.0));
  CHECK(std::abs(ex.limit - 2.0) < 1e-12);
  const Extrapolation ez = richardson({1.0, 0.5, 0.25, 0.125},
                                     {cplx(1.0, 1.0) + 0.5, cplx(1.0, 1.0) + 0.25, cplx(1.0, 1.0) + 0.125,
                                      cplx(1.0, 1.0) + 0.0625});
  CHECK(ez.order == doctest::Approx(1.0));
  CHECK(std::abs(ez.limit - cplx(1.0, 1.0)) < 1e-12);
}

TEST_CASE("cluster mean") {
  const std::vector<cplx> v{cplx(1, 1), cplx(-0.2116751), cplx(-0.2116708), cplx(5)};
  CHECK(std::abs(cluster_mean(v, 1, 2) - cplx(-0.21167295)) < 1e-15);
  CHECK(cluster_mean(v, 3, 3) == cplx(5));
  CHECK_THROWS(cluster_mean(v, 2, 1));
  CHECK_THROWS(cluster_mean(v, 0, 4));
}

TEST_CASE("monotonicity of the tabulated sequences") {
  // Second L-shape eigenvalue and first square eigenvalue under uniform refinement.
  const MonotonicityReport l = monotonicity_check({0.8592520, 0.8583814, 0.8580275, 0.8578847});
  CHECK(l.strictly_decreasing);
  CHECK_FALSE(l.increasing);
  const MonotonicityReport s = monotonicity_check({2.2018805, 2.2023533, 2.2024690, 2.2024977});
  CHECK(s.strictly_increasing);
  CHECK_FALSE(s.decreasing);
  const MonotonicityReport flat = monotonicity_check({1.0, 1.0, 0.5});
  CHECK(flat.decreasing);
  CHECK_FALSE(flat.strictly_decreasing);
  CHECK_THROWS(monotonicity_check({1.0, 2.0}));
}

TEST_CASE("regularity exponents") {
  CHECK(rate_spec(DomainKind::Square).r == doctest::Approx(1.0));
  CHECK(rate_spec(DomainKind::Disk).r == doctest::Approx(1.0));
  const RateSpec l = rate_spec(DomainKind::LShape);
  CHECK(l.r == doctest::Approx(2.0 / 3.0));
  CHECK(l.eigenvalue() == doctest::Approx(4.0 / 3.0));
  const RateSpec slit = rate_spec(DomainKind::SlitSquare);
  CHECK(slit.r == doctest::Approx(0.5));
  CHECK(slit.eigenvalue() == doctest::Approx(1.0));
  CHECK(slit.source_boundary() == doctest::Approx(0.75));
}

TEST_CASE("reference tables") {
  const DiskReference& d = disk_reference();
  CHECK(d.real_n.size() == 6);
  CHECK(d.complex_n.size() == 4);
  CHECK(d.real_n[1] == d.real_n[2]);
  const PolygonReference& p = polygon_reference();
  CHECK(&p.column(DomainKind::LShape, false) == &p.lshape_real);
  CHECK(&p.column(DomainKind::SlitSquare, true) == &p.slit_complex);
  CHECK_THROWS(p.column(DomainKind::Square, false));
}
