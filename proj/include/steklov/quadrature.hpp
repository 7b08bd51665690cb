#pragma once

#include <array>
#include <vector>

namespace steklov {

/// Rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule on a triangle in barycentric coordinates; weights sum to 1 and are
/// multiplied by the cell area by the caller.
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

LineRule gauss_legendre(int n);

/// Edge-midpoint rule, exact for quadratics.
TriangleRule edge_midpoint_rule();

/// Collapsed (Duffy) Gauss product rule with n points per direction, exact
/// for polynomials of degree 2n - 2.
TriangleRule conical_rule(int n);

}  // namespace steklov
