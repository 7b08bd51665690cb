#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/types.hpp"

namespace steklov {

/// The four test domains. Each kind fixes its geometry completely:
///  - Square:     (-s, s)^2 with s = sqrt(2)/2
///  - LShape:     (-1, 1)^2 minus [0, 1) x (-1, 0]
///  - SlitSquare: Square minus the segment {0 <= x <= s, y = 0}
///  - Disk:       the unit disk, approximated by an inscribed polygon
enum class DomainKind { Square, LShape, SlitSquare, Disk };

std::string_view to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view name);

/// Exact area and perimeter of the continuous domain (the slit counts twice).
double domain_area(DomainKind kind);
double domain_perimeter(DomainKind kind);
/// Largest interior angle; pi for the disk.
double largest_interior_angle(DomainKind kind);

using Cell = std::array<int, 3>;
using Edge = std::array<int, 2>;

/// Conforming triangulation with edge topology.
///
/// Cells are positively oriented. Local vertex 0 of every cell is its newest
/// vertex, so the refinement (bisection) edge is local edge 0. Local edge i is
/// the edge opposite local vertex i. Boundary edges have a single incident
/// cell; edge_cells()[e][1] is -1 for them. For interior edges the stored
/// pair (k1, k2) fixes the normal orientation: it points from k1 into k2.
class Mesh {
public:
  Mesh() = default;
  /// Builds edges and incidence and validates the triangulation. Throws
  /// MeshError on a non-positive cell or an edge shared by more than two
  /// cells.
  Mesh(DomainKind kind, std::vector<Point> vertices, std::vector<Cell> cells,
       std::vector<int> parent = {});

  DomainKind kind() const { return kind_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& cell_edges() const { return cell_edges_; }
  const std::vector<std::array<int, 2>>& edge_cells() const { return edge_cells_; }
  const std::vector<char>& boundary_flags() const { return boundary_; }
  /// Per-vertex marker: vertex lies on the curved (circular) boundary.
  const std::vector<char>& curved_flags() const { return curved_; }
  /// Cell of the mesh this one was refined from (-1 for generated meshes).
  const std::vector<int>& parent() const { return parent_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary_edges() const;
  bool is_boundary_edge(int e) const { return boundary_[e] != 0; }
  /// Local index (0..2) of edge e within cell c, or -1.
  int local_edge_index(int c, int e) const;

  double cell_area(int c) const;
  double cell_diameter(int c) const;
  double max_diameter() const;
  /// Smallest interior angle over all cells, in radians.
  double min_angle() const;
  double total_area() const;
  double boundary_length() const;
  Point edge_midpoint(int e) const;
  double edge_length(int e) const;

private:
  void build_topology();

  DomainKind kind_ = DomainKind::Square;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 2>> edge_cells_;
  std::vector<char> boundary_;
  std::vector<char> curved_;
  std::vector<int> parent_;
};

struct EdgeGeometry {
  Point midpoint;
  double length = 0.0;
  Point normal;   // unit; outward on the boundary, k1 -> k2 inside
  Point tangent;  // (-normal.y, normal.x)
};

/// Generates the uniform initial mesh of a domain with cell diameters at most
/// 2 * target_h. Square-type domains use an N x N grid split along the
/// (-,-)->(+,+) diagonals; the disk starts from a hexagon fan that is red
/// refined (with boundary projection) and lightly smoothed.
Mesh build_domain(DomainKind kind, double target_h);

/// Structured mesh at a given resolution: an N x N grid for the square and
/// the slit square (N even), m x m squares per unit block for the L-shape, and
/// the number of red refinements of the hexagon for the disk.
Mesh build_level(DomainKind kind, int resolution);

/// Red refinement: every cell is split into four by its edge midpoints.
/// New boundary midpoints of a disk mesh are projected onto the unit circle.
Mesh refine_uniform(const Mesh& mesh);

/// Newest-vertex bisection of the marked cells with conforming closure.
Mesh refine_bisect(const Mesh& mesh, const std::set<int>& marked);

std::vector<EdgeGeometry> edge_geometry(const Mesh& mesh);

/// Plain-text export: a header line "vertices N cells M edges E" followed by
/// N lines "x y", M lines "v0 v1 v2" and E lines "a b boundary_flag".
void write_mesh(std::ostream& out, const Mesh& mesh);
/// Reads the format written by write_mesh. The edge block is checked against
/// the topology rebuilt from the cells.
Mesh read_mesh(std::istream& in, DomainKind kind);

}  // namespace steklov
