#include <istream>
#include <ostream>
#include <sstream>

#include "steklov/mesh.hpp"

namespace steklov {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "vertices " << mesh.num_vertices() << " cells " << mesh.num_cells() << " edges "
      << mesh.num_edges() << '\n';
  for (const Point& p : mesh.vertices()) buf << p.x() << ' ' << p.y() << '\n';
  for (const Cell& c : mesh.cells()) buf << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  for (int e = 0; e < mesh.num_edges(); ++e) {
    buf << mesh.edges()[e][0] << ' ' << mesh.edges()[e][1] << ' '
        << (mesh.is_boundary_edge(e) ? 1 : 0) << '\n';
  }
  out << buf.str();
}

Mesh read_mesh(std::istream& in, DomainKind kind) {
  std::string tag_v, tag_c, tag_e;
  int nv = 0, nc = 0, ne = 0;
  if (!(in >> tag_v >> nv >> tag_c >> nc >> tag_e >> ne) || tag_v != "vertices" ||
      tag_c != "cells" || tag_e != "edges" || nv < 0 || nc < 0 || ne < 0) {
    throw MeshError("read_mesh: malformed header");
  }
  std::vector<Point> vertices(nv);
  for (auto& p : vertices) {
    if (!(in >> p.x() >> p.y())) throw MeshError("read_mesh: truncated vertex block");
  }
  std::vector<Cell> cells(nc);
  for (auto& c : cells) {
    if (!(in >> c[0] >> c[1] >> c[2])) throw MeshError("read_mesh: truncated cell block");
  }
  Mesh mesh(kind, std::move(vertices), std::move(cells));
  if (mesh.num_edges() != ne) throw MeshError("read_mesh: edge count does not match cells");
  for (int e = 0; e < ne; ++e) {
    int a = 0, b = 0, flag = 0;
    if (!(in >> a >> b >> flag)) throw MeshError("read_mesh: truncated edge block");
    const Edge& edge = mesh.edges()[e];
    const bool same = (edge[0] == a && edge[1] == b) || (edge[0] == b && edge[1] == a);
    if (!same || (flag != 0) != mesh.is_boundary_edge(e)) {
      throw MeshError("read_mesh: edge " + std::to_string(e) + " does not match topology");
    }
  }
  return mesh;
}

}  // namespace steklov
