#include "steklov/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <unordered_map>

namespace steklov {

namespace {

constexpr double kHalfSide = std::numbers::sqrt2 / 2.0;

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// Structured grid over [x0, x0 + nx*step] x [y0, y0 + ny*step]; each grid
// square is split along its (-,-)->(+,+) diagonal and the vertex opposite the
// diagonal becomes the newest vertex. `keep` filters grid squares by index.
template <typename KeepFn>
void add_grid_cells(int nx, int ny, const std::vector<int>& node_id, KeepFn keep,
                    std::vector<Cell>& cells) {
  auto id = [&](int i, int j) { return node_id[static_cast<std::size_t>(j) * (nx + 1) + i]; };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      if (!keep(i, j)) continue;
      const int p00 = id(i, j), p10 = id(i + 1, j), p11 = id(i + 1, j + 1), p01 = id(i, j + 1);
      cells.push_back({p10, p11, p00});
      cells.push_back({p01, p00, p11});
    }
  }
}

Mesh square_like(DomainKind kind, double target_h) {
  const double side = 2.0 * kHalfSide;
  int n = std::max(1, static_cast<int>(std::ceil(side / target_h - 1e-12)));
  if (kind == DomainKind::SlitSquare) {
    if (n < 2) throw MeshError("build_domain: target_h too large to resolve the slit");
    n += n % 2;
  }
  const double step = side / n;
  std::vector<Point> vertices;
  std::vector<int> node_id((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      node_id[j * (n + 1) + i] = static_cast<int>(vertices.size());
      vertices.emplace_back(-kHalfSide + i * step, -kHalfSide + j * step);
    }
  }
  std::vector<Cell> cells;
  if (kind == DomainKind::Square) {
    add_grid_cells(n, n, node_id, [](int, int) { return true; }, cells);
    return Mesh(kind, std::move(vertices), std::move(cells));
  }

  // Slit: vertices on y = 0 with x > 0 get a second copy used by the cells
  // below the slit. The tip at the origin stays shared.
  const int mid = n / 2;
  std::vector<int> lower_id = node_id;
  for (int i = mid + 1; i <= n; ++i) {
    lower_id[mid * (n + 1) + i] = static_cast<int>(vertices.size());
    vertices.push_back(vertices[node_id[mid * (n + 1) + i]]);
  }
  add_grid_cells(n, n, lower_id, [&](int, int j) { return j < mid; }, cells);
  add_grid_cells(n, n, node_id, [&](int, int j) { return j >= mid; }, cells);
  return Mesh(kind, std::move(vertices), std::move(cells));
}

Mesh lshape(double target_h) {
  const int m = std::max(1, static_cast<int>(std::ceil(1.0 / target_h - 1e-12)));
  const int n = 2 * m;
  const double step = 1.0 / m;
  std::vector<Point> vertices;
  std::vector<int> node_id((n + 1) * (n + 1), -1);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Drop vertices strictly inside the removed quadrant x > 0, y < 0.
      if (i > m && j < m) continue;
      node_id[j * (n + 1) + i] = static_cast<int>(vertices.size());
      vertices.emplace_back(-1.0 + i * step, -1.0 + j * step);
    }
  }
  std::vector<Cell> cells;
  add_grid_cells(n, n, node_id, [&](int i, int j) { return !(i >= m && j < m); }, cells);
  return Mesh(DomainKind::LShape, std::move(vertices), std::move(cells));
}

Mesh smooth_interior(const Mesh& mesh, int sweeps) {
  std::vector<Point> pos = mesh.vertices();
  std::vector<char> fixed(pos.size(), 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary_edge(e)) {
      fixed[mesh.edges()[e][0]] = 1;
      fixed[mesh.edges()[e][1]] = 1;
    }
  }
  for (int s = 0; s < sweeps; ++s) {
    std::vector<Point> sum(pos.size(), Point::Zero());
    std::vector<int> count(pos.size(), 0);
    for (const auto& [a, b] : mesh.edges()) {
      sum[a] += pos[b];
      sum[b] += pos[a];
      ++count[a];
      ++count[b];
    }
    std::vector<Point> next = pos;
    for (std::size_t v = 0; v < pos.size(); ++v) {
      if (!fixed[v] && count[v] > 0) next[v] = sum[v] / count[v];
    }
    bool valid = true;
    for (const auto& c : mesh.cells()) {
      if (signed_area(next[c[0]], next[c[1]], next[c[2]]) <= 0.0) {
        valid = false;
        break;
      }
    }
    if (!valid) break;
    pos = std::move(next);
  }
  return Mesh(mesh.kind(), std::move(pos), mesh.cells(), mesh.parent());
}

Mesh hexagon() {
  std::vector<Point> vertices{Point::Zero()};
  std::vector<Cell> cells;
  for (int i = 0; i < 6; ++i) {
    const double t = i * std::numbers::pi / 3.0;
    vertices.emplace_back(std::cos(t), std::sin(t));
  }
  // Centre is the newest vertex, so the first bisection splits the rim edge.
  for (int i = 0; i < 6; ++i) cells.push_back({0, 1 + i, 1 + (i + 1) % 6});
  return Mesh(DomainKind::Disk, std::move(vertices), std::move(cells));
}

Mesh disk_refined(int refinements) {
  Mesh mesh = hexagon();
  if (refinements == 0) return mesh;
  for (int i = 0; i < refinements; ++i) mesh = refine_uniform(mesh);
  return smooth_interior(mesh, 2);
}

Mesh disk(double target_h) {
  Mesh mesh = hexagon();
  int refinements = 0;
  while (mesh.max_diameter() > target_h) {
    mesh = refine_uniform(mesh);
    ++refinements;
  }
  return refinements == 0 ? mesh : smooth_interior(mesh, 2);
}

Point new_midpoint(const Mesh& mesh, int e) {
  Point m = mesh.edge_midpoint(e);
  if (mesh.kind() == DomainKind::Disk && mesh.is_boundary_edge(e)) m.normalize();
  return m;
}

}  // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Square: return "square";
    case DomainKind::LShape: return "lshape";
    case DomainKind::SlitSquare: return "slit";
    case DomainKind::Disk: return "disk";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(std::string_view name) {
  if (name == "square") return DomainKind::Square;
  if (name == "lshape" || name == "L" || name == "l-shape") return DomainKind::LShape;
  if (name == "slit") return DomainKind::SlitSquare;
  if (name == "disk") return DomainKind::Disk;
  throw std::invalid_argument("unknown domain '" + std::string(name) +
                              "' (expected square, lshape, slit or disk)");
}

double domain_area(DomainKind kind) {
  switch (kind) {
    case DomainKind::Square:
    case DomainKind::SlitSquare: return 2.0;
    case DomainKind::LShape: return 3.0;
    case DomainKind::Disk: return std::numbers::pi;
  }
  return 0.0;
}

double domain_perimeter(DomainKind kind) {
  switch (kind) {
    case DomainKind::Square: return 4.0 * std::numbers::sqrt2;
    case DomainKind::SlitSquare: return 5.0 * std::numbers::sqrt2;
    case DomainKind::LShape: return 8.0;
    case DomainKind::Disk: return 2.0 * std::numbers::pi;
  }
  return 0.0;
}

double largest_interior_angle(DomainKind kind) {
  switch (kind) {
    case DomainKind::Square: return std::numbers::pi / 2.0;
    case DomainKind::LShape: return 1.5 * std::numbers::pi;
    case DomainKind::SlitSquare: return 2.0 * std::numbers::pi;
    case DomainKind::Disk: return std::numbers::pi;
  }
  return 0.0;
}

Mesh::Mesh(DomainKind kind, std::vector<Point> vertices, std::vector<Cell> cells,
           std::vector<int> parent)
    : kind_(kind), vertices_(std::move(vertices)), cells_(std::move(cells)),
      parent_(std::move(parent)) {
  if (parent_.empty()) parent_.assign(cells_.size(), -1);
  if (parent_.size() != cells_.size()) throw MeshError("Mesh: parent size mismatch");
  build_topology();
}

void Mesh::build_topology() {
  const int nv = num_vertices();
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(cells_.size() * 2);
  cell_edges_.assign(cells_.size(), {-1, -1, -1});
  edges_.clear();
  edge_cells_.clear();
  for (int c = 0; c < num_cells(); ++c) {
    const Cell& v = cells_[c];
    for (int i = 0; i < 3; ++i) {
      if (v[i] < 0 || v[i] >= nv) {
        throw MeshError("Mesh: cell " + std::to_string(c) + " references a missing vertex");
      }
    }
    if (!(signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]) > 0.0)) {
      throw MeshError("Mesh: cell " + std::to_string(c) + " has non-positive area");
    }
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3], b = v[(i + 2) % 3];
      const auto [it, inserted] = index.try_emplace(edge_key(a, b), num_edges());
      if (inserted) {
        edges_.push_back({a, b});
        edge_cells_.push_back({c, -1});
      } else {
        auto& inc = edge_cells_[it->second];
        if (inc[1] != -1) {
          throw MeshError("Mesh: edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") has more than two cells");
        }
        inc[1] = c;
      }
      cell_edges_[c][i] = it->second;
    }
  }
  boundary_.assign(edges_.size(), 0);
  curved_.assign(vertices_.size(), 0);
  for (int e = 0; e < num_edges(); ++e) {
    if (edge_cells_[e][1] != -1) continue;
    boundary_[e] = 1;
    if (kind_ == DomainKind::Disk) {
      curved_[edges_[e][0]] = 1;
      curved_[edges_[e][1]] = 1;
    }
  }
}

int Mesh::num_boundary_edges() const {
  return static_cast<int>(std::count(boundary_.begin(), boundary_.end(), 1));
}

int Mesh::local_edge_index(int c, int e) const {
  for (int i = 0; i < 3; ++i) {
    if (cell_edges_[c][i] == e) return i;
  }
  return -1;
}

double Mesh::cell_area(int c) const {
  const Cell& v = cells_[c];
  return signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

double Mesh::cell_diameter(int c) const {
  const Cell& v = cells_[c];
  return std::max({(vertices_[v[0]] - vertices_[v[1]]).norm(),
                   (vertices_[v[1]] - vertices_[v[2]]).norm(),
                   (vertices_[v[2]] - vertices_[v[0]]).norm()});
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

double Mesh::min_angle() const {
  double angle = std::numbers::pi;
  for (const Cell& v : cells_) {
    for (int i = 0; i < 3; ++i) {
      const Point a = vertices_[v[(i + 1) % 3]] - vertices_[v[i]];
      const Point b = vertices_[v[(i + 2) % 3]] - vertices_[v[i]];
      const double cosine = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
      angle = std::min(angle, std::acos(cosine));
    }
  }
  return angle;
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int c = 0; c < num_cells(); ++c) area += cell_area(c);
  return area;
}

double Mesh::boundary_length() const {
  double length = 0.0;
  for (int e = 0; e < num_edges(); ++e) {
    if (boundary_[e]) length += edge_length(e);
  }
  return length;
}

Point Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e][0]] + vertices_[edges_[e][1]]);
}

double Mesh::edge_length(int e) const {
  return (vertices_[edges_[e][0]] - vertices_[edges_[e][1]]).norm();
}

Mesh build_domain(DomainKind kind, double target_h) {
  if (!(target_h > 0.0) || !std::isfinite(target_h)) {
    throw MeshError("build_domain: target_h must be positive and finite");
  }
  switch (kind) {
    case DomainKind::Square:
    case DomainKind::SlitSquare: return square_like(kind, target_h);
    case DomainKind::LShape: return lshape(target_h);
    case DomainKind::Disk: return disk(target_h);
  }
  throw MeshError("build_domain: unknown domain");
}

Mesh build_level(DomainKind kind, int resolution) {
  if (resolution < 0 || (resolution == 0 && kind != DomainKind::Disk)) {
    throw MeshError("build_level: resolution must be positive");
  }
  switch (kind) {
    case DomainKind::Square: return square_like(kind, 2.0 * kHalfSide / resolution);
    case DomainKind::SlitSquare:
      if (resolution % 2 != 0) throw MeshError("build_level: the slit square needs an even grid");
      return square_like(kind, 2.0 * kHalfSide / resolution);
    case DomainKind::LShape: return lshape(1.0 / resolution);
    case DomainKind::Disk: return disk_refined(resolution);
  }
  throw MeshError("build_level: unknown domain");
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point> vertices = mesh.vertices();
  const int nv = mesh.num_vertices();
  vertices.reserve(nv + mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) vertices.push_back(new_midpoint(mesh, e));

  std::vector<Cell> cells;
  std::vector<int> parent;
  cells.reserve(4 * mesh.cells().size());
  parent.reserve(4 * mesh.cells().size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto [v0, v1, v2] = mesh.cells()[c];
    const auto& ce = mesh.cell_edges()[c];
    const int m12 = nv + ce[0], m20 = nv + ce[1], m01 = nv + ce[2];
    // Each child keeps its refinement edge parallel to the parent's.
    cells.push_back({v0, m01, m20});
    cells.push_back({m01, v1, m12});
    cells.push_back({m20, m12, v2});
    cells.push_back({m12, m20, m01});
    parent.insert(parent.end(), 4, c);
  }
  return Mesh(mesh.kind(), std::move(vertices), std::move(cells), std::move(parent));
}

Mesh refine_bisect(const Mesh& mesh, const std::set<int>& marked) {
  if (marked.empty()) {
    std::vector<int> parent(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) parent[c] = c;
    return Mesh(mesh.kind(), mesh.vertices(), mesh.cells(), std::move(parent));
  }

  std::vector<char> split(mesh.num_edges(), 0);
  std::deque<int> queue;
  auto mark_edge = [&](int e) {
    if (split[e]) return;
    split[e] = 1;
    for (int c : mesh.edge_cells()[e]) {
      if (c >= 0) queue.push_back(c);
    }
  };
  for (int c : marked) {
    if (c < 0 || c >= mesh.num_cells()) throw MeshError("refine_bisect: marked cell out of range");
    mark_edge(mesh.cell_edges()[c][0]);
  }
  // Closure: a cell with any split edge must also split its refinement edge.
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    mark_edge(mesh.cell_edges()[c][0]);
  }

  std::vector<Point> vertices = mesh.vertices();
  std::vector<int> mid(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!split[e]) continue;
    mid[e] = static_cast<int>(vertices.size());
    vertices.push_back(new_midpoint(mesh, e));
  }

  std::vector<Cell> cells;
  std::vector<int> parent;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto [v0, v1, v2] = mesh.cells()[c];
    const auto [e0, e1, e2] = mesh.cell_edges()[c];
    auto emit = [&](const Cell& cell) {
      cells.push_back(cell);
      parent.push_back(c);
    };
    if (!split[e0]) {
      emit({v0, v1, v2});
      continue;
    }
    const int m = mid[e0];
    // Children (m, v0, v1) and (m, v2, v0) inherit e2 and e1 as refinement edges.
    if (split[e2]) {
      emit({mid[e2], m, v0});
      emit({mid[e2], v1, m});
    } else {
      emit({m, v0, v1});
    }
    if (split[e1]) {
      emit({mid[e1], m, v2});
      emit({mid[e1], v0, m});
    } else {
      emit({m, v2, v0});
    }
  }
  return Mesh(mesh.kind(), std::move(vertices), std::move(cells), std::move(parent));
}

std::vector<EdgeGeometry> edge_geometry(const Mesh& mesh) {
  std::vector<EdgeGeometry> out(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Point& a = mesh.vertices()[mesh.edges()[e][0]];
    const Point& b = mesh.vertices()[mesh.edges()[e][1]];
    EdgeGeometry& g = out[e];
    g.midpoint = 0.5 * (a + b);
    g.length = (b - a).norm();
    const Point t = (b - a) / g.length;
    g.normal = Point(t.y(), -t.x());
    const int k1 = mesh.edge_cells()[e][0];
    const int local = mesh.local_edge_index(k1, e);
    const Point& opposite = mesh.vertices()[mesh.cells()[k1][local]];
    if (g.normal.dot(g.midpoint - opposite) < 0.0) g.normal = -g.normal;
    g.tangent = Point(-g.normal.y(), g.normal.x());
  }
  return out;
}

}  // namespace steklov
