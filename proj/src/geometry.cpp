#include "ritzpen/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "ritzpen/errors.hpp"

namespace ritzpen {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::interval: return "interval";
    case DomainKind::unit_square: return "unit_square";
    case DomainKind::unit_disk_polar: return "unit_disk_polar";
  }
  throw ContractError("unhandled DomainKind");
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "interval") return DomainKind::interval;
  if (name == "unit_square") return DomainKind::unit_square;
  if (name == "unit_disk_polar") return DomainKind::unit_disk_polar;
  throw ConfigError("unknown domain kind '" + name +
                    "' (expected interval, unit_square or unit_disk_polar)");
}

int dimension(DomainKind kind) {
  return kind == DomainKind::interval ? 1 : 2;
}

const QuadratureRule& segment_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const double offset = 0.5 * std::sqrt(0.6);
    r.points = {{0.5 - offset, 0.0}, {0.5, 0.0}, {0.5 + offset, 0.0}};
    r.weights = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
    r.exactness_degree = 5;
    r.reference_measure = 1.0;
    return r;
  }();
  return rule;
}

const QuadratureRule& triangle_rule() {
  // Two symmetric orbits of barycentric points, exact through degree 4
  // on the reference triangle (0,0)-(1,0)-(0,1).
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const double a = 0.445948490915965;
    const double b = 0.091576213509771;
    const double wa = 0.223381589678011 / 2.0;
    const double wb = 0.109951743655322 / 2.0;
    r.points = {{a, a},          {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a},
                {b, b},          {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
    r.weights = {wa, wa, wa, wb, wb, wb};
    r.exactness_degree = 4;
    r.reference_measure = 0.5;
    return r;
  }();
  return rule;
}

const QuadratureRule& tensor_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const QuadratureRule& seg = segment_rule();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.points.push_back({seg.points[i].x, seg.points[j].x});
        r.weights.push_back(seg.weights[i] * seg.weights[j]);
      }
    r.exactness_degree = 5;
    r.reference_measure = 1.0;
    return r;
  }();
  return rule;
}

void DomainMesh::build_interval(int n) {
  kind_ = DomainKind::interval;
  resolution_ = n;
  mesh_size_ = 1.0 / n;
  points_per_cell_ = 3;
  points_per_facet_ = 1;

  nodes_.resize(n + 1);
  for (int i = 0; i <= n; ++i) nodes_[i] = {static_cast<double>(i) / n, 0.0};

  const QuadratureRule& seg = segment_rule();
  cells_.resize(n);
  for (int i = 0; i < n; ++i) {
    Cell& c = cells_[i];
    c.nodes = {i, i + 1, -1, -1};
    c.node_count = 2;
    const double x0 = nodes_[i].x;
    const double len = nodes_[i + 1].x - x0;
    c.measure = len;
    for (int q = 0; q < 3; ++q)
      volume_quad_.push_back({{x0 + seg.points[q].x * len, 0.0}, seg.weights[q] * len});
  }

  // Point facets at the two endpoints; a single unit-weight quadrature
  // point realizes u(0)v(0) + u(1)v(1) as a boundary "integral".
  facets_.resize(2);
  facets_[0] = {{0, -1}, 1, 0, {-1.0, 0.0}, 1.0};
  facets_[1] = {{n, -1}, 1, n - 1, {1.0, 0.0}, 1.0};
  boundary_quad_.push_back({nodes_[0], 1.0});
  boundary_quad_.push_back({nodes_[n], 1.0});

  boundary_node_.assign(nodes_.size(), 0);
  boundary_node_[0] = 1;
  boundary_node_[n] = 1;
}

void DomainMesh::build_unit_square(int n) {
  kind_ = DomainKind::unit_square;
  resolution_ = n;
  mesh_size_ = 1.0 / n;
  points_per_cell_ = 6;
  points_per_facet_ = 3;

  // (n+1)^2 grid nodes followed by n^2 cell centers.
  auto grid = [n](int i, int j) { return j * (n + 1) + i; };
  auto center = [n](int i, int j) { return (n + 1) * (n + 1) + j * n + i; };
  nodes_.resize((n + 1) * (n + 1) + n * n);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      nodes_[grid(i, j)] = {static_cast<double>(i) / n, static_cast<double>(j) / n};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      nodes_[center(i, j)] = {(i + 0.5) / n, (j + 0.5) / n};

  // Each grid square is cut into 4 triangles through its center node,
  // ordered south, east, north, west.
  const QuadratureRule& tri = triangle_rule();
  cells_.reserve(4 * n * n);
  auto add_triangle = [&](int a, int b, int c) {
    Cell cell;
    cell.nodes = {a, b, c, -1};
    cell.node_count = 3;
    const Vec2& p0 = nodes_[a];
    const Vec2 e1 = nodes_[b] - p0;
    const Vec2 e2 = nodes_[c] - p0;
    const double jac = e1.x * e2.y - e1.y * e2.x;
    cell.measure = 0.5 * jac;
    for (std::size_t q = 0; q < tri.points.size(); ++q) {
      const Vec2 ref = tri.points[q];
      volume_quad_.push_back({p0 + ref.x * e1 + ref.y * e2, tri.weights[q] * 2.0 * cell.measure});
    }
    cells_.push_back(cell);
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int sw = grid(i, j), se = grid(i + 1, j);
      const int ne = grid(i + 1, j + 1), nw = grid(i, j + 1);
      const int c = center(i, j);
      add_triangle(sw, se, c);
      add_triangle(se, ne, c);
      add_triangle(ne, nw, c);
      add_triangle(nw, sw, c);
    }

  const QuadratureRule& seg = segment_rule();
  auto add_facet = [&](int a, int b, int parent, Vec2 normal) {
    BoundaryFacet f;
    f.nodes = {a, b};
    f.node_count = 2;
    f.parent_cell = parent;
    f.outward_normal = normal;
    f.measure = (nodes_[b] - nodes_[a]).norm();
    facets_.push_back(f);
    const Vec2 p0 = nodes_[a];
    const Vec2 d = nodes_[b] - p0;
    for (int q = 0; q < 3; ++q)
      boundary_quad_.push_back({p0 + seg.points[q].x * d, seg.weights[q] * f.measure});
  };
  auto square_cell = [n](int i, int j, int tri_index) { return 4 * (j * n + i) + tri_index; };
  for (int i = 0; i < n; ++i)
    add_facet(grid(i, 0), grid(i + 1, 0), square_cell(i, 0, 0), {0.0, -1.0});
  for (int j = 0; j < n; ++j)
    add_facet(grid(n, j), grid(n, j + 1), square_cell(n - 1, j, 1), {1.0, 0.0});
  for (int i = 0; i < n; ++i)
    add_facet(grid(i + 1, n), grid(i, n), square_cell(i, n - 1, 2), {0.0, 1.0});
  for (int j = 0; j < n; ++j)
    add_facet(grid(0, j + 1), grid(0, j), square_cell(0, j, 3), {-1.0, 0.0});

  boundary_node_.assign(nodes_.size(), 0);
  for (int i = 0; i <= n; ++i) {
    boundary_node_[grid(i, 0)] = 1;
    boundary_node_[grid(i, n)] = 1;
    boundary_node_[grid(0, i)] = 1;
    boundary_node_[grid(n, i)] = 1;
  }
}

void DomainMesh::build_unit_disk_polar(int n) {
  kind_ = DomainKind::unit_disk_polar;
  resolution_ = n;
  radial_cells_ = n;
  angular_cells_ = 4 * n;
  // h is the boundary arc pitch 2*pi / (4n); it halves exactly under
  // refinement because scaling by powers of two is exact.
  mesh_size_ = M_PI / (2.0 * n);
  points_per_cell_ = 9;
  points_per_facet_ = 3;

  const int nr = radial_cells_;
  const int nt = angular_cells_;
  const double dr = 1.0 / nr;
  const double dt = 2.0 * M_PI / nt;

  // Node 0 is the disk center; ring i (radius i/nr) holds nt nodes.
  auto ring = [nt](int i, int j) { return 1 + (i - 1) * nt + ((j % nt) + nt) % nt; };
  nodes_.resize(1 + nr * nt);
  nodes_[0] = {0.0, 0.0};
  for (int i = 1; i <= nr; ++i) {
    const double r = static_cast<double>(i) / nr;
    for (int j = 0; j < nt; ++j)
      nodes_[ring(i, j)] = {r * std::cos(dt * j), r * std::sin(dt * j)};
  }

  // Cells are annular sectors, affine in (r, theta).  The innermost ring
  // degenerates: both inner corners are the center node.
  const QuadratureRule& tq = tensor_rule();
  cells_.reserve(nr * nt);
  for (int i = 0; i < nr; ++i) {
    const double r0 = static_cast<double>(i) / nr;
    for (int j = 0; j < nt; ++j) {
      Cell c;
      const int inner0 = (i == 0) ? 0 : ring(i, j);
      const int inner1 = (i == 0) ? 0 : ring(i, j + 1);
      c.nodes = {inner0, ring(i + 1, j), ring(i + 1, j + 1), inner1};
      c.node_count = 4;
      c.measure = dt * (2.0 * r0 * dr + dr * dr) / 2.0;
      const double t0 = dt * j;
      for (std::size_t q = 0; q < tq.points.size(); ++q) {
        const double r = r0 + tq.points[q].x * dr;
        const double t = t0 + tq.points[q].y * dt;
        volume_quad_.push_back(
            {{r * std::cos(t), r * std::sin(t)}, tq.weights[q] * r * dr * dt});
      }
      cells_.push_back(c);
    }
  }

  // Boundary facets are the outer arcs; their stored normal is the exact
  // outward normal at the arc midpoint.
  const QuadratureRule& seg = segment_rule();
  for (int j = 0; j < nt; ++j) {
    BoundaryFacet f;
    f.nodes = {ring(nr, j), ring(nr, j + 1)};
    f.node_count = 2;
    f.parent_cell = (nr - 1) * nt + j;
    const double tm = dt * (j + 0.5);
    f.outward_normal = {std::cos(tm), std::sin(tm)};
    f.measure = dt;
    facets_.push_back(f);
    for (int q = 0; q < 3; ++q) {
      const double t = dt * j + seg.points[q].x * dt;
      boundary_quad_.push_back({{std::cos(t), std::sin(t)}, seg.weights[q] * dt});
    }
  }

  boundary_node_.assign(nodes_.size(), 0);
  for (int j = 0; j < nt; ++j) boundary_node_[ring(nr, j)] = 1;
}

int DomainMesh::boundary_node_count() const {
  return static_cast<int>(std::count(boundary_node_.begin(), boundary_node_.end(), char(1)));
}

double DomainMesh::measure() const {
  double s = 0.0;
  for (const QuadPoint& q : volume_quad_) s += q.w;
  return s;
}

double DomainMesh::boundary_measure() const {
  double s = 0.0;
  for (const QuadPoint& q : boundary_quad_) s += q.w;
  return s;
}

DomainMesh build_mesh(DomainKind kind, int resolution) {
  // Degenerate resolutions are rejected rather than clamped so sweep
  // logs never silently contain a coarser mesh than requested.
  require_config(resolution >= 2, "mesh resolution must be at least 2");
  DomainMesh mesh;
  switch (kind) {
    case DomainKind::interval: mesh.build_interval(resolution); break;
    case DomainKind::unit_square: mesh.build_unit_square(resolution); break;
    case DomainKind::unit_disk_polar: mesh.build_unit_disk_polar(resolution); break;
  }
  return mesh;
}

MeshPtr make_mesh(DomainKind kind, int resolution) {
  return std::make_shared<DomainMesh>(build_mesh(kind, resolution));
}

}  // namespace ritzpen
