#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace ritzpen {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {s * x, s * y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

enum class DomainKind { interval, unit_square, unit_disk_polar };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);
int dimension(DomainKind kind);

/// Quadrature rule on a reference element.  Points live in reference
/// coordinates; weights sum to the reference measure.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;
  double reference_measure = 0.0;
};

/// 3-point Gauss-Legendre on [0,1]; exact through degree 5.
const QuadratureRule& segment_rule();
/// 6-point rule on the unit right triangle; exact through degree 4.
const QuadratureRule& triangle_rule();
/// 3x3 tensor Gauss-Legendre on [0,1]^2; exact through degree 5 per axis.
const QuadratureRule& tensor_rule();

/// Physical quadrature point (position and weight).
struct QuadPoint {
  Vec2 x;
  double w = 0.0;
};

/// Mesh cell.  Intervals use 2 nodes, triangles 3, polar quads 4.
/// Degenerate polar quads at the disk center repeat the center node.
struct Cell {
  std::array<int, 4> nodes = {-1, -1, -1, -1};
  int node_count = 0;
  double measure = 0.0;
};

/// Boundary facet with a handle to the cell it belongs to, so traces of
/// cell-local basis functions can be evaluated without point location.
struct BoundaryFacet {
  std::array<int, 2> nodes = {-1, -1};
  int node_count = 0;
  int parent_cell = -1;
  Vec2 outward_normal;
  double measure = 0.0;
};

/// Conforming mesh of one of the supported domains together with volume
/// and boundary quadrature.  Quadrature points are stored cell by cell
/// (facet by facet) in a fixed order, which keeps every reduction over
/// them deterministic.
class DomainMesh {
public:
  DomainKind kind() const { return kind_; }
  int resolution() const { return resolution_; }

  /// Mesh size parameter h.  Halves exactly when the resolution doubles.
  double mesh_size() const { return mesh_size_; }

  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }

  const std::vector<QuadPoint>& volume_quadrature() const { return volume_quad_; }
  const std::vector<QuadPoint>& boundary_quadrature() const { return boundary_quad_; }

  /// Number of quadrature points per cell / per boundary facet (fixed).
  int points_per_cell() const { return points_per_cell_; }
  int points_per_facet() const { return points_per_facet_; }

  bool is_boundary_node(int node) const { return boundary_node_[node] != 0; }
  int boundary_node_count() const;

  /// Sum of all volume quadrature weights (the discrete domain measure).
  double measure() const;
  /// Sum of all boundary quadrature weights.
  double boundary_measure() const;

  // Structure parameters of the polar disk mesh (radial x angular).
  int radial_cells() const { return radial_cells_; }
  int angular_cells() const { return angular_cells_; }

  friend DomainMesh build_mesh(DomainKind kind, int resolution);

private:
  DomainMesh() = default;

  void build_interval(int n);
  void build_unit_square(int n);
  void build_unit_disk_polar(int n);

  DomainKind kind_ = DomainKind::interval;
  int resolution_ = 0;
  double mesh_size_ = 0.0;
  int points_per_cell_ = 0;
  int points_per_facet_ = 0;
  int radial_cells_ = 0;
  int angular_cells_ = 0;
  std::vector<Vec2> nodes_;
  std::vector<Cell> cells_;
  std::vector<BoundaryFacet> facets_;
  std::vector<QuadPoint> volume_quad_;
  std::vector<QuadPoint> boundary_quad_;
  std::vector<char> boundary_node_;
};

using MeshPtr = std::shared_ptr<const DomainMesh>;

/// Build a mesh of the given domain at the given resolution:
///   interval        n uniform segments of [0,1], h = 1/n
///   unit_square     n x n squares, each split into 4 triangles through
///                   its center, h = 1/n
///   unit_disk_polar n radial times 4n angular polar cells, h = pi/(2n)
///                   (the boundary arc pitch)
DomainMesh build_mesh(DomainKind kind, int resolution);
MeshPtr make_mesh(DomainKind kind, int resolution);

}  // namespace ritzpen
