#pragma once

#include <functional>
#include <vector>

#include "ritzpen/field.hpp"
#include "ritzpen/geometry.hpp"

namespace ritzpen {

/// Piecewise-linear (bilinear in polar coordinates on the disk) nodal
/// family on a mesh.  No boundary conditions are built in; essential
/// conditions are always handled by the penalty term.
class FiniteElementFamily {
public:
  explicit FiniteElementFamily(MeshPtr mesh);

  int dof_count() const { return static_cast<int>(mesh_->nodes().size()); }
  const DomainMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }

  /// Values and Cartesian gradients of the cell's nodal basis functions
  /// at a physical point.  The innermost disk cells repeat the center
  /// node; callers accumulate per node index, which handles that
  /// naturally.
  struct LocalBasis {
    std::array<int, 4> nodes = {-1, -1, -1, -1};
    std::array<double, 4> value = {0.0, 0.0, 0.0, 0.0};
    std::array<Vec2, 4> grad;
    int count = 0;
  };
  LocalBasis basis_at(int cell, const Vec2& p) const;

  /// Index of the cell containing p (clamped to the domain).
  int locate_cell(const Vec2& p) const;

  ValueGrad evaluate(const std::vector<double>& coefficients, const Vec2& p) const;

  /// Wraps a coefficient vector as a DiscreteFunction.
  DiscreteFunction function(std::vector<double> coefficients) const;

  /// Nodal interpolation coefficients of a pointwise function.
  std::vector<double> interpolate(const std::function<double(const Vec2&)>& g) const;

private:
  MeshPtr mesh_;
};

/// Nodal interpolant of g as a DiscreteFunction; exact on the family
/// itself (reproduces piecewise-linear functions).
DiscreteFunction fe_interpolate(const FiniteElementFamily& fam,
                                const std::function<double(const Vec2&)>& g);

}  // namespace ritzpen
