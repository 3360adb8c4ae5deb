#pragma once

#include <functional>
#include <string>
#include <utility>

#include "ritzpen/field.hpp"
#include "ritzpen/geometry.hpp"

namespace ritzpen {

/// Symmetric 2x2 matrix value of a coefficient field.  One-dimensional
/// problems only use the xx entry.
struct Mat2 {
  double xx = 1.0, xy = 0.0, yx = 0.0, yy = 1.0;

  Vec2 operator*(const Vec2& v) const {
    return {xx * v.x + xy * v.y, yx * v.x + yy * v.y};
  }
};

/// Elliptic coefficient A with its ellipticity window [alpha, beta]:
/// alpha |xi|^2 <= xi . A(x) xi <= beta |xi|^2.
class CoefficientField {
public:
  using Eval = std::function<Mat2(const Vec2&)>;

  CoefficientField() = default;
  CoefficientField(std::string name, Eval eval, double ellipticity_lower,
                   double bound_upper)
      : name_(std::move(name)),
        eval_(std::move(eval)),
        ellipticity_lower_(ellipticity_lower),
        bound_upper_(bound_upper) {}

  Mat2 operator()(const Vec2& p) const { return eval_(p); }
  const std::string& name() const { return name_; }
  double ellipticity_lower() const { return ellipticity_lower_; }
  double bound_upper() const { return bound_upper_; }

private:
  std::string name_ = "identity";
  Eval eval_ = [](const Vec2&) { return Mat2{}; };
  double ellipticity_lower_ = 1.0;
  double bound_upper_ = 1.0;
};

CoefficientField identity_coefficient();
CoefficientField scaled_identity(double factor);
/// Smoothly varying symmetric field with off-diagonal coupling,
/// ellipticity window [1.2, 2.8].
CoefficientField smooth_anisotropic();

/// Catalog lookup: identity | scaled_identity (factor 2) | smooth_anisotropic.
CoefficientField coefficient_by_name(const std::string& name);

/// Worst symmetry defect and ellipticity-window violation of A over the
/// mesh quadrature points with random test directions.  Both should be
/// ~0 for catalog fields.
struct CoefficientCheck {
  double symmetry_defect = 0.0;
  double window_violation = 0.0;
};
CoefficientCheck check_coefficient(const CoefficientField& A, const DomainMesh& mesh,
                                   std::uint64_t seed, int directions_per_point = 4);

/// Right-hand side density f given pointwise.
class RightHandSide {
public:
  using Eval = std::function<double(const Vec2&)>;

  RightHandSide() = default;
  RightHandSide(std::string name, Eval eval)
      : name_(std::move(name)), eval_(std::move(eval)) {}

  double operator()(const Vec2& p) const { return eval_(p); }
  const std::string& name() const { return name_; }

private:
  std::string name_ = "zero";
  Eval eval_ = [](const Vec2&) { return 0.0; };
};

RightHandSide constant_rhs(double value);

}  // namespace ritzpen
