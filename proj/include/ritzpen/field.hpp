#pragma once

#include <functional>
#include <utility>

#include "ritzpen/geometry.hpp"

namespace ritzpen {

/// Pointwise value and (weak) gradient of a scalar field.
struct ValueGrad {
  double value = 0.0;
  Vec2 grad;
};

/// A scalar field on one of the supported domains, evaluated pointwise
/// with its gradient.  Finite element functions, network functions and
/// closed-form solutions all flow through this one type, so norms and
/// energies are written once.
class DiscreteFunction {
public:
  using Eval = std::function<ValueGrad(const Vec2&)>;

  DiscreteFunction() = default;
  DiscreteFunction(DomainKind domain, Eval eval)
      : domain_(domain), eval_(std::move(eval)) {}

  ValueGrad operator()(const Vec2& p) const { return eval_(p); }
  DomainKind domain() const { return domain_; }
  explicit operator bool() const { return static_cast<bool>(eval_); }

private:
  DomainKind domain_ = DomainKind::interval;
  Eval eval_;
};

DiscreteFunction constant_field(DomainKind domain, double value);
DiscreteFunction operator+(const DiscreteFunction& u, const DiscreteFunction& v);
DiscreteFunction operator-(const DiscreteFunction& u, const DiscreteFunction& v);
DiscreteFunction operator*(double s, const DiscreteFunction& u);

/// Quadrature of a pointwise integrand over the mesh volume / boundary.
double volume_integral(const DomainMesh& mesh,
                       const std::function<double(const Vec2&)>& integrand);
double boundary_integral(const DomainMesh& mesh,
                         const std::function<double(const Vec2&)>& integrand);

double l2_norm(const DiscreteFunction& u, const DomainMesh& mesh);
double h1_seminorm(const DiscreteFunction& u, const DomainMesh& mesh);
double h1_norm(const DiscreteFunction& u, const DomainMesh& mesh);
double boundary_l2_norm(const DiscreteFunction& u, const DomainMesh& mesh);

double l2_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                   const DomainMesh& mesh);
double h1_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                   const DomainMesh& mesh);
double boundary_l2_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                            const DomainMesh& mesh);

/// Largest deviation between the field's reported gradient and a central
/// finite difference of its values over the given sample points.
double max_gradient_deviation(const DiscreteFunction& u,
                              const std::vector<Vec2>& samples, double step);

/// Exact outward unit normal of the domain at a boundary point.
Vec2 outward_normal_at(const DomainMesh& mesh, const Vec2& p);

}  // namespace ritzpen
