#include "ritzpen/problem.hpp"

#include <cmath>

#include "ritzpen/errors.hpp"
#include "ritzpen/tolerances.hpp"

namespace ritzpen {

PenalizedProblem PenalizedProblem::penalized(MeshPtr mesh, CoefficientField A,
                                             RightHandSide f, double lambda) {
  require_config(static_cast<bool>(mesh), "problem needs a mesh");
  require_config(lambda > 0.0, "penalty parameter must be positive");
  PenalizedProblem p;
  p.mesh = std::move(mesh);
  p.A = std::move(A);
  p.f = std::move(f);
  p.lambda = lambda;
  p.boundary_mode = BoundaryMode::penalty;
  return p;
}

PenalizedProblem PenalizedProblem::natural(MeshPtr mesh, CoefficientField A,
                                           RightHandSide f, bool mass_term) {
  require_config(static_cast<bool>(mesh), "problem needs a mesh");
  PenalizedProblem p;
  p.mesh = std::move(mesh);
  p.A = std::move(A);
  p.f = std::move(f);
  p.boundary_mode = BoundaryMode::natural;
  p.mass_term = mass_term;
  return p;
}

double bilinear_a(const PenalizedProblem& p, const DiscreteFunction& u,
                  const DiscreteFunction& v) {
  double s = 0.0;
  for (const QuadPoint& q : p.mesh->volume_quadrature()) {
    const ValueGrad uu = u(q.x);
    const ValueGrad vv = v(q.x);
    double integrand = (p.A(q.x) * uu.grad).dot(vv.grad);
    if (p.mass_term) integrand += uu.value * vv.value;
    s += q.w * integrand;
  }
  return s;
}

static double boundary_inner(const PenalizedProblem& p, const DiscreteFunction& u,
                             const DiscreteFunction& v) {
  double s = 0.0;
  for (const QuadPoint& q : p.mesh->boundary_quadrature())
    s += q.w * u(q.x).value * v(q.x).value;
  return s;
}

double bilinear_a_lambda(const PenalizedProblem& p, const DiscreteFunction& u,
                         const DiscreteFunction& v) {
  require(p.boundary_mode == BoundaryMode::penalty,
          "a_lambda is undefined for a natural-mode problem");
  return bilinear_a(p, u, v) + p.lambda * boundary_inner(p, u, v);
}

double energy(const PenalizedProblem& p, const DiscreteFunction& u) {
  // One sweep over the quadrature so the hot path of network training
  // evaluates u once per point.
  double s = 0.0;
  for (const QuadPoint& q : p.mesh->volume_quadrature()) {
    const ValueGrad uu = u(q.x);
    double integrand = 0.5 * (p.A(q.x) * uu.grad).dot(uu.grad) - p.f(q.x) * uu.value;
    if (p.mass_term) integrand += 0.5 * uu.value * uu.value;
    s += q.w * integrand;
  }
  if (p.boundary_mode == BoundaryMode::penalty) {
    for (const QuadPoint& q : p.mesh->boundary_quadrature()) {
      const double val = u(q.x).value;
      s += q.w * 0.5 * p.lambda * val * val;
    }
  }
  return s;
}

GapResult clamp_gap(double candidate_energy, double reference_min) {
  GapResult g;
  g.raw = candidate_energy - reference_min;
  g.delta = std::max(g.raw, 0.0);
  g.flagged = g.raw < -tol::gap_noise;
  return g;
}

GapResult optimization_gap(const PenalizedProblem& p, const DiscreteFunction& u,
                           double reference_min) {
  return clamp_gap(energy(p, u), reference_min);
}

}  // namespace ritzpen
