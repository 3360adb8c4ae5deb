#pragma once

#include "ritzpen/coefficients.hpp"
#include "ritzpen/field.hpp"
#include "ritzpen/geometry.hpp"

namespace ritzpen {

enum class BoundaryMode { penalty, natural };

/// Elliptic variational problem
///   a(u,v)        = int_Omega A grad u . grad v dx   (+ int uv when the
///                                                      mass term is on)
///   a_lambda(u,v) = a(u,v) + lambda int_bdry u v ds
///   E_lambda(u)   = 1/2 a_lambda(u,u) - int_Omega f u dx
/// In natural mode the boundary term is dropped and lambda is ignored;
/// the mass term turns a into the H^1-like form needed for the Neumann
/// problem -div(A grad u) + u = f.
struct PenalizedProblem {
  MeshPtr mesh;
  CoefficientField A;
  RightHandSide f;
  double lambda = 0.0;
  BoundaryMode boundary_mode = BoundaryMode::penalty;
  bool mass_term = false;

  static PenalizedProblem penalized(MeshPtr mesh, CoefficientField A,
                                    RightHandSide f, double lambda);
  static PenalizedProblem natural(MeshPtr mesh, CoefficientField A,
                                  RightHandSide f, bool mass_term);
};

double bilinear_a(const PenalizedProblem& p, const DiscreteFunction& u,
                  const DiscreteFunction& v);

/// a + lambda * (boundary trace inner product).  Calling this on a
/// natural-mode problem is a contract violation.
double bilinear_a_lambda(const PenalizedProblem& p, const DiscreteFunction& u,
                         const DiscreteFunction& v);

double energy(const PenalizedProblem& p, const DiscreteFunction& u);

/// delta = E(u) - reference_min, clamped at zero.  A clamp larger than
/// the noise tolerance is flagged: it means the reference was not
/// actually a lower energy value.
struct GapResult {
  double delta = 0.0;
  double raw = 0.0;
  bool flagged = false;
};
GapResult optimization_gap(const PenalizedProblem& p, const DiscreteFunction& u,
                           double reference_min);
GapResult clamp_gap(double candidate_energy, double reference_min);

}  // namespace ritzpen
