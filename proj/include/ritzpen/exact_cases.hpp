#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ritzpen/coefficients.hpp"
#include "ritzpen/field.hpp"
#include "ritzpen/geometry.hpp"

namespace ritzpen {

/// A problem instance with closed-form minimizers, used as ground truth
/// by the verification suite.  u_star is the zero-trace limit solution,
/// u_lambda(lambda) the penalized minimizer where a closed form exists.
struct ExactSolutionCase {
  std::string id;
  DomainKind domain = DomainKind::interval;
  CoefficientField A;
  RightHandSide f;
  DiscreteFunction u_star;
  std::function<DiscreteFunction(double)> u_lambda;  ///< empty if no closed form
  /// Closed-form penalty gap ||u_lambda - u_star||_{H1}; empty if none.
  std::function<double(double)> gap_h1;
  /// Conormal derivative (A grad u_star) . n on the boundary, supplied
  /// analytically.  Present for the disk cases used by the spectral
  /// reconstruction; empty otherwise.
  std::function<double(const Vec2&)> conormal;
  /// True near points where the strong form -div(A grad u) = f fails
  /// pointwise (discontinuities of f); validation sampling skips them.
  std::function<bool(const Vec2&)> singular_set;
};

const std::vector<std::string>& case_catalog();

/// Lookup by id; unknown ids are a configuration error.
ExactSolutionCase case_by_id(const std::string& id);

struct CaseResiduals {
  double max_pde_residual = 0.0;
  double max_trace_violation = 0.0;
};

/// Finite-difference audit of a catalog entry: -div(A grad u_star) = f
/// at random interior sample points (flux divergence by central
/// differences of the analytic gradient) and zero trace at random
/// boundary points.
CaseResiduals validate_case(const ExactSolutionCase& c, int samples, std::uint64_t seed);

}  // namespace ritzpen
