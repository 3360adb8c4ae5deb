#pragma once

#include <string>
#include <vector>

#include "ritzpen/exact_cases.hpp"
#include "ritzpen/field.hpp"
#include "ritzpen/geometry.hpp"

namespace ritzpen {

/// One analytic Steklov eigenpair on the unit disk with A = I: the
/// harmonic functions r^k cos(k theta), r^k sin(k theta) with boundary
/// eigenvalue k, normalized so that a_1(e_i, e_j) = delta_ij with
/// a_1(u, v) = (grad u, grad v) + (u, v)_boundary.
struct SteklovMode {
  int index = 0;          ///< position j in the 0, 1, 1, 2, 2, ... ordering
  double eigenvalue = 0;  ///< mu_j = angular frequency k
  int frequency = 0;      ///< k
  bool is_sine = false;   ///< cosine modes precede sine modes per frequency
  double normalization = 0.0;
  DiscreteFunction eigenfunction;
};

/// The first `count` modes, ordered by eigenvalue 0, 1, 1, 2, 2, ...
/// with the cosine branch before the sine branch at each frequency.
std::vector<SteklovMode> steklov_modes_disk(int count);

/// Boundary-trace expansion coefficients c_j = (1 + mu_j) int_bdry w e_j ds.
/// Recovering w = sum c_j e_j requires w to be weakly A-harmonic; that
/// is the caller's responsibility and is not checked here.
std::vector<double> fourier_coeffs(const DiscreteFunction& w,
                                   const std::vector<SteklovMode>& modes,
                                   const DomainMesh& mesh);

/// Spectral reconstruction of the penalty gap v_lambda := u_star - u_lambda.
struct GapReconstruction {
  DiscreteFunction v_lambda;         ///< truncated sum (1/lambda) sum c_j e_j
  std::vector<double> coefficients;  ///< damped coefficients c(lambda)_j
  /// Magnitude of the last retained term of the sum, used as a proxy for
  /// the omitted tail.  Zero (to quadrature noise) for catalog cases that
  /// excite finitely many modes below the truncation order.
  double tail_estimate = 0.0;
  bool truncated = false;  ///< tail estimate above the requested tolerance
};

/// Evaluate the solution formula c(lambda)_j = (1 + mu_j)/(1 + mu_j/lambda)
/// times the boundary integral of (conormal derivative of u_star) e_j,
/// and reconstruct v_lambda = (1/lambda) sum c(lambda)_j e_j.  Only the
/// identity coefficient on the unit disk is supported: the analytic mode
/// family exists for no other configuration here.
GapReconstruction penalty_gap_via_formula(const ExactSolutionCase& c, double lambda,
                                          int truncation, const DomainMesh& mesh,
                                          double tail_tolerance = 1e-10);

}  // namespace ritzpen
