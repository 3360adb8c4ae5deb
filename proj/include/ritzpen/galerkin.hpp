#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "ritzpen/fe_space.hpp"
#include "ritzpen/problem.hpp"

namespace ritzpen {

/// Assembled Galerkin system K c = F with K_ij = a_lambda(phi_i, phi_j)
/// (or a(phi_i, phi_j) in natural mode) and F_i = (f, phi_i).
struct GalerkinSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd load;
  int dof_count = 0;
};

GalerkinSystem assemble_system(const PenalizedProblem& p, const FiniteElementFamily& fam);

enum class LinearSolverKind { sparse_cholesky, conjugate_gradient };
std::string to_string(LinearSolverKind k);

struct LinearSolveResult {
  Eigen::VectorXd solution;
  double relative_residual = 0.0;
  LinearSolverKind solver_used = LinearSolverKind::sparse_cholesky;
};

/// Solve an SPD system.  Sparse Cholesky (LDLT with fill-reducing
/// ordering) by default; the conjugate-gradient fallback with a Jacobi
/// preconditioner exists for memory-constrained settings and can be
/// requested directly.  Indefiniteness is reported with the offending
/// pivot index; a residual above tol::linear_residual is an error.
LinearSolveResult solve_system(const GalerkinSystem& sys,
                               LinearSolverKind preferred = LinearSolverKind::sparse_cholesky);

struct FESolution {
  std::vector<double> coefficients;
  DiscreteFunction function;
  /// Minimum of the discretized energy over the family; valid as the
  /// reference_min of optimization gaps for this family.
  double energy = 0.0;
  double relative_residual = 0.0;
  LinearSolverKind solver_used = LinearSolverKind::sparse_cholesky;
};

/// Exact minimization of the (penalized) energy over the FE family.
FESolution solve_linear(const PenalizedProblem& p, const FiniteElementFamily& fam,
                        LinearSolverKind preferred = LinearSolverKind::sparse_cholesky);

/// Coefficients of the zero-trace part u_0 of u: the Galerkin solution
/// in the interior (zero-trace) subspace of a(u_0, v) = a(u, v).  The
/// remainder u - u_0 is discretely A-harmonic.
std::vector<double> zero_trace_part(const CoefficientField& A,
                                    const FiniteElementFamily& fam,
                                    const std::vector<double>& u_coeffs);

}  // namespace ritzpen
