#include "ritzpen/galerkin.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <sstream>

#include "ritzpen/errors.hpp"
#include "ritzpen/tolerances.hpp"

namespace ritzpen {

std::string to_string(LinearSolverKind k) {
  return k == LinearSolverKind::sparse_cholesky ? "sparse_cholesky" : "conjugate_gradient";
}

GalerkinSystem assemble_system(const PenalizedProblem& p, const FiniteElementFamily& fam) {
  const DomainMesh& mesh = fam.mesh();
  const int n = fam.dof_count();
  GalerkinSystem sys;
  sys.dof_count = n;
  sys.load = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.cells().size() * 16);

  const auto& vq = mesh.volume_quadrature();
  const int ppc = mesh.points_per_cell();
  for (std::size_t cell = 0; cell < mesh.cells().size(); ++cell) {
    for (int q = 0; q < ppc; ++q) {
      const QuadPoint& qp = vq[cell * ppc + q];
      const auto b = fam.basis_at(static_cast<int>(cell), qp.x);
      const Mat2 A = p.A(qp.x);
      const double fval = p.f(qp.x);
      for (int i = 0; i < b.count; ++i) {
        sys.load[b.nodes[i]] += qp.w * fval * b.value[i];
        const Vec2 flux = A * b.grad[i];
        for (int j = 0; j < b.count; ++j) {
          double entry = flux.dot(b.grad[j]);
          if (p.mass_term) entry += b.value[i] * b.value[j];
          triplets.emplace_back(b.nodes[i], b.nodes[j], qp.w * entry);
        }
      }
    }
  }

  if (p.boundary_mode == BoundaryMode::penalty) {
    const auto& bq = mesh.boundary_quadrature();
    const int ppf = mesh.points_per_facet();
    const auto& facets = mesh.boundary_facets();
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
      for (int q = 0; q < ppf; ++q) {
        const QuadPoint& qp = bq[fi * ppf + q];
        const auto b = fam.basis_at(facets[fi].parent_cell, qp.x);
        for (int i = 0; i < b.count; ++i)
          for (int j = 0; j < b.count; ++j)
            triplets.emplace_back(b.nodes[i], b.nodes[j],
                                  qp.w * p.lambda * b.value[i] * b.value[j]);
      }
    }
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

LinearSolveResult solve_system(const GalerkinSystem& sys, LinearSolverKind preferred) {
  LinearSolveResult out;

  if (preferred == LinearSolverKind::sparse_cholesky) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
    try {
      chol.compute(sys.matrix);
      if (chol.info() != Eigen::Success)
        throw NumericalError("sparse Cholesky factorization failed");
      const auto& D = chol.vectorD();
      for (Eigen::Index k = 0; k < D.size(); ++k) {
        if (!(D[k] > 0.0)) {
          std::ostringstream os;
          os << "matrix is not positive definite: nonpositive pivot " << D[k]
             << " at index " << k;
          throw NumericalError(os.str());
        }
      }
      out.solution = chol.solve(sys.load);
      out.solver_used = LinearSolverKind::sparse_cholesky;
    } catch (const std::bad_alloc&) {
      preferred = LinearSolverKind::conjugate_gradient;
    }
  }

  if (preferred == LinearSolverKind::conjugate_gradient) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol::cg_tolerance);
    cg.setMaxIterations(20 * sys.dof_count);
    cg.compute(sys.matrix);
    out.solution = cg.solve(sys.load);
    out.solver_used = LinearSolverKind::conjugate_gradient;
  }

  // Backward-error normalization: ||Kc - F|| measured against
  // ||K||*||c|| + ||F||.  A load-only denominator would reject accurate
  // solves at extreme penalty strength, where ||K|| dwarfs ||F|| and
  // rounding alone puts the raw residual above tolerance.
  const double denom =
      sys.matrix.norm() * out.solution.norm() + sys.load.norm();
  out.relative_residual = denom > 0.0
                              ? (sys.matrix * out.solution - sys.load).norm() / denom
                              : (sys.matrix * out.solution).norm();
  if (!(out.relative_residual <= tol::linear_residual)) {
    std::ostringstream os;
    os << "linear solve residual " << out.relative_residual << " exceeds "
       << tol::linear_residual;
    throw NumericalError(os.str());
  }
  return out;
}

FESolution solve_linear(const PenalizedProblem& p, const FiniteElementFamily& fam,
                        LinearSolverKind preferred) {
  require(p.boundary_mode == BoundaryMode::penalty || p.mass_term,
          "natural mode without the mass term yields a singular system");
  require(p.mesh.get() == &fam.mesh(), "problem and family use different meshes");

  const GalerkinSystem sys = assemble_system(p, fam);
  const LinearSolveResult lin = solve_system(sys, preferred);

  FESolution sol;
  sol.relative_residual = lin.relative_residual;
  sol.solver_used = lin.solver_used;
  // E(c) = 1/2 c^T K c - c^T F, the minimum over the family.
  sol.energy = 0.5 * lin.solution.dot(sys.matrix * lin.solution) - lin.solution.dot(sys.load);
  sol.coefficients.assign(lin.solution.data(), lin.solution.data() + sys.dof_count);
  sol.function = fam.function(sol.coefficients);
  return sol;
}

std::vector<double> zero_trace_part(const CoefficientField& A,
                                    const FiniteElementFamily& fam,
                                    const std::vector<double>& u_coeffs) {
  require(static_cast<int>(u_coeffs.size()) == fam.dof_count(),
          "coefficient vector length must equal dof_count");
  const DomainMesh& mesh = fam.mesh();
  const auto stiffness_problem =
      PenalizedProblem::natural(fam.mesh_ptr(), A, constant_rhs(0.0), false);
  const GalerkinSystem sys = assemble_system(stiffness_problem, fam);

  // Index map onto interior (non-boundary) nodes.
  const int n = fam.dof_count();
  std::vector<int> interior_index(n, -1);
  int m = 0;
  for (int i = 0; i < n; ++i)
    if (!mesh.is_boundary_node(i)) interior_index[i] = m++;
  if (m == 0) return std::vector<double>(n, 0.0);

  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(u_coeffs.data(), n);
  const Eigen::VectorXd rhs_full = sys.matrix * u;

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < n; ++i) {
    if (interior_index[i] < 0) continue;
    rhs[interior_index[i]] = rhs_full[i];
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, i); it; ++it)
      if (interior_index[it.row()] >= 0)
        triplets.emplace_back(interior_index[it.row()], interior_index[i], it.value());
  }
  Eigen::SparseMatrix<double> Kii(m, m);
  Kii.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(Kii);
  if (chol.info() != Eigen::Success)
    throw NumericalError("interior stiffness factorization failed");
  const Eigen::VectorXd x = chol.solve(rhs);

  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (interior_index[i] >= 0) out[i] = x[interior_index[i]];
  return out;
}

}  // namespace ritzpen
