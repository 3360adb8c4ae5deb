#pragma once

namespace ritzpen::tol {

// All hard numerical tolerances used by the library live here so the
// policy is visible in one place.  Test- or experiment-specific bounds
// stay with the experiment that owns them.

/// Relative residual ||K c - F|| / ||F|| required of a linear solve.
inline constexpr double linear_residual = 1e-10;

/// Below this, an optimization gap is considered numerical noise and is
/// clamped to zero (the raw value is still reported).
inline constexpr double gap_noise = 1e-10;

/// Symmetry defect allowed in assembled bilinear forms.
inline constexpr double form_symmetry = 1e-12;

/// Energy evaluated two ways (quadratic form vs. quadrature loop) must
/// agree to this relative tolerance.
inline constexpr double energy_consistency = 1e-12;

/// Distance from the boundary within which a node is classified as a
/// boundary node.
inline constexpr double boundary_node = 1e-12;

/// Convergence tolerance for the iterative fallback solver.
inline constexpr double cg_tolerance = 1e-12;

}  // namespace ritzpen::tol
