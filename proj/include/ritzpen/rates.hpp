#pragma once

#include <utility>
#include <vector>

#include "ritzpen/exact_cases.hpp"

namespace ritzpen {

/// Predicted convergence rate of the penalized Ritz error under a
/// penalty schedule lambda ~ scale^sigma, when the ansatz family
/// carries a uniformly bounded trace constant: rho = min(r, s - sigma/2,
/// sigma), where r is the approximation rate of the family and s the
/// boundary-flux decay rate.  Nonpositive r or s, or negative sigma,
/// are domain errors.
double rho_uniform(double sigma, double r, double s);

/// The maximizing exponent and value: sigma* = 2s/3, rho* = min(2s/3, r).
std::pair<double, double> rho_star_uniform(double r, double s);

/// Same without a uniform trace bound (trace constant growing with the
/// family): rho = min(r, s - sigma/2, sigma/2), maximized at sigma* = s
/// with rho* = min(s/2, r).
double rho_nonuniform(double sigma, double r, double s);
std::pair<double, double> rho_star_nonuniform(double r, double s);

/// Least-squares fit of log(error) against log(scale).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::vector<std::pair<double, double>> points;  ///< (scale, error) as given
  int window_begin = 0;  ///< first index of the fitted window
  int window_end = 0;    ///< one past the last fitted index
};

/// Fit over the last `window` points (0 = default: last 4, or all when
/// fewer).  Needs at least 3 points in the window; scales and errors
/// must be positive and scales within the window distinct.  The window
/// exists to drop pre-asymptotic coarse grids and is recorded in the
/// result.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points, int window = 0);

/// L2 penalty-gap decay in lambda for a catalog case: solves the
/// penalized problem with piecewise-linear elements at the given
/// resolution for each lambda, measures the L2 distance to the analytic
/// zero-trace solution, and fits the rate.  The theory guarantees decay
/// at least lambda^{-1/2} for right-hand sides of low regularity;
/// smooth cases legitimately fit faster rates, so acceptance of the
/// result is one-sided.
RateFit low_regularity_rate_experiment(const ExactSolutionCase& c,
                                       const std::vector<double>& lambdas,
                                       int resolution = 512);

}  // namespace ritzpen
