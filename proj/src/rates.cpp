#include "ritzpen/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ritzpen/fe_space.hpp"
#include "ritzpen/galerkin.hpp"
#include "ritzpen/problem.hpp"

namespace ritzpen {

namespace {

void check_rate_inputs(double sigma, double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw std::domain_error("rates r, s must be positive");
  if (!(sigma >= 0.0)) throw std::domain_error("penalty exponent sigma must be nonnegative");
}

}  // namespace

double rho_uniform(double sigma, double r, double s) {
  check_rate_inputs(sigma, r, s);
  return std::min({r, s - 0.5 * sigma, sigma});
}

std::pair<double, double> rho_star_uniform(double r, double s) {
  check_rate_inputs(0.0, r, s);
  const double sigma_star = 2.0 * s / 3.0;
  return {sigma_star, std::min(sigma_star, r)};
}

double rho_nonuniform(double sigma, double r, double s) {
  check_rate_inputs(sigma, r, s);
  return std::min({r, s - 0.5 * sigma, 0.5 * sigma});
}

std::pair<double, double> rho_star_nonuniform(double r, double s) {
  check_rate_inputs(0.0, r, s);
  return {s, std::min(0.5 * s, r)};
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, int window) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw std::domain_error("rate fit needs at least 3 points");
  for (const auto& [scale, error] : points) {
    if (!(scale > 0.0)) throw std::domain_error("scales must be positive");
    if (!(error > 0.0))
      throw std::domain_error("errors must be positive; floor them at machine noise");
  }
  const int w = window == 0 ? std::min(4, n) : window;
  if (w < 3 || w > n) throw std::domain_error("fit window must cover 3 to all points");

  RateFit fit;
  fit.points = points;
  fit.window_begin = n - w;
  fit.window_end = n;

  double sx = 0.0, sy = 0.0;
  for (int i = fit.window_begin; i < n; ++i) {
    sx += std::log(points[i].first);
    sy += std::log(points[i].second);
  }
  const double mx = sx / w, my = sy / w;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = fit.window_begin; i < n; ++i) {
    const double dx = std::log(points[i].first) - mx;
    const double dy = std::log(points[i].second) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::domain_error("scales in the fit window must be distinct");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  double ss_res = 0.0;
  for (int i = fit.window_begin; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * std::log(points[i].first);
    const double resid = std::log(points[i].second) - pred;
    ss_res += resid * resid;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

RateFit low_regularity_rate_experiment(const ExactSolutionCase& c,
                                       const std::vector<double>& lambdas,
                                       int resolution) {
  if (lambdas.empty()) throw std::domain_error("penalty grid must not be empty");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i + 1]))
      throw std::domain_error("penalty grid must be strictly increasing");

  auto mesh = make_mesh(c.domain, resolution);
  FiniteElementFamily fam(mesh);
  std::vector<std::pair<double, double>> points;
  points.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const auto p = PenalizedProblem::penalized(mesh, c.A, c.f, lambda);
    const FESolution sol = solve_linear(p, fam);
    points.emplace_back(lambda, l2_distance(sol.function, c.u_star, *mesh));
  }
  return fit_rate(points);
}

}  // namespace ritzpen
