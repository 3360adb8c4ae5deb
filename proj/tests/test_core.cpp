#include <doctest.h>

#include <cmath>

#include "ritzpen/coefficients.hpp"
#include "ritzpen/errors.hpp"
#include "ritzpen/fe_space.hpp"
#include "ritzpen/field.hpp"
#include "ritzpen/problem.hpp"
#include "ritzpen/rng.hpp"

using namespace ritzpen;

namespace {

DiscreteFunction linear_x() {
  return {DomainKind::interval, [](const Vec2& p) { return ValueGrad{p.x, {1.0, 0.0}}; }};
}

DiscreteFunction one_minus_x() {
  return {DomainKind::interval,
          [](const Vec2& p) { return ValueGrad{1.0 - p.x, {-1.0, 0.0}}; }};
}

// u* = x(1-x)/2 solves -u'' = 1 with zero boundary values.
DiscreteFunction u_star_interval() {
  return {DomainKind::interval, [](const Vec2& p) {
            return ValueGrad{0.5 * p.x * (1.0 - p.x), {0.5 - p.x, 0.0}};
          }};
}

// u_lambda = -x^2/2 + x/2 + 1/(2 lambda) minimizes the penalized energy
// for f = 1, A = I on (0,1).
DiscreteFunction u_lambda_interval(double lambda) {
  return {DomainKind::interval, [lambda](const Vec2& p) {
            return ValueGrad{-0.5 * p.x * p.x + 0.5 * p.x + 0.5 / lambda,
                             {0.5 - p.x, 0.0}};
          }};
}

DiscreteFunction random_fe_function(const FiniteElementFamily& fam, Rng& rng) {
  std::vector<double> c(fam.dof_count());
  for (double& v : c) v = rng.uniform(-1.0, 1.0);
  return fam.function(std::move(c));
}

}  // namespace

TEST_CASE("bilinear_a on hand-integrated interval cases") {
  const MeshPtr mesh = make_mesh(DomainKind::interval, 32);

  SUBCASE("A=I, u=v=x integrates (u')^2 = 1") {
    const auto p = PenalizedProblem::natural(mesh, identity_coefficient(), constant_rhs(1.0), false);
    CHECK(bilinear_a(p, linear_x(), linear_x()) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("A=I, u=x, v=1-x") {
    const auto p = PenalizedProblem::natural(mesh, identity_coefficient(), constant_rhs(1.0), false);
    CHECK(bilinear_a(p, linear_x(), one_minus_x()) == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("A=2I, u=v=u*: 2 * integral of (1/2-x)^2 = 2/12") {
    const auto p = PenalizedProblem::penalized(mesh, scaled_identity(2.0), constant_rhs(1.0), 1.0);
    CHECK(bilinear_a(p, u_star_interval(), u_star_interval()) ==
          doctest::Approx(2.0 / 12.0).epsilon(1e-13));
  }
}

TEST_CASE("bilinear_a is symmetric for a non-diagonal coefficient") {
  const MeshPtr mesh = make_mesh(DomainKind::unit_square, 6);
  const auto p = PenalizedProblem::penalized(mesh, smooth_anisotropic(), constant_rhs(1.0), 2.0);
  const FiniteElementFamily fam(mesh);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const DiscreteFunction u = random_fe_function(fam, rng);
    const DiscreteFunction v = random_fe_function(fam, rng);
    const double uv = bilinear_a(p, u, v);
    const double vu = bilinear_a(p, v, u);
    CHECK(std::abs(uv - vu) <= 1e-12 * (1.0 + std::abs(uv)));
  }
}

TEST_CASE("bilinear_a_lambda adds the weighted trace product") {
  const MeshPtr mesh = make_mesh(DomainKind::interval, 64);

  SUBCASE("constants: lambda * (1 + 1)") {
    const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 10.0);
    const auto one = constant_field(DomainKind::interval, 1.0);
    CHECK(bilinear_a_lambda(p, one, one) == doctest::Approx(20.0).epsilon(1e-14));
  }
  SUBCASE("zero-trace functions reduce to bilinear_a") {
    const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 77.0);
    const auto u = u_star_interval();
    CHECK(bilinear_a_lambda(p, u, u) == doctest::Approx(bilinear_a(p, u, u)).epsilon(1e-14));
  }
  SUBCASE("u_lambda at lambda=10: volume 1/12 plus boundary 10*2*(1/20)^2") {
    const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 10.0);
    const auto u = u_lambda_interval(10.0);
    CHECK(bilinear_a_lambda(p, u, u) ==
          doctest::Approx(1.0 / 12.0 + 1.0 / 20.0).epsilon(1e-13));
  }
  SUBCASE("natural mode rejects a_lambda") {
    const auto p = PenalizedProblem::natural(mesh, identity_coefficient(), constant_rhs(1.0), true);
    CHECK_THROWS_AS(bilinear_a_lambda(p, linear_x(), linear_x()), ContractError);
  }
}

TEST_CASE("energy on hand-integrated references") {
  const MeshPtr mesh = make_mesh(DomainKind::interval, 64);

  SUBCASE("penalized minimizer: E_lambda(u_lambda) = -1/24 - 1/(4 lambda)") {
    const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 10.0);
    CHECK(energy(p, u_lambda_interval(10.0)) ==
          doctest::Approx(-1.0 / 24.0 - 1.0 / 40.0).epsilon(1e-13));
  }
  SUBCASE("natural Dirichlet energy at u*: (1/2)(1/12) - 1/12") {
    const auto p = PenalizedProblem::natural(mesh, identity_coefficient(), constant_rhs(1.0), false);
    CHECK(energy(p, u_star_interval()) == doctest::Approx(-1.0 / 24.0).epsilon(1e-13));
  }
  SUBCASE("zero function has zero energy") {
    const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 10.0);
    CHECK(energy(p, constant_field(DomainKind::interval, 0.0)) == 0.0);
  }
}

TEST_CASE("energy agrees with the quadratic-form expression") {
  const MeshPtr mesh = make_mesh(DomainKind::unit_square, 5);
  const auto p = PenalizedProblem::penalized(mesh, smooth_anisotropic(),
                                             {"f", [](const Vec2& q) { return q.x - q.y; }}, 3.0);
  const FiniteElementFamily fam(mesh);
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const DiscreteFunction u = random_fe_function(fam, rng);
    const double direct = energy(p, u);
    const double fu = volume_integral(*mesh, [&](const Vec2& q) { return p.f(q) * u(q).value; });
    const double via_form = 0.5 * bilinear_a_lambda(p, u, u) - fu;
    CHECK(std::abs(direct - via_form) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("optimization_gap clamps noise and flags real undershoots") {
  const MeshPtr mesh = make_mesh(DomainKind::interval, 32);
  const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 10.0);
  const double reference = energy(p, u_lambda_interval(10.0));

  SUBCASE("the minimizer itself has zero gap") {
    const GapResult g = optimization_gap(p, u_lambda_interval(10.0), reference);
    CHECK(g.delta == 0.0);
    CHECK(!g.flagged);
  }
  SUBCASE("plain subtraction above the reference") {
    const GapResult g = clamp_gap(-0.05, -1.0 / 15.0);
    CHECK(g.delta == doctest::Approx(1.0 / 15.0 - 0.05).epsilon(1e-12));
    CHECK(!g.flagged);
  }
  SUBCASE("tiny undershoot clamps without flagging") {
    const GapResult g = clamp_gap(reference - 1e-12, reference);
    CHECK(g.delta == 0.0);
    CHECK(!g.flagged);
  }
  SUBCASE("an undershoot beyond the noise tolerance is flagged") {
    const GapResult g = clamp_gap(reference - 1e-8, reference);
    CHECK(g.delta == 0.0);
    CHECK(g.flagged);
  }
}

TEST_CASE("coercivity surrogate with the measured equivalence constant") {
  // First measure the empirical norm-equivalence constant on the sample
  // set, then assert coercivity of a_lambda with exactly that constant.
  const MeshPtr mesh = make_mesh(DomainKind::unit_square, 6);
  const FiniteElementFamily fam(mesh);
  Rng rng(23);
  std::vector<DiscreteFunction> samples;
  for (int k = 0; k < 50; ++k) samples.push_back(random_fe_function(fam, rng));

  double equivalence = 0.0;
  for (const DiscreteFunction& u : samples) {
    const double full = h1_norm(u, *mesh);
    const double semi = h1_seminorm(u, *mesh);
    const double bdry = boundary_l2_norm(u, *mesh);
    equivalence = std::max(equivalence, full * full / (semi * semi + bdry * bdry));
  }
  const double alpha1 = 1.0 / equivalence;

  for (double lambda : {1.0, 4.0, 100.0}) {
    const auto p =
        PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), lambda);
    for (const DiscreteFunction& u : samples) {
      const double h1 = h1_norm(u, *mesh);
      CHECK(bilinear_a_lambda(p, u, u) >= alpha1 * h1 * h1 * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("quadratic expansion around the continuum minimizer") {
  // E(u_lambda + h) - E(u_lambda) = 1/2 a_lambda(h,h): the cross term
  // vanishes because u_lambda satisfies the variational equation, and
  // every integrand here is a polynomial the quadrature handles exactly.
  const MeshPtr mesh = make_mesh(DomainKind::interval, 16);
  const double lambda = 10.0;
  const auto p = PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), lambda);
  const auto u = u_lambda_interval(lambda);
  const double e0 = energy(p, u);
  const FiniteElementFamily fam(mesh);
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteFunction h = random_fe_function(fam, rng);
    const double lhs = energy(p, u + h) - e0;
    const double rhs = 0.5 * bilinear_a_lambda(p, h, h);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(e0)));
  }
}

TEST_CASE("energy is strictly increasing in lambda for nonzero trace") {
  const MeshPtr mesh = make_mesh(DomainKind::interval, 16);
  const auto u = linear_x();
  double prev = -1e300;
  for (double lambda : {0.5, 1.0, 2.0, 8.0, 64.0}) {
    const auto p =
        PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), lambda);
    const double e = energy(p, u);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("coefficient catalog obeys its declared windows") {
  const MeshPtr square = make_mesh(DomainKind::unit_square, 4);
  for (const char* name : {"identity", "scaled_identity", "smooth_anisotropic"}) {
    const CoefficientField A = coefficient_by_name(name);
    const CoefficientCheck chk = check_coefficient(A, *square, 99);
    CHECK(chk.symmetry_defect <= 1e-14);
    CHECK(chk.window_violation == 0.0);
  }
  CHECK_THROWS_AS(coefficient_by_name("laplace-beltrami"), ConfigError);
  CHECK_THROWS_AS(scaled_identity(-1.0), ConfigError);
}

TEST_CASE("problem constructors enforce the lambda contract") {
  const MeshPtr mesh = make_mesh(DomainKind::interval, 4);
  CHECK_THROWS_AS(
      PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), 0.0),
      ConfigError);
  CHECK_THROWS_AS(
      PenalizedProblem::penalized(mesh, identity_coefficient(), constant_rhs(1.0), -2.0),
      ConfigError);
  CHECK_NOTHROW(PenalizedProblem::natural(mesh, identity_coefficient(), constant_rhs(1.0), true));
}
