#include "ritzpen/exact_cases.hpp"

#include <cmath>

#include "ritzpen/errors.hpp"
#include "ritzpen/rng.hpp"

namespace ritzpen {

namespace {

constexpr double kPi = 3.14159265358979323846;

ExactSolutionCase interval_poisson_case() {
  ExactSolutionCase c;
  c.id = "interval_poisson";
  c.domain = DomainKind::interval;
  c.A = identity_coefficient();
  c.f = constant_rhs(1.0);
  c.u_star = DiscreteFunction(DomainKind::interval, [](const Vec2& p) {
    return ValueGrad{-0.5 * p.x * p.x + 0.5 * p.x, Vec2{0.5 - p.x, 0.0}};
  });
  c.u_lambda = [](double lambda) {
    const double shift = 0.5 / lambda;
    return DiscreteFunction(DomainKind::interval, [shift](const Vec2& p) {
      return ValueGrad{-0.5 * p.x * p.x + 0.5 * p.x + shift, Vec2{0.5 - p.x, 0.0}};
    });
  };
  // The difference is the constant 1/(2 lambda) on a unit-measure domain.
  c.gap_h1 = [](double lambda) { return 0.5 / lambda; };
  return c;
}

ExactSolutionCase disk_radial_case() {
  ExactSolutionCase c;
  c.id = "disk_radial";
  c.domain = DomainKind::unit_disk_polar;
  c.A = identity_coefficient();
  c.f = constant_rhs(1.0);
  c.u_star = DiscreteFunction(DomainKind::unit_disk_polar, [](const Vec2& p) {
    return ValueGrad{0.25 * (1.0 - p.x * p.x - p.y * p.y), Vec2{-0.5 * p.x, -0.5 * p.y}};
  });
  c.u_lambda = [](double lambda) {
    const double shift = 0.5 / lambda;
    return DiscreteFunction(DomainKind::unit_disk_polar, [shift](const Vec2& p) {
      return ValueGrad{0.25 * (1.0 - p.x * p.x - p.y * p.y) + shift,
                       Vec2{-0.5 * p.x, -0.5 * p.y}};
    });
  };
  // Constant shift 1/(2 lambda) over a disk of area pi.
  c.gap_h1 = [](double lambda) { return 0.5 * std::sqrt(kPi) / lambda; };
  c.conormal = [](const Vec2& p) { return -0.5 * std::sqrt(p.x * p.x + p.y * p.y); };
  return c;
}

ExactSolutionCase disk_mode1_case() {
  ExactSolutionCase c;
  c.id = "disk_mode1";
  c.domain = DomainKind::unit_disk_polar;
  c.A = identity_coefficient();
  c.f = RightHandSide{"first_harmonic", [](const Vec2& p) { return 8.0 * p.x; }};
  // (r - r^3) cos(theta) = x (1 - x^2 - y^2).
  c.u_star = DiscreteFunction(DomainKind::unit_disk_polar, [](const Vec2& p) {
    const double r2 = p.x * p.x + p.y * p.y;
    return ValueGrad{p.x * (1.0 - r2),
                     Vec2{1.0 - 3.0 * p.x * p.x - p.y * p.y, -2.0 * p.x * p.y}};
  });
  c.u_lambda = [](double lambda) {
    const double amp = 2.0 / (lambda + 1.0);
    return DiscreteFunction(DomainKind::unit_disk_polar, [amp](const Vec2& p) {
      const double r2 = p.x * p.x + p.y * p.y;
      return ValueGrad{p.x * (1.0 - r2) + amp * p.x,
                       Vec2{1.0 - 3.0 * p.x * p.x - p.y * p.y + amp, -2.0 * p.x * p.y}};
    });
  };
  // ||x||_{H1(disk)}^2 = pi + pi/4, so the gap of (2/(lambda+1)) x is
  // sqrt(5 pi)/(lambda+1).
  c.gap_h1 = [](double lambda) { return std::sqrt(5.0 * kPi) / (lambda + 1.0); };
  // d/dr (r - r^3) cos(theta) = (1 - 3 r^2) cos(theta) = x (1 - 3 r^2) / r.
  c.conormal = [](const Vec2& p) {
    return p.x * (1.0 - 3.0 * (p.x * p.x + p.y * p.y));
  };
  return c;
}

ExactSolutionCase square_sine_case() {
  ExactSolutionCase c;
  c.id = "square_sine";
  c.domain = DomainKind::unit_square;
  c.A = identity_coefficient();
  c.f = RightHandSide{"sine_product", [](const Vec2& p) {
                        return 2.0 * kPi * kPi * std::sin(kPi * p.x) * std::sin(kPi * p.y);
                      }};
  c.u_star = DiscreteFunction(DomainKind::unit_square, [](const Vec2& p) {
    const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
    const double sy = std::sin(kPi * p.y), cy = std::cos(kPi * p.y);
    return ValueGrad{sx * sy, Vec2{kPi * cx * sy, kPi * sx * cy}};
  });
  // No closed-form penalized minimizer; the case serves rate sweeps.
  return c;
}

ExactSolutionCase interval_signflip_case() {
  ExactSolutionCase c;
  c.id = "interval_signflip";
  c.domain = DomainKind::interval;
  c.A = identity_coefficient();
  c.f = RightHandSide{"sign_flip", [](const Vec2& p) { return p.x < 0.5 ? 1.0 : -1.0; }};
  // Zero-trace solution of -u'' = sign(1/2 - x): piecewise quadratic
  // with a C1 match at x = 1/2.
  c.u_star = DiscreteFunction(DomainKind::interval, [](const Vec2& p) {
    if (p.x <= 0.5)
      return ValueGrad{-0.5 * p.x * p.x + 0.25 * p.x, Vec2{0.25 - p.x, 0.0}};
    return ValueGrad{0.5 * p.x * p.x - 0.75 * p.x + 0.25, Vec2{p.x - 0.75, 0.0}};
  });
  // The penalized minimizer adds the affine correction satisfying the
  // Robin conditions: u_lambda - u_star = (1 - 2x) / (4 (lambda + 2)).
  c.u_lambda = [](double lambda) {
    const double cc = 0.25 / (lambda + 2.0);
    return DiscreteFunction(DomainKind::interval, [cc](const Vec2& p) {
      ValueGrad base;
      if (p.x <= 0.5)
        base = ValueGrad{-0.5 * p.x * p.x + 0.25 * p.x, Vec2{0.25 - p.x, 0.0}};
      else
        base = ValueGrad{0.5 * p.x * p.x - 0.75 * p.x + 0.25, Vec2{p.x - 0.75, 0.0}};
      return ValueGrad{base.value + cc * (1.0 - 2.0 * p.x),
                       Vec2{base.grad.x - 2.0 * cc, 0.0}};
    });
  };
  // ||(1-2x) c||_{H1}^2 = c^2 (1/3 + 4) with c = 1/(4 (lambda+2)).
  c.gap_h1 = [](double lambda) { return std::sqrt(13.0 / 3.0) * 0.25 / (lambda + 2.0); };
  c.singular_set = [](const Vec2& p) { return std::abs(p.x - 0.5) < 0.02; };
  return c;
}

Vec2 random_interior_point(DomainKind domain, Rng& rng) {
  const double margin = 0.02;
  switch (domain) {
    case DomainKind::interval:
      return Vec2{rng.uniform(margin, 1.0 - margin), 0.0};
    case DomainKind::unit_square:
      return Vec2{rng.uniform(margin, 1.0 - margin), rng.uniform(margin, 1.0 - margin)};
    case DomainKind::unit_disk_polar: {
      const double r = (1.0 - margin) * std::sqrt(rng.uniform());
      const double t = rng.uniform(0.0, 2.0 * kPi);
      return Vec2{r * std::cos(t), r * std::sin(t)};
    }
  }
  throw ContractError("unreachable domain kind");
}

Vec2 random_boundary_point(DomainKind domain, Rng& rng) {
  switch (domain) {
    case DomainKind::interval:
      return Vec2{rng.uniform() < 0.5 ? 0.0 : 1.0, 0.0};
    case DomainKind::unit_square: {
      const double t = rng.uniform();
      switch (rng.next_u64() % 4) {
        case 0: return Vec2{t, 0.0};
        case 1: return Vec2{1.0, t};
        case 2: return Vec2{t, 1.0};
        default: return Vec2{0.0, t};
      }
    }
    case DomainKind::unit_disk_polar: {
      const double t = rng.uniform(0.0, 2.0 * kPi);
      return Vec2{std::cos(t), std::sin(t)};
    }
  }
  throw ContractError("unreachable domain kind");
}

}  // namespace

const std::vector<std::string>& case_catalog() {
  static const std::vector<std::string> ids = {
      "interval_poisson", "disk_radial", "disk_mode1", "square_sine", "interval_signflip"};
  return ids;
}

ExactSolutionCase case_by_id(const std::string& id) {
  if (id == "interval_poisson") return interval_poisson_case();
  if (id == "disk_radial") return disk_radial_case();
  if (id == "disk_mode1") return disk_mode1_case();
  if (id == "square_sine") return square_sine_case();
  if (id == "interval_signflip") return interval_signflip_case();
  throw ConfigError("unknown case id: " + id);
}

CaseResiduals validate_case(const ExactSolutionCase& c, int samples, std::uint64_t seed) {
  require_config(samples > 0, "validate_case needs a positive sample count");
  Rng rng(seed);
  CaseResiduals out;
  const double h = 1e-4;
  const bool one_d = dimension(c.domain) == 1;

  const auto flux = [&](const Vec2& p) {
    const ValueGrad vg = c.u_star(p);
    return c.A(p) * vg.grad;
  };

  int accepted = 0;
  int attempts = 0;
  while (accepted < samples && attempts < 100 * samples) {
    ++attempts;
    const Vec2 p = random_interior_point(c.domain, rng);
    if (c.singular_set && c.singular_set(p)) continue;
    ++accepted;
    double div = (flux(Vec2{p.x + h, p.y}).x - flux(Vec2{p.x - h, p.y}).x) / (2.0 * h);
    if (!one_d)
      div += (flux(Vec2{p.x, p.y + h}).y - flux(Vec2{p.x, p.y - h}).y) / (2.0 * h);
    out.max_pde_residual = std::max(out.max_pde_residual, std::abs(-div - c.f(p)));
  }
  require(accepted == samples, "interior sampling failed to avoid the singular set");

  for (int i = 0; i < samples; ++i) {
    const Vec2 p = random_boundary_point(c.domain, rng);
    out.max_trace_violation = std::max(out.max_trace_violation, std::abs(c.u_star(p).value));
  }
  return out;
}

}  // namespace ritzpen
