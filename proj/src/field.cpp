#include "ritzpen/field.hpp"

#include <cmath>

#include "ritzpen/errors.hpp"

namespace ritzpen {

DiscreteFunction constant_field(DomainKind domain, double value) {
  return {domain, [value](const Vec2&) { return ValueGrad{value, {0.0, 0.0}}; }};
}

static void check_same_domain(const DiscreteFunction& u, const DiscreteFunction& v) {
  require(u.domain() == v.domain(), "operands live on different domains");
}

DiscreteFunction operator+(const DiscreteFunction& u, const DiscreteFunction& v) {
  check_same_domain(u, v);
  return {u.domain(), [u, v](const Vec2& p) {
            const ValueGrad a = u(p), b = v(p);
            return ValueGrad{a.value + b.value, a.grad + b.grad};
          }};
}

DiscreteFunction operator-(const DiscreteFunction& u, const DiscreteFunction& v) {
  check_same_domain(u, v);
  return {u.domain(), [u, v](const Vec2& p) {
            const ValueGrad a = u(p), b = v(p);
            return ValueGrad{a.value - b.value, a.grad - b.grad};
          }};
}

DiscreteFunction operator*(double s, const DiscreteFunction& u) {
  return {u.domain(), [s, u](const Vec2& p) {
            const ValueGrad a = u(p);
            return ValueGrad{s * a.value, s * a.grad};
          }};
}

double volume_integral(const DomainMesh& mesh,
                       const std::function<double(const Vec2&)>& integrand) {
  double s = 0.0;
  for (const QuadPoint& q : mesh.volume_quadrature()) s += q.w * integrand(q.x);
  return s;
}

double boundary_integral(const DomainMesh& mesh,
                         const std::function<double(const Vec2&)>& integrand) {
  double s = 0.0;
  for (const QuadPoint& q : mesh.boundary_quadrature()) s += q.w * integrand(q.x);
  return s;
}

double l2_norm(const DiscreteFunction& u, const DomainMesh& mesh) {
  return std::sqrt(volume_integral(mesh, [&](const Vec2& p) {
    const double v = u(p).value;
    return v * v;
  }));
}

double h1_seminorm(const DiscreteFunction& u, const DomainMesh& mesh) {
  return std::sqrt(volume_integral(mesh, [&](const Vec2& p) {
    const Vec2 g = u(p).grad;
    return g.dot(g);
  }));
}

double h1_norm(const DiscreteFunction& u, const DomainMesh& mesh) {
  return std::sqrt(volume_integral(mesh, [&](const Vec2& p) {
    const ValueGrad vg = u(p);
    return vg.value * vg.value + vg.grad.dot(vg.grad);
  }));
}

double boundary_l2_norm(const DiscreteFunction& u, const DomainMesh& mesh) {
  return std::sqrt(boundary_integral(mesh, [&](const Vec2& p) {
    const double v = u(p).value;
    return v * v;
  }));
}

double l2_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                   const DomainMesh& mesh) {
  return l2_norm(u - v, mesh);
}

double h1_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                   const DomainMesh& mesh) {
  return h1_norm(u - v, mesh);
}

double boundary_l2_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                            const DomainMesh& mesh) {
  return boundary_l2_norm(u - v, mesh);
}

double max_gradient_deviation(const DiscreteFunction& u,
                              const std::vector<Vec2>& samples, double step) {
  require(step > 0.0, "finite-difference step must be positive");
  const bool one_d = dimension(u.domain()) == 1;
  double worst = 0.0;
  for (const Vec2& p : samples) {
    const Vec2 g = u(p).grad;
    const double gx =
        (u({p.x + step, p.y}).value - u({p.x - step, p.y}).value) / (2.0 * step);
    worst = std::max(worst, std::abs(gx - g.x));
    if (!one_d) {
      const double gy =
          (u({p.x, p.y + step}).value - u({p.x, p.y - step}).value) / (2.0 * step);
      worst = std::max(worst, std::abs(gy - g.y));
    }
  }
  return worst;
}

Vec2 outward_normal_at(const DomainMesh& mesh, const Vec2& p) {
  switch (mesh.kind()) {
    case DomainKind::interval:
      return p.x < 0.5 ? Vec2{-1.0, 0.0} : Vec2{1.0, 0.0};
    case DomainKind::unit_square: {
      // Nearest side wins; corners resolve to whichever side is listed
      // first below, which never matters under an integral.
      const double d[4] = {p.y, 1.0 - p.x, 1.0 - p.y, p.x};
      const Vec2 n[4] = {{0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
      int best = 0;
      for (int k = 1; k < 4; ++k)
        if (d[k] < d[best]) best = k;
      return n[best];
    }
    case DomainKind::unit_disk_polar: {
      const double r = p.norm();
      require(r > 0.0, "outward normal undefined at the disk center");
      return {p.x / r, p.y / r};
    }
  }
  throw ContractError("unhandled DomainKind");
}

}  // namespace ritzpen
