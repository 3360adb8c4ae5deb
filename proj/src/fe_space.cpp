#include "ritzpen/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ritzpen/errors.hpp"

namespace ritzpen {

FiniteElementFamily::FiniteElementFamily(MeshPtr mesh) : mesh_(std::move(mesh)) {
  require(static_cast<bool>(mesh_), "finite element family needs a mesh");
}

static int clampi(int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); }

int FiniteElementFamily::locate_cell(const Vec2& p) const {
  const DomainMesh& m = *mesh_;
  const int n = m.resolution();
  switch (m.kind()) {
    case DomainKind::interval:
      return clampi(static_cast<int>(std::floor(p.x * n)), 0, n - 1);
    case DomainKind::unit_square: {
      const int i = clampi(static_cast<int>(std::floor(p.x * n)), 0, n - 1);
      const int j = clampi(static_cast<int>(std::floor(p.y * n)), 0, n - 1);
      const double u = p.x * n - i;
      const double v = p.y * n - j;
      // The four triangles of a square meet at its center; the point
      // belongs to the triangle whose side it is closest to.
      const double d[4] = {v, 1.0 - u, 1.0 - v, u};  // south, east, north, west
      int t = 0;
      for (int k = 1; k < 4; ++k)
        if (d[k] < d[t]) t = k;
      return 4 * (j * n + i) + t;
    }
    case DomainKind::unit_disk_polar: {
      const int nr = m.radial_cells();
      const int nt = m.angular_cells();
      const double r = p.norm();
      double theta = std::atan2(p.y, p.x);
      if (theta < 0.0) theta += 2.0 * M_PI;
      const int i = clampi(static_cast<int>(std::floor(r * nr)), 0, nr - 1);
      const int j =
          clampi(static_cast<int>(std::floor(theta / (2.0 * M_PI) * nt)), 0, nt - 1);
      return i * nt + j;
    }
  }
  throw ContractError("unhandled DomainKind");
}

FiniteElementFamily::LocalBasis FiniteElementFamily::basis_at(int cell,
                                                              const Vec2& p) const {
  const DomainMesh& m = *mesh_;
  const Cell& c = m.cells()[cell];
  LocalBasis b;
  b.nodes = c.nodes;
  b.count = c.node_count;
  switch (m.kind()) {
    case DomainKind::interval: {
      const double x0 = m.nodes()[c.nodes[0]].x;
      const double len = m.nodes()[c.nodes[1]].x - x0;
      const double xi = (p.x - x0) / len;
      b.value = {1.0 - xi, xi, 0.0, 0.0};
      b.grad[0] = {-1.0 / len, 0.0};
      b.grad[1] = {1.0 / len, 0.0};
      return b;
    }
    case DomainKind::unit_square: {
      const Vec2 p0 = m.nodes()[c.nodes[0]];
      const Vec2 e1 = m.nodes()[c.nodes[1]] - p0;
      const Vec2 e2 = m.nodes()[c.nodes[2]] - p0;
      const double det = e1.x * e2.y - e1.y * e2.x;
      const Vec2 d = p - p0;
      const double xi = (d.x * e2.y - d.y * e2.x) / det;
      const double eta = (e1.x * d.y - e1.y * d.x) / det;
      const Vec2 grad_xi{e2.y / det, -e2.x / det};
      const Vec2 grad_eta{-e1.y / det, e1.x / det};
      b.value = {1.0 - xi - eta, xi, eta, 0.0};
      b.grad[0] = {-grad_xi.x - grad_eta.x, -grad_xi.y - grad_eta.y};
      b.grad[1] = grad_xi;
      b.grad[2] = grad_eta;
      return b;
    }
    case DomainKind::unit_disk_polar: {
      const int nr = m.radial_cells();
      const int nt = m.angular_cells();
      const int ci = cell / nt;
      const int cj = cell % nt;
      const double dr = 1.0 / nr;
      const double dt = 2.0 * M_PI / nt;
      double r = p.norm();
      double theta = std::atan2(p.y, p.x);
      if (theta < 0.0) theta += 2.0 * M_PI;
      // Angles live on a circle; pull theta into the cell's window so
      // the last cell (which wraps past 2*pi) still sees eta in [0,1].
      if (theta - cj * dt < -M_PI) theta += 2.0 * M_PI;
      else if (theta - cj * dt > M_PI) theta -= 2.0 * M_PI;
      const double xi = r * nr - ci;
      const double eta = theta / dt - cj;
      const double n00 = (1.0 - xi) * (1.0 - eta), n10 = xi * (1.0 - eta);
      const double n11 = xi * eta, n01 = (1.0 - xi) * eta;
      b.value = {n00, n10, n11, n01};
      // d/dxi and d/deta of the four bilinear shapes.
      const double dxi[4] = {-(1.0 - eta), (1.0 - eta), eta, -eta};
      const double deta[4] = {-(1.0 - xi), -xi, xi, (1.0 - xi)};
      // Cartesian gradient via polar frame; the angular part carries the
      // 1/r metric factor.  r is clamped away from the exact center,
      // where the piecewise function is not differentiable anyway.
      const double rs = std::max(r, 1e-12);
      const double ct = std::cos(theta), st = std::sin(theta);
      for (int k = 0; k < 4; ++k) {
        const double ur = dxi[k] / dr;
        const double ut = deta[k] / dt / rs;
        b.grad[k] = {ct * ur - st * ut, st * ur + ct * ut};
      }
      return b;
    }
  }
  throw ContractError("unhandled DomainKind");
}

ValueGrad FiniteElementFamily::evaluate(const std::vector<double>& coefficients,
                                        const Vec2& p) const {
  const LocalBasis b = basis_at(locate_cell(p), p);
  ValueGrad out;
  for (int k = 0; k < b.count; ++k) {
    const double c = coefficients[b.nodes[k]];
    out.value += c * b.value[k];
    out.grad += c * b.grad[k];
  }
  return out;
}

DiscreteFunction FiniteElementFamily::function(std::vector<double> coefficients) const {
  require(static_cast<int>(coefficients.size()) == dof_count(),
          "coefficient vector length must equal dof_count");
  auto coeffs = std::make_shared<const std::vector<double>>(std::move(coefficients));
  FiniteElementFamily fam = *this;
  return {mesh_->kind(), [fam, coeffs](const Vec2& p) {
            return fam.evaluate(*coeffs, p);
          }};
}

std::vector<double> FiniteElementFamily::interpolate(
    const std::function<double(const Vec2&)>& g) const {
  std::vector<double> c(mesh_->nodes().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g(mesh_->nodes()[i]);
  return c;
}

DiscreteFunction fe_interpolate(const FiniteElementFamily& fam,
                                const std::function<double(const Vec2&)>& g) {
  return fam.function(fam.interpolate(g));
}

}  // namespace ritzpen
