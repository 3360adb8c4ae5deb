#include "ritzpen/steklov.hpp"

#include <cmath>
#include <complex>
#include <memory>

#include "ritzpen/errors.hpp"

namespace ritzpen {

namespace {

constexpr double kPi = 3.14159265358979323846;

DiscreteFunction mode_field(int k, bool is_sine, double norm) {
  if (k == 0) {
    return DiscreteFunction(DomainKind::unit_disk_polar, [norm](const Vec2&) {
      return ValueGrad{norm, Vec2{0.0, 0.0}};
    });
  }
  // r^k cos(k theta) = Re z^k and r^k sin(k theta) = Im z^k for z = x + iy;
  // the gradient is k z^{k-1} read off componentwise.  Powers are built by
  // repeated multiplication so the disk center (z = 0) stays exact.
  return DiscreteFunction(DomainKind::unit_disk_polar, [k, is_sine, norm](const Vec2& p) {
    const std::complex<double> z(p.x, p.y);
    std::complex<double> zk1(1.0, 0.0);
    for (int i = 0; i < k - 1; ++i) zk1 *= z;
    const std::complex<double> zk = zk1 * z;
    const double value = is_sine ? zk.imag() : zk.real();
    const Vec2 grad = is_sine ? Vec2{k * zk1.imag(), k * zk1.real()}
                              : Vec2{k * zk1.real(), -k * zk1.imag()};
    return ValueGrad{norm * value, Vec2{norm * grad.x, norm * grad.y}};
  });
}

}  // namespace

std::vector<SteklovMode> steklov_modes_disk(int count) {
  require_config(count >= 1, "at least one mode is required");
  std::vector<SteklovMode> modes;
  modes.reserve(count);
  for (int j = 0; j < count; ++j) {
    SteklovMode m;
    m.index = j;
    m.frequency = (j + 1) / 2;
    m.is_sine = j >= 1 && j % 2 == 0;
    m.eigenvalue = m.frequency;
    // a_1(e, e) = pi (k + 1) before normalization (Dirichlet energy k pi
    // plus boundary mass pi); the constant mode carries boundary mass 2 pi.
    m.normalization = m.frequency == 0 ? 1.0 / std::sqrt(2.0 * kPi)
                                       : 1.0 / std::sqrt(kPi * (m.frequency + 1));
    m.eigenfunction = mode_field(m.frequency, m.is_sine, m.normalization);
    modes.push_back(std::move(m));
  }
  return modes;
}

std::vector<double> fourier_coeffs(const DiscreteFunction& w,
                                   const std::vector<SteklovMode>& modes,
                                   const DomainMesh& mesh) {
  std::vector<double> c;
  c.reserve(modes.size());
  for (const SteklovMode& m : modes) {
    const double integral = boundary_integral(
        mesh, [&](const Vec2& x) { return w(x).value * m.eigenfunction(x).value; });
    c.push_back((1.0 + m.eigenvalue) * integral);
  }
  return c;
}

GapReconstruction penalty_gap_via_formula(const ExactSolutionCase& c, double lambda,
                                          int truncation, const DomainMesh& mesh,
                                          double tail_tolerance) {
  require_config(c.domain == DomainKind::unit_disk_polar,
                 "the spectral reconstruction is defined on the unit disk only");
  require_config(c.A.name() == "identity",
                 "unsupported coefficient '" + c.A.name() +
                     "': analytic mode families exist only for the identity");
  require_config(static_cast<bool>(c.conormal),
                 "case must supply the analytic conormal derivative of u_star");
  require_config(lambda > 0.0, "penalty strength must be positive");
  require_config(mesh.kind() == DomainKind::unit_disk_polar,
                 "reconstruction quadrature needs a disk mesh");

  auto modes = std::make_shared<std::vector<SteklovMode>>(steklov_modes_disk(truncation));
  auto coeffs = std::make_shared<std::vector<double>>();
  coeffs->reserve(modes->size());
  for (const SteklovMode& m : *modes) {
    const double b = boundary_integral(
        mesh, [&](const Vec2& x) { return c.conormal(x) * m.eigenfunction(x).value; });
    const double damping = (1.0 + m.eigenvalue) / (1.0 + m.eigenvalue / lambda);
    coeffs->push_back(damping * b);
  }

  GapReconstruction out;
  out.coefficients = *coeffs;
  out.tail_estimate = std::abs(coeffs->back()) / lambda;
  out.truncated = out.tail_estimate > tail_tolerance;
  out.v_lambda = DiscreteFunction(DomainKind::unit_disk_polar, [modes, coeffs,
                                                                lambda](const Vec2& p) {
    double value = 0.0;
    Vec2 grad{0.0, 0.0};
    for (std::size_t j = 0; j < modes->size(); ++j) {
      const ValueGrad vg = (*modes)[j].eigenfunction(p);
      value += (*coeffs)[j] * vg.value;
      grad.x += (*coeffs)[j] * vg.grad.x;
      grad.y += (*coeffs)[j] * vg.grad.y;
    }
    return ValueGrad{value / lambda, Vec2{grad.x / lambda, grad.y / lambda}};
  });
  return out;
}

}  // namespace ritzpen
