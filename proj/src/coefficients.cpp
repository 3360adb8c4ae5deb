#include "ritzpen/coefficients.hpp"

#include <cmath>

#include "ritzpen/errors.hpp"
#include "ritzpen/rng.hpp"

namespace ritzpen {

CoefficientField identity_coefficient() {
  return {"identity", [](const Vec2&) { return Mat2{}; }, 1.0, 1.0};
}

CoefficientField scaled_identity(double factor) {
  require_config(factor > 0.0, "coefficient scale must be positive");
  return {"scaled_identity",
          [factor](const Vec2&) {
            return Mat2{factor, 0.0, 0.0, factor};
          },
          factor, factor};
}

CoefficientField smooth_anisotropic() {
  // Eigenvalues stay inside [1.2, 2.8]: diagonal entries lie in
  // [1.5, 2.5] and the coupling is at most 0.25 in magnitude.
  return {"smooth_anisotropic",
          [](const Vec2& p) {
            const double c = 0.25 * std::sin(M_PI * p.x) * std::cos(M_PI * p.y);
            return Mat2{2.0 + 0.5 * std::sin(M_PI * p.x), c, c,
                        2.0 + 0.5 * std::cos(M_PI * p.y)};
          },
          1.2, 2.8};
}

CoefficientField coefficient_by_name(const std::string& name) {
  if (name == "identity") return identity_coefficient();
  if (name == "scaled_identity") return scaled_identity(2.0);
  if (name == "smooth_anisotropic") return smooth_anisotropic();
  throw ConfigError("unknown coefficient field '" + name +
                    "' (catalog: identity, scaled_identity, smooth_anisotropic)");
}

CoefficientCheck check_coefficient(const CoefficientField& A, const DomainMesh& mesh,
                                   std::uint64_t seed, int directions_per_point) {
  CoefficientCheck out;
  Rng rng(seed);
  for (const QuadPoint& q : mesh.volume_quadrature()) {
    const Mat2 m = A(q.x);
    out.symmetry_defect = std::max(out.symmetry_defect, std::abs(m.xy - m.yx));
    for (int k = 0; k < directions_per_point; ++k) {
      Vec2 xi{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      if (dimension(mesh.kind()) == 1) xi.y = 0.0;
      const double n2 = xi.dot(xi);
      if (n2 < 1e-12) continue;
      const double quad = xi.dot(m * xi);
      const double low = A.ellipticity_lower() * n2 - quad;
      const double high = quad - A.bound_upper() * n2;
      out.window_violation = std::max({out.window_violation, low, high});
    }
  }
  out.window_violation = std::max(out.window_violation, 0.0);
  return out;
}

RightHandSide constant_rhs(double value) {
  return {"constant", [value](const Vec2&) { return value; }};
}

}  // namespace ritzpen
