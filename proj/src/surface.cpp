#include "dlab/surface.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dlab {

Danielewski::Danielewski(ComplexPoly p) : p_(std::move(p)) {
  if (p_.degree() < 1)
    throw std::invalid_argument("Danielewski: defining polynomial must be non-constant");
  if (!p_.simple_zeros(1e-8))
    throw std::invalid_argument("Danielewski: defining polynomial must have simple zeros");
}

bool Danielewski::contains(const SurfacePoint& pt, double tol) const {
  const cnum xy = pt.x * pt.y;
  const cnum pz = p_(pt.z);
  const double defect = std::abs(xy - pz);
  return defect <= tol * (1.0 + std::abs(xy) + std::abs(pz));
}

SurfacePoint Danielewski::chart_xz(cnum x, cnum z) const {
  if (x == cnum(0.0))
    throw std::invalid_argument("chart_xz: chart undefined at x = 0");
  return {x, p_(z) / x, z};
}

SurfacePoint Danielewski::random_point(double scale, Rng& rng) const {
  if (!(scale > 0.0)) throw std::invalid_argument("random_point: scale must be > 0");
  const cnum a = scale * rng.next_complex_gaussian();
  const cnum b = scale * rng.next_complex_gaussian();
  const auto [p1, p2] = fiber(a, b);
  return rng.next_coin() ? p2 : p1;
}

double tau(const SurfacePoint& p) {
  const cnum a = p.x + p.y;
  const double n2 = std::norm(a) + std::norm(p.z);
  if (n2 == 0.0) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log(n2);
}

}  // namespace dlab
