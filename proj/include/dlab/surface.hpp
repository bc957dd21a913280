#pragma once

#include <complex>
#include <utility>

#include "dlab/poly.hpp"
#include "dlab/rng.hpp"

namespace dlab {

template <class R>
struct PointT {
  std::complex<R> x, y, z;
};

using SurfacePoint = PointT<double>;
using SurfacePointL = PointT<long double>;

inline SurfacePointL widen(const SurfacePoint& p) {
  return {std::complex<long double>(p.x.real(), p.x.imag()),
          std::complex<long double>(p.y.real(), p.y.imag()),
          std::complex<long double>(p.z.real(), p.z.imag())};
}

inline SurfacePoint narrow(const SurfacePointL& p) {
  return {cnum(static_cast<double>(p.x.real()), static_cast<double>(p.x.imag())),
          cnum(static_cast<double>(p.y.real()), static_cast<double>(p.y.imag())),
          cnum(static_cast<double>(p.z.real()), static_cast<double>(p.z.imag()))};
}

/**
 * The affine surface x*y = p(z) for a non-constant polynomial p with simple
 * zeros (both enforced at construction). Immutable.
 */
class Danielewski {
public:
  explicit Danielewski(ComplexPoly p);

  const ComplexPoly& poly() const { return p_; }
  int degree() const { return p_.degree(); }

  /// Relative defect |x*y - p(z)| / (1 + |x*y| + |p(z)|) at most tol.
  bool contains(const SurfacePoint& pt, double tol = 1e-9) const;

  /**
   * The two covering points over (a, b): x solves t^2 - a*t + p(b) = 0 with
   * the larger-magnitude root computed first and the other recovered by
   * Vieta (no cancellation when |a|^2 and |p(b)| are far apart), y = a - x.
   * The two orderings are returned, so .second is exactly the involution
   * image of .first; at a ramification point (a^2 = 4 p(b)) they coincide.
   */
  template <class R>
  std::pair<PointT<R>, PointT<R>> fiber(const std::complex<R>& a,
                                        const std::complex<R>& b) const {
    using C = std::complex<R>;
    const C pb = p_.eval(b);
    const C disc = std::sqrt(a * a - R(4) * pb);
    C t1 = (std::real(std::conj(a) * disc) >= R(0)) ? (a + disc) : (a - disc);
    t1 *= R(0.5);
    const C t2 = (t1 == C(0, 0)) ? a - t1 : pb / t1;
    return {PointT<R>{t1, t2, b}, PointT<R>{t2, t1, b}};
  }

  std::pair<SurfacePoint, SurfacePoint> fiber(cnum a, cnum b) const {
    return fiber<double>(a, b);
  }

  /// (x, p(z)/x, z); throws std::invalid_argument for x == 0.
  SurfacePoint chart_xz(cnum x, cnum z) const;

  template <class R>
  PointT<R> chart_unchecked(const std::complex<R>& x,
                            const std::complex<R>& z) const {
    return {x, p_.eval(z) / x, z};
  }

  /// Draws (a, b) as independent complex Gaussians scaled by `scale` and
  /// returns one of the two fiber points by a fair coin.
  SurfacePoint random_point(double scale, Rng& rng) const;

private:
  ComplexPoly p_;
};

/// The 2-sheeted covering projection pi(x, y, z) = (x + y, z).
inline std::pair<cnum, cnum> project(const SurfacePoint& p) {
  return {p.x + p.y, p.z};
}

/// log of the Euclidean norm of pi(P); -infinity at the two points over the
/// origin (callers skip rather than abort on the sentinel).
double tau(const SurfacePoint& p);

}  // namespace dlab
