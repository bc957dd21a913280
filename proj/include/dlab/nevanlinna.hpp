#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlab/autos.hpp"
#include "dlab/surface.hpp"

namespace dlab {

using clong = std::complex<long double>;

/**
 * Scalar function on the surface. Evaluation runs in extended precision:
 * iterated overshear components and exp-type functions leave double's
 * exponent range at the radii the growth experiments probe, while their
 * log-magnitudes stay tiny. Non-finite values mark a draw as skipped.
 */
class SurfaceFunction {
public:
  using Fn = std::function<clong(const SurfacePointL&)>;

  SurfaceFunction(std::string label, Fn fn)
      : label_(std::move(label)), fn_(std::move(fn)) {}

  clong operator()(const SurfacePointL& p) const { return fn_(p); }
  cnum at(const SurfacePoint& p) const {
    const clong v = fn_(widen(p));
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }
  const std::string& label() const { return label_; }

  static SurfaceFunction coord_x();
  static SurfaceFunction coord_y();
  static SurfaceFunction coord_z();

  enum class Component { X, Y, Z };
  /// Component of the word map, e.g. the u_k, v_k, w_k of an iterated
  /// overshear composition.
  static SurfaceFunction word_component(const Danielewski& S, Word w, Component c);

  /// F composed with the involution.
  SurfaceFunction after_involution() const;

private:
  std::string label_;
  Fn fn_;
};

struct CharacteristicEstimate {
  double r = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;  // draws that entered the mean
  std::int64_t n_skipped = 0;  // non-finite draws
  std::uint64_t seed = 0;
  bool valid = false;  // n_skipped / n_samples < 1%
};

/// Geometric radius grid r_i = r_start * factor^i, i = 0..steps-1.
struct RSchedule {
  double r_start;
  double factor;
  int steps;

  RSchedule(double r_start, double factor, int steps);
  std::vector<double> grid() const;
};

/// Uniform point on the unit sphere of C^2: four standard Gaussians,
/// normalized. |a|^2 + |b|^2 = 1 up to rounding.
std::pair<cnum, cnum> sample_sphere(Rng& rng);

/**
 * Monte-Carlo estimate of the sheet-summed growth functional
 *
 *   T(F, r) = E_{zeta ~ U(S^3)} [ log+|F(P1(r zeta))| + log+|F(P2(r zeta))| ],
 *
 * where P1, P2 are the two covering points over r*zeta. The integrand is
 * symmetric in the two sheet points, so no section or branch-cut choice
 * enters. Uses the uniform probability measure and log+|.| — a fixed positive
 * constant away from other normalizations, which ratios, differences and
 * slopes never see.
 *
 * Draw i derives its random stream from (seed, i) and the reduction is a
 * fixed-shape pairwise sum, so results are bit-identical for any worker
 * count. Requires r > 0 and n >= 100.
 */
CharacteristicEstimate characteristic(const Danielewski& S, const SurfaceFunction& F,
                                      double r, std::int64_t n, std::uint64_t seed,
                                      int workers = 0);

/// Paired estimate of T(F1, r) - T(F2, r) on common draws; a draw is skipped
/// when either evaluation is non-finite.
struct PairedDifference {
  double r = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t n_skipped = 0;
  bool valid = false;
};
PairedDifference characteristic_difference(const Danielewski& S,
                                           const SurfaceFunction& F1,
                                           const SurfaceFunction& F2, double r,
                                           std::int64_t n, std::uint64_t seed,
                                           int workers = 0);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
};

/// Least-squares slope of mean against log r, with the estimates' standard
/// errors propagated. Requires at least 3 estimates.
SlopeFit slope_vs_logr(std::span<const CharacteristicEstimate> estimates);

/**
 * Vector fields used by the derivative estimates, all tangent to the surface:
 *   Theta1      = x/(x-y) d/dx - y/(x-y) d/dy          (lift of d/da)
 *   Theta2      = p'(z)/(y-x) (d/dx - d/dy) + d/dz     (lift of d/db)
 *   Pushed      = d/dx - y/x d/dy       (x-partial of the (x,z)-chart)
 *   PushedTilde = p'(z)/x d/dy + d/dz   (z-partial of the (x,z)-chart)
 */
enum class ThetaField { Theta1, Theta2, Pushed, PushedTilde };

/**
 * Directional derivative of F along the chosen field at P: the free chart
 * coordinates (x, z) move along the field's components while y follows the
 * surface as p(z)/x; central differences with one Richardson step at relative
 * step h. Throws when P is within 1e-8 * scale of x = y (Theta1/Theta2) or of
 * the chart axis x = 0.
 */
cnum theta_apply(const Danielewski& S, ThetaField which, const SurfaceFunction& F,
                 const SurfacePoint& P, double h = 1e-5);

/// Chart Jacobian of the word map at P:
///   (x/u) * (du/dx * dw/dz - du/dz * dw/dx)
/// with u, w the x- and z-components of the image in the (x,z)-chart.
/// Throws when the chart degenerates (x near 0, image u near 0).
cnum jacobian_xz(const Danielewski& S, const Word& W, const SurfacePoint& P,
                 double h = 1e-5);

std::string characteristic_csv_header();
std::string characteristic_csv_row(const CharacteristicEstimate& e);

}  // namespace dlab
