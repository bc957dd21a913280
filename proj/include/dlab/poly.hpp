#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "dlab/complex_literal.hpp"

namespace dlab {

/**
 * Dense univariate polynomial with complex coefficients, stored ascending:
 * coeffs()[k] multiplies z^k. Construction trims trailing coefficients with
 * modulus below 1e-14 * max|coeff|, so the leading coefficient of a nonzero
 * polynomial is always significant. Instances are immutable and safe to share
 * across threads.
 */
class ComplexPoly {
public:
  ComplexPoly() : coeffs_{cnum(0.0)} {}
  explicit ComplexPoly(std::vector<cnum> coeffs);

  /// Parses a comma-separated ascending coefficient list,
  /// e.g. "-1,0,0,0,1" is z^4 - 1.
  static ComplexPoly parse(std::string_view text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cnum>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cnum(0.0); }

  /// Horner evaluation, usable at double or extended precision.
  template <class R>
  std::complex<R> eval(const std::complex<R>& z) const {
    std::complex<R> acc(0, 0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
      acc = acc * z + std::complex<R>(static_cast<R>(it->real()),
                                      static_cast<R>(it->imag()));
    return acc;
  }
  cnum operator()(const cnum& z) const { return eval(z); }

  ComplexPoly derivative() const;

  /// All complex roots with multiplicity: companion-matrix eigenvalues plus
  /// one Newton polish step. Throws std::invalid_argument for a constant.
  std::vector<cnum> roots() const;

  /// True iff the roots are pairwise farther apart than tol and |p'| exceeds
  /// tol at each of them.
  bool simple_zeros(double tol = 1e-8) const;

  /**
   * Newton divided difference Dp(w, z) with (w - z) * Dp = p(w) - p(z) as an
   * exact coefficient identity (no division is performed):
   *   Dp = sum_k a_k sum_{i<k} w^i z^{k-1-i}.
   * At w == z this is evaluated as p'(z), bit-identical to
   * derivative().eval(z).
   */
  template <class R>
  std::complex<R> divided_difference(const std::complex<R>& w,
                                     const std::complex<R>& z) const {
    using C = std::complex<R>;
    if (w == z) {
      C acc(0, 0);
      for (int k = degree(); k >= 1; --k)
        acc = acc * z + static_cast<R>(k) * C(static_cast<R>(coeffs_[k].real()),
                                              static_cast<R>(coeffs_[k].imag()));
      return acc;
    }
    C acc(0, 0), h(0, 0), zpow(1, 0);
    for (int k = 1; k <= degree(); ++k) {
      h = h * w + zpow;  // h_k = sum_{i<k} w^i z^{k-1-i}
      zpow *= z;
      acc += C(static_cast<R>(coeffs_[k].real()),
               static_cast<R>(coeffs_[k].imag())) *
             h;
    }
    return acc;
  }

  /// Coefficient-list rendering compatible with parse().
  std::string to_string() const;

private:
  std::vector<cnum> coeffs_;
};

/**
 * Square completion of A(f) = (phi_1 f + ... + phi_{d-1} f^{d-1} + f^d) f^{d-2}:
 * coefficients u_0..u_{d-1} and q_0..q_{d-2} with
 *   (u_0 + u_1 f + ... + u_{d-1} f^{d-1})^2 = A(f) + sum_i q_i f^i
 * identically in f. Solved top-down: u_{d-1} = 1, u_{d-2} = phi_{d-1}/2, then
 * each u_t = (phi_{t+1} - sum of the already-known cross terms)/2; finally
 * q_i = sum_{j<=i} u_j u_{i-j}.
 */
struct SquareCompletion {
  std::vector<cnum> u;
  std::vector<cnum> q;
};

/// phis holds phi_1..phi_{d-1}; requires d >= 2.
SquareCompletion complete_square(const std::vector<cnum>& phis, int d);

}  // namespace dlab
