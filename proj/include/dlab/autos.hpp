#pragma once

#include <variant>
#include <vector>

#include "dlab/entire.hpp"
#include "dlab/surface.hpp"

namespace dlab {

enum class Side { First, Second };
inline Side flip(Side s) { return s == Side::First ? Side::Second : Side::First; }

/**
 * Overshear automorphism. On the first side:
 *   (x, y, z) -> (x, y + (p(w) - p(z))/x, w),  w = z e^{x f(x)} + x g(x),
 * with f the exponent of the multiplier and g the translation; the second
 * side is the same map conjugated by the involution. The map is the identity
 * exactly when f and g both vanish (the multiplier is then e^0 = 1).
 */
struct Overshear {
  EntireExpr f, g;
  Side side = Side::First;
  bool is_identity(double tol = 1e-10) const;
};

struct Involution {};

using Letter = std::variant<Overshear, Involution>;

/// Composition word; letters[0] is the outermost map, i.e. applied last.
using Word = std::vector<Letter>;

inline Letter overshear_letter(EntireExpr f, EntireExpr g, Side s = Side::First) {
  return Overshear{std::move(f), std::move(g), s};
}
inline Letter involution_letter() { return Involution{}; }

/// Words longer than this are rejected: expression trees grow multiplicatively
/// under reduction and nothing at desk scale needs more.
constexpr std::size_t kMaxWordLetters = 64;

/// (x, y, z) -> (y, x, z).
inline SurfacePoint involution_apply(const SurfacePoint& p) { return {p.y, p.x, p.z}; }

/// (e^u - 1) / u, evaluated by series near 0 so the limit value 1 is exact.
template <class R>
std::complex<R> expm1_over(const std::complex<R>& u) {
  if (std::abs(u) < R(1e-4)) {
    const R c6 = R(1) / R(6), c24 = R(1) / R(24);
    return R(1) + u * (R(0.5) + u * (c6 + u * c24));
  }
  return (std::exp(u) - R(1)) / u;
}

/**
 * Unchecked overshear application at any precision. The second coordinate is
 * computed as y + Dp(w, z) * q with q = z f(x) (e^{xf(x)}-1)/(xf(x)) + g(x),
 * which equals (p(w) - p(z))/x with no division by x, so x = 0 is regular.
 * Samplers use this path and treat non-finite output as a skipped draw.
 */
template <class R>
PointT<R> overshear_apply_raw(const ComplexPoly& p, const Overshear& o,
                              const PointT<R>& pt) {
  using C = std::complex<R>;
  if (o.side == Side::Second) {
    const PointT<R> swapped{pt.y, pt.x, pt.z};
    const PointT<R> q =
        overshear_apply_raw(p, Overshear{o.f, o.g, Side::First}, swapped);
    return {q.y, q.x, q.z};
  }
  const C fx = o.f.eval(pt.x);
  const C gx = o.g.eval(pt.x);
  const C u = pt.x * fx;
  const C w = pt.z * std::exp(u) + pt.x * gx;
  const C q = pt.z * fx * expm1_over(u) + gx;
  const C y2 = pt.y + p.divided_difference(w, pt.z) * q;
  return {pt.x, y2, w};
}

/// Checked application; throws std::invalid_argument("point off surface") when
/// the input fails a loose containment test.
SurfacePoint overshear_apply(const Danielewski& S, const Overshear& o,
                             const SurfacePoint& pt);

template <class R>
PointT<R> word_apply_raw(const ComplexPoly& p, const Word& w, PointT<R> pt) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (std::holds_alternative<Involution>(*it)) {
      std::swap(pt.x, pt.y);
    } else {
      pt = overshear_apply_raw(p, std::get<Overshear>(*it), pt);
    }
  }
  return pt;
}

/// Left-to-right word application (leftmost letter outermost, applied last).
SurfacePoint word_apply(const Danielewski& S, const Word& w, const SurfacePoint& pt);

/// O_{f,g} . O_{h,k} = O_{f+h, g e^{x h} + k} on the same side.
Overshear compose_same_side(const Overshear& o1, const Overshear& o2);

/// Inverse overshear O_{-f, -g e^{-x f}} on the same side.
Overshear invert(const Overshear& o);

Letter invert(const Letter& l);
Word word_inverse(const Word& w);

/**
 * Canonical reduced form: involutions are pushed to the right (flipping the
 * side of every overshear they pass), cancelled in pairs, adjacent same-side
 * overshears merged and identities dropped. What remains is a side-alternating
 * sequence of non-identity overshears plus the parity of surviving
 * involutions, recorded as one trailing involution.
 */
struct ReducedWord {
  std::vector<Overshear> factors;
  bool trailing_involution = false;

  Word to_word() const;
  bool empty() const { return factors.empty() && !trailing_involution; }
};

ReducedWord reduce(const Word& w);

/// reduce() rendered back as a Word; at most one involution letter remains,
/// at the end (the coset flag). Pointwise equal to the input word.
Word word_reduce(const Word& w);

/**
 * Conjugation into the alternating form I O I O ... O (all overshears side
 * First, one involution before each). `normal` is that form, or empty, or a
 * single involution, or a single side-First overshear when the input is
 * conjugate into one factor subgroup and cannot absorb an involution.
 * `conjugator` witnesses normal = conjugator^{-1} . w . conjugator.
 */
struct ConjugationResult {
  Word normal;
  Word conjugator;
};

ConjugationResult conjugate_normal_form(const Word& w);

}  // namespace dlab
