#include "dlab/autos.hpp"

#include <stdexcept>

namespace dlab {

namespace {

const EntireExpr kZero = EntireExpr::constant(cnum(0.0));

void require_word_size(const Word& w) {
  if (w.size() > kMaxWordLetters)
    throw std::length_error("word longer than 64 letters");
}

}  // namespace

bool Overshear::is_identity(double tol) const {
  return approx_equal(f, kZero, tol) && approx_equal(g, kZero, tol);
}

SurfacePoint overshear_apply(const Danielewski& S, const Overshear& o,
                             const SurfacePoint& pt) {
  if (!S.contains(pt, 1e-6))
    throw std::invalid_argument("overshear_apply: point off surface");
  return overshear_apply_raw(S.poly(), o, pt);
}

SurfacePoint word_apply(const Danielewski& S, const Word& w, const SurfacePoint& pt) {
  require_word_size(w);
  if (!S.contains(pt, 1e-6))
    throw std::invalid_argument("word_apply: point off surface");
  return word_apply_raw(S.poly(), w, pt);
}

Overshear compose_same_side(const Overshear& o1, const Overshear& o2) {
  if (o1.side != o2.side)
    throw std::invalid_argument("compose_same_side: side mismatch");
  // o1 is outer, o2 inner: z goes to (z e^{x f2} + x g2) e^{x f1} + x g1,
  // so the merged exponent is f1 + f2 and the translation g2 e^{x f1} + g1.
  EntireExpr f = EntireExpr::add(o1.f, o2.f);
  EntireExpr g = EntireExpr::add(
      EntireExpr::mul(o2.g, EntireExpr::exp(EntireExpr::mul(EntireExpr::var(), o1.f))),
      o1.g);
  return {std::move(f), std::move(g), o1.side};
}

Overshear invert(const Overshear& o) {
  EntireExpr f = EntireExpr::neg(o.f);
  EntireExpr g = EntireExpr::neg(EntireExpr::mul(
      o.g, EntireExpr::exp(EntireExpr::neg(EntireExpr::mul(EntireExpr::var(), o.f)))));
  return {std::move(f), std::move(g), o.side};
}

Letter invert(const Letter& l) {
  if (std::holds_alternative<Involution>(l)) return l;
  return invert(std::get<Overshear>(l));
}

Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(invert(*it));
  return out;
}

Word ReducedWord::to_word() const {
  Word out;
  out.reserve(factors.size() + 1);
  for (const auto& o : factors) out.push_back(o);
  if (trailing_involution) out.push_back(Involution{});
  return out;
}

ReducedWord reduce(const Word& w) {
  require_word_size(w);

  // Push involutions right: an overshear preceded by an odd number of
  // involution letters changes side; surviving involutions collapse to the
  // parity at the end.
  std::vector<Overshear> flat;
  int inversions = 0;
  for (const auto& letter : w) {
    if (std::holds_alternative<Involution>(letter)) {
      ++inversions;
      continue;
    }
    Overshear o = std::get<Overshear>(letter);
    if (inversions % 2 != 0) o.side = flip(o.side);
    flat.push_back(std::move(o));
  }

  // Merge adjacent same-side factors, dropping identities as they appear.
  std::vector<Overshear> out;
  for (auto& next : flat) {
    if (next.is_identity()) continue;
    Overshear cur = std::move(next);
    bool dropped = false;
    while (!out.empty() && out.back().side == cur.side) {
      cur = compose_same_side(out.back(), cur);
      out.pop_back();
      if (cur.is_identity()) {
        dropped = true;
        break;
      }
    }
    if (!dropped) out.push_back(std::move(cur));
  }

  return {std::move(out), inversions % 2 != 0};
}

Word word_reduce(const Word& w) { return reduce(w).to_word(); }

namespace {

// Conjugation by a single letter: cur -> letter^{-1} . cur . letter.
ReducedWord conjugate_by(const ReducedWord& cur, const Letter& letter) {
  Word next;
  next.reserve(cur.factors.size() + 3);
  next.push_back(invert(letter));
  for (const auto& o : cur.factors) next.push_back(o);
  if (cur.trailing_involution) next.push_back(Involution{});
  next.push_back(letter);
  return reduce(next);
}

}  // namespace

ConjugationResult conjugate_normal_form(const Word& w) {
  ReducedWord cur = reduce(w);
  Word conjugator;

  // Cyclic reduction: rotating by the leading factor merges the word's ends
  // whenever the factor count and the involution parity disagree mod 2.
  std::size_t rotations_left = cur.factors.size() + 4;
  while (true) {
    const std::size_t m = cur.factors.size();
    const bool parity = cur.trailing_involution;
    if (m == 0) break;
    if (m == 1 && !parity) break;
    if ((m % 2 != 0) == parity) break;  // cyclically alternating already
    if (rotations_left-- == 0)
      throw std::runtime_error("conjugate_normal_form: reduction did not converge");
    Letter lead = cur.factors.front();
    cur = conjugate_by(cur, lead);
    conjugator.push_back(std::move(lead));
  }

  // One involution conjugation fixes the leading side without changing shape.
  if (!cur.factors.empty()) {
    const Side want = (cur.factors.size() == 1 && !cur.trailing_involution)
                          ? Side::First
                          : Side::Second;
    if (cur.factors.front().side != want) {
      cur = conjugate_by(cur, Involution{});
      conjugator.push_back(Involution{});
    }
  }

  ConjugationResult result;
  result.conjugator = std::move(conjugator);
  const std::size_t m = cur.factors.size();
  if (m == 0) {
    if (cur.trailing_involution) result.normal.push_back(Involution{});
    return result;
  }
  if (m == 1 && !cur.trailing_involution) {
    result.normal.push_back(cur.factors.front());  // single residual factor
    return result;
  }
  // Explicit alternating form: the canonical factors carry sides
  // Second, First, Second, ... which is exactly one involution ahead of each
  // side-First overshear.
  for (const auto& o : cur.factors) {
    result.normal.push_back(Involution{});
    result.normal.push_back(Overshear{o.f, o.g, Side::First});
  }
  return result;
}

}  // namespace dlab
