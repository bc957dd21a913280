#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

#include "dlab/complex_literal.hpp"

namespace dlab {

enum class ExprKind { Const, Var, Add, Mul, Neg, Exp, IntPow };

/**
 * Immutable expression tree for entire functions of one complex variable
 * (node kinds: constant, the variable, sum, product, negation, exp, and
 * nonnegative integer powers — everything expressible is entire).
 *
 * Trees are built through the static factories, which fold constant subtrees
 * and reject depth above 64. Copies share structure; all operations are pure.
 */
class EntireExpr {
public:
  /// Default-constructed expression is the zero constant.
  EntireExpr() : EntireExpr(make_const(cnum(0.0))) {}

  static EntireExpr constant(cnum c) { return EntireExpr(make_const(c)); }
  static EntireExpr var();
  static EntireExpr add(const EntireExpr& l, const EntireExpr& r);
  static EntireExpr sub(const EntireExpr& l, const EntireExpr& r);
  static EntireExpr mul(const EntireExpr& l, const EntireExpr& r);
  static EntireExpr neg(const EntireExpr& e);
  static EntireExpr exp(const EntireExpr& e);
  /// Requires k >= 0.
  static EntireExpr ipow(const EntireExpr& e, int k);

  ExprKind kind() const { return node_->kind; }
  int depth() const { return node_->depth; }
  bool is_const() const { return node_->kind == ExprKind::Const; }
  bool is_const(cnum v) const {
    return node_->kind == ExprKind::Const && node_->value == v;
  }

  template <class R>
  std::complex<R> eval(const std::complex<R>& z) const {
    return eval_node<R>(node_.get(), z);
  }
  cnum operator()(const cnum& z) const { return eval(z); }

  /// Symbolic derivative (constants folded, no further simplification).
  EntireExpr deriv() const;

  /// Polynomial means: no Exp node with a non-constant argument.
  bool is_polynomial() const;
  bool is_transcendental() const { return !is_polynomial(); }

  /// Grammar-compatible rendering; reparses to a pointwise-equal expression.
  std::string to_string() const;

private:
  struct Node {
    ExprKind kind;
    cnum value{};                      // Const
    std::shared_ptr<const Node> a, b;  // children
    int exponent = 0;                  // IntPow
    int depth = 1;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit EntireExpr(NodePtr n) : node_(std::move(n)) {}
  static NodePtr make_const(cnum c);
  static NodePtr make(ExprKind k, NodePtr a, NodePtr b, int exponent);

  template <class R>
  static std::complex<R> eval_node(const Node* n, const std::complex<R>& z) {
    using C = std::complex<R>;
    switch (n->kind) {
      case ExprKind::Const:
        return C(static_cast<R>(n->value.real()), static_cast<R>(n->value.imag()));
      case ExprKind::Var:
        return z;
      case ExprKind::Add:
        return eval_node<R>(n->a.get(), z) + eval_node<R>(n->b.get(), z);
      case ExprKind::Mul:
        return eval_node<R>(n->a.get(), z) * eval_node<R>(n->b.get(), z);
      case ExprKind::Neg:
        return -eval_node<R>(n->a.get(), z);
      case ExprKind::Exp:
        return std::exp(eval_node<R>(n->a.get(), z));
      case ExprKind::IntPow: {
        C base = eval_node<R>(n->a.get(), z);
        C acc(1, 0);
        int k = n->exponent;
        while (k > 0) {
          if (k & 1) acc *= base;
          base *= base;
          k >>= 1;
        }
        return acc;
      }
    }
    return {};
  }

  static bool poly_node(const Node* n);
  static void print_node(const Node* n, int parent_prec, std::string& out);

  NodePtr node_;
};

/**
 * Sampled equality: true iff on 64 fixed points (32 equally spaced angles on
 * each of |z| = 1 and |z| = 5) the deviation |e1(z) - e2(z)| stays within
 * tol * (1 + |value|) in both directions. Heuristic by design: sound for the
 * polynomial and exp-polynomial generators used here, which 64 generic
 * samples pin down far beyond coincidence probability.
 */
bool approx_equal(const EntireExpr& e1, const EntireExpr& e2, double tol = 1e-10);

/// Parses the one-variable grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ('^' uint)?
///   atom   := complex-literal | 'x' | 'exp' '(' expr ')' | '(' expr ')'
EntireExpr parse_entire_expr(std::string_view text);

}  // namespace dlab
