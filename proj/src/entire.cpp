#include "dlab/entire.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "expr_lexer.hpp"

namespace dlab {

namespace {
constexpr int kMaxDepth = 64;
}

EntireExpr::NodePtr EntireExpr::make_const(cnum c) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Const;
  n->value = c;
  return n;
}

EntireExpr::NodePtr EntireExpr::make(ExprKind k, NodePtr a, NodePtr b, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->exponent = exponent;
  int d = 1;
  if (n->a) d = std::max(d, n->a->depth + 1);
  if (n->b) d = std::max(d, n->b->depth + 1);
  if (d > kMaxDepth)
    throw std::length_error("entire expression deeper than 64 nodes");
  n->depth = d;
  return n;
}

EntireExpr EntireExpr::var() {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Var;
  return EntireExpr(std::move(n));
}

EntireExpr EntireExpr::add(const EntireExpr& l, const EntireExpr& r) {
  if (l.is_const() && r.is_const())
    return constant(l.node_->value + r.node_->value);
  if (l.is_const(cnum(0.0))) return r;
  if (r.is_const(cnum(0.0))) return l;
  return EntireExpr(make(ExprKind::Add, l.node_, r.node_, 0));
}

EntireExpr EntireExpr::sub(const EntireExpr& l, const EntireExpr& r) {
  return add(l, neg(r));
}

EntireExpr EntireExpr::mul(const EntireExpr& l, const EntireExpr& r) {
  if (l.is_const() && r.is_const())
    return constant(l.node_->value * r.node_->value);
  if (l.is_const(cnum(0.0)) || r.is_const(cnum(0.0))) return constant(cnum(0.0));
  if (l.is_const(cnum(1.0))) return r;
  if (r.is_const(cnum(1.0))) return l;
  return EntireExpr(make(ExprKind::Mul, l.node_, r.node_, 0));
}

EntireExpr EntireExpr::neg(const EntireExpr& e) {
  if (e.is_const()) return constant(-e.node_->value);
  if (e.kind() == ExprKind::Neg) return EntireExpr(e.node_->a);
  return EntireExpr(make(ExprKind::Neg, e.node_, nullptr, 0));
}

EntireExpr EntireExpr::exp(const EntireExpr& e) {
  if (e.is_const()) return constant(std::exp(e.node_->value));
  return EntireExpr(make(ExprKind::Exp, e.node_, nullptr, 0));
}

EntireExpr EntireExpr::ipow(const EntireExpr& e, int k) {
  if (k < 0) throw std::invalid_argument("ipow: exponent must be >= 0");
  if (k == 0) return constant(cnum(1.0));
  if (k == 1) return e;
  if (e.is_const()) {
    cnum base = e.node_->value, acc = 1.0;
    int kk = k;
    while (kk > 0) {
      if (kk & 1) acc *= base;
      base *= base;
      kk >>= 1;
    }
    return constant(acc);
  }
  return EntireExpr(make(ExprKind::IntPow, e.node_, nullptr, k));
}

EntireExpr EntireExpr::deriv() const {
  const Node* n = node_.get();
  switch (n->kind) {
    case ExprKind::Const:
      return constant(cnum(0.0));
    case ExprKind::Var:
      return constant(cnum(1.0));
    case ExprKind::Add:
      return add(EntireExpr(n->a).deriv(), EntireExpr(n->b).deriv());
    case ExprKind::Mul: {
      EntireExpr a(n->a), b(n->b);
      return add(mul(a.deriv(), b), mul(a, b.deriv()));
    }
    case ExprKind::Neg:
      return neg(EntireExpr(n->a).deriv());
    case ExprKind::Exp: {
      EntireExpr a(n->a);
      return mul(a.deriv(), *this);
    }
    case ExprKind::IntPow: {
      EntireExpr a(n->a);
      return mul(constant(cnum(n->exponent)),
                 mul(ipow(a, n->exponent - 1), a.deriv()));
    }
  }
  return constant(cnum(0.0));
}

bool EntireExpr::poly_node(const Node* n) {
  switch (n->kind) {
    case ExprKind::Const:
    case ExprKind::Var:
      return true;
    case ExprKind::Add:
    case ExprKind::Mul:
      return poly_node(n->a.get()) && poly_node(n->b.get());
    case ExprKind::Neg:
    case ExprKind::IntPow:
      return poly_node(n->a.get());
    case ExprKind::Exp:
      return n->a->kind == ExprKind::Const;
  }
  return false;
}

bool EntireExpr::is_polynomial() const { return poly_node(node_.get()); }

// Precedence levels: 0 additive, 1 multiplicative, 2 power/atom.
void EntireExpr::print_node(const Node* n, int parent_prec, std::string& out) {
  switch (n->kind) {
    case ExprKind::Const: {
      std::string lit = format_complex(n->value);
      const bool two_part = lit.find_first_of("+-", 1) != std::string::npos;
      const bool negative = !lit.empty() && lit[0] == '-';
      if (two_part || (negative && parent_prec >= 1)) {
        out += '(';
        out += lit;
        out += ')';
      } else {
        out += lit;
      }
      return;
    }
    case ExprKind::Var:
      out += 'x';
      return;
    case ExprKind::Add: {
      if (parent_prec > 0) out += '(';
      print_node(n->a.get(), 0, out);
      out += '+';
      print_node(n->b.get(), 0, out);
      if (parent_prec > 0) out += ')';
      return;
    }
    case ExprKind::Mul: {
      if (parent_prec > 1) out += '(';
      print_node(n->a.get(), 1, out);
      out += '*';
      print_node(n->b.get(), 1, out);
      if (parent_prec > 1) out += ')';
      return;
    }
    case ExprKind::Neg: {
      // the grammar has no unary minus on subexpressions; render as -1 * e
      if (parent_prec > 1) out += '(';
      out += "-1*";
      print_node(n->a.get(), 1, out);
      if (parent_prec > 1) out += ')';
      return;
    }
    case ExprKind::Exp:
      out += "exp(";
      print_node(n->a.get(), 0, out);
      out += ')';
      return;
    case ExprKind::IntPow:
      print_node(n->a.get(), 2, out);
      out += '^';
      out += std::to_string(n->exponent);
      return;
  }
}

std::string EntireExpr::to_string() const {
  std::string out;
  print_node(node_.get(), 0, out);
  return out;
}

bool approx_equal(const EntireExpr& e1, const EntireExpr& e2, double tol) {
  for (double radius : {1.0, 5.0}) {
    for (int k = 0; k < 32; ++k) {
      const double ang = 2.0 * std::numbers::pi * k / 32.0;
      const cnum z = radius * cnum(std::cos(ang), std::sin(ang));
      const cnum v1 = e1(z), v2 = e2(z);
      const double a1 = std::abs(v1), a2 = std::abs(v2);
      if (!std::isfinite(a1) || !std::isfinite(a2)) return false;
      if (std::abs(v1 - v2) > tol * (1.0 + std::min(a1, a2))) return false;
    }
  }
  return true;
}

namespace {

using detail::Lexer;
using detail::Tok;
using detail::Token;

EntireExpr parse_expr(Lexer& lex);

EntireExpr parse_atom(Lexer& lex) {
  const Token& t = lex.peek();
  switch (t.kind) {
    case Tok::Minus: {
      const std::size_t off = t.offset;
      lex.next();
      Token num = lex.next();
      if (num.kind != Tok::Number)
        throw ParseError("'-' must be followed by a number here", off);
      return EntireExpr::constant(num.imag ? cnum(0.0, -num.number)
                                           : cnum(-num.number, 0.0));
    }
    case Tok::Number: {
      Token num = lex.next();
      return EntireExpr::constant(num.imag ? cnum(0.0, num.number)
                                           : cnum(num.number, 0.0));
    }
    case Tok::Ident: {
      Token id = lex.next();
      if (id.ident == "x") return EntireExpr::var();
      if (id.ident == "exp") {
        if (lex.peek().kind != Tok::LParen)
          throw ParseError("expected '(' after exp", lex.peek().offset);
        lex.next();
        EntireExpr inner = parse_expr(lex);
        if (lex.peek().kind != Tok::RParen)
          throw ParseError("expected ')'", lex.peek().offset);
        lex.next();
        return EntireExpr::exp(inner);
      }
      throw ParseError("unknown identifier '" + id.ident + "'", id.offset);
    }
    case Tok::LParen: {
      lex.next();
      EntireExpr inner = parse_expr(lex);
      if (lex.peek().kind != Tok::RParen)
        throw ParseError("expected ')'", lex.peek().offset);
      lex.next();
      return inner;
    }
    default:
      throw ParseError("expected expression atom", t.offset);
  }
}

EntireExpr parse_factor(Lexer& lex) {
  EntireExpr base = parse_atom(lex);
  if (lex.peek().kind == Tok::Caret) {
    lex.next();
    Token e = lex.next();
    if (e.kind != Tok::Number || e.imag || e.number < 0.0 ||
        e.number != std::floor(e.number))
      throw ParseError("exponent must be a nonnegative integer", e.offset);
    return EntireExpr::ipow(base, static_cast<int>(e.number));
  }
  return base;
}

EntireExpr parse_term(Lexer& lex) {
  EntireExpr acc = parse_factor(lex);
  while (lex.peek().kind == Tok::Star) {
    lex.next();
    acc = EntireExpr::mul(acc, parse_factor(lex));
  }
  return acc;
}

EntireExpr parse_expr(Lexer& lex) {
  EntireExpr acc = parse_term(lex);
  while (lex.peek().kind == Tok::Plus || lex.peek().kind == Tok::Minus) {
    const bool plus = lex.peek().kind == Tok::Plus;
    lex.next();
    EntireExpr rhs = parse_term(lex);
    acc = plus ? EntireExpr::add(acc, rhs) : EntireExpr::sub(acc, rhs);
  }
  return acc;
}

}  // namespace

EntireExpr parse_entire_expr(std::string_view text) {
  Lexer lex(text);
  EntireExpr e = parse_expr(lex);
  if (lex.peek().kind != Tok::End)
    throw ParseError("unexpected trailing input", lex.peek().offset);
  return e;
}

}  // namespace dlab
