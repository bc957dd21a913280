#include "dlab/surface_expr.hpp"

#include <cmath>
#include <memory>

#include "expr_lexer.hpp"

namespace dlab {

namespace {

using detail::Lexer;
using detail::Tok;
using detail::Token;

enum class Op { Const, VarX, VarY, VarZ, Add, Sub, Mul, Div, Exp, IntPow };

struct Node {
  Op op;
  clong value{};
  std::shared_ptr<const Node> a, b;
  int exponent = 0;
};
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, int k = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->exponent = k;
  return n;
}

NodePtr make_const(clong v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

clong eval(const Node* n, const SurfacePointL& p) {
  switch (n->op) {
    case Op::Const: return n->value;
    case Op::VarX: return p.x;
    case Op::VarY: return p.y;
    case Op::VarZ: return p.z;
    case Op::Add: return eval(n->a.get(), p) + eval(n->b.get(), p);
    case Op::Sub: return eval(n->a.get(), p) - eval(n->b.get(), p);
    case Op::Mul: return eval(n->a.get(), p) * eval(n->b.get(), p);
    case Op::Div: return eval(n->a.get(), p) / eval(n->b.get(), p);
    case Op::Exp: return std::exp(eval(n->a.get(), p));
    case Op::IntPow: {
      clong base = eval(n->a.get(), p);
      clong acc(1, 0);
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

NodePtr parse_expr(Lexer& lex);

NodePtr parse_atom(Lexer& lex) {
  const Token& t = lex.peek();
  switch (t.kind) {
    case Tok::Minus: {
      const std::size_t off = t.offset;
      lex.next();
      Token num = lex.next();
      if (num.kind != Tok::Number)
        throw ParseError("'-' must be followed by a number here", off);
      return make_const(num.imag ? clong(0.0L, -num.number)
                                 : clong(-num.number, 0.0L));
    }
    case Tok::Number: {
      Token num = lex.next();
      return make_const(num.imag ? clong(0.0L, num.number)
                                 : clong(num.number, 0.0L));
    }
    case Tok::Ident: {
      Token id = lex.next();
      if (id.ident == "x") return make(Op::VarX);
      if (id.ident == "y") return make(Op::VarY);
      if (id.ident == "z") return make(Op::VarZ);
      if (id.ident == "exp") {
        if (lex.peek().kind != Tok::LParen)
          throw ParseError("expected '(' after exp", lex.peek().offset);
        lex.next();
        NodePtr inner = parse_expr(lex);
        if (lex.peek().kind != Tok::RParen)
          throw ParseError("expected ')'", lex.peek().offset);
        lex.next();
        return make(Op::Exp, std::move(inner));
      }
      throw ParseError("unknown identifier '" + id.ident + "'", id.offset);
    }
    case Tok::LParen: {
      lex.next();
      NodePtr inner = parse_expr(lex);
      if (lex.peek().kind != Tok::RParen)
        throw ParseError("expected ')'", lex.peek().offset);
      lex.next();
      return inner;
    }
    default:
      throw ParseError("expected expression atom", t.offset);
  }
}

NodePtr parse_factor(Lexer& lex) {
  NodePtr base = parse_atom(lex);
  if (lex.peek().kind == Tok::Caret) {
    lex.next();
    Token e = lex.next();
    if (e.kind != Tok::Number || e.imag || e.number < 0.0 ||
        e.number != std::floor(e.number))
      throw ParseError("exponent must be a nonnegative integer", e.offset);
    return make(Op::IntPow, std::move(base), nullptr, static_cast<int>(e.number));
  }
  return base;
}

NodePtr parse_term(Lexer& lex) {
  NodePtr acc = parse_factor(lex);
  while (lex.peek().kind == Tok::Star || lex.peek().kind == Tok::Slash) {
    const bool mul = lex.peek().kind == Tok::Star;
    lex.next();
    acc = make(mul ? Op::Mul : Op::Div, std::move(acc), parse_factor(lex));
  }
  return acc;
}

NodePtr parse_expr(Lexer& lex) {
  NodePtr acc = parse_term(lex);
  while (lex.peek().kind == Tok::Plus || lex.peek().kind == Tok::Minus) {
    const bool plus = lex.peek().kind == Tok::Plus;
    lex.next();
    acc = make(plus ? Op::Add : Op::Sub, std::move(acc), parse_term(lex));
  }
  return acc;
}

}  // namespace

SurfaceFunction parse_surface_expr(std::string_view text) {
  Lexer lex(text);
  NodePtr root = parse_expr(lex);
  if (lex.peek().kind != Tok::End)
    throw ParseError("unexpected trailing input", lex.peek().offset);
  return {std::string(text),
          [root](const SurfacePointL& p) { return eval(root.get(), p); }};
}

}  // namespace dlab
