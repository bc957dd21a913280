// Internal tokenizer shared by the expression parsers. Not installed.
#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "dlab/complex_literal.hpp"

namespace dlab::detail {

enum class Tok {
  Number,  // decimal real, imag flag set when an 'i' suffix was present
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  End,
};

struct Token {
  Tok kind = Tok::End;
  double number = 0.0;
  bool imag = false;
  std::string ident;
  std::size_t offset = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': current_.kind = Tok::Plus;   ++pos_; return;
      case '-': current_.kind = Tok::Minus;  ++pos_; return;
      case '*': current_.kind = Tok::Star;   ++pos_; return;
      case '/': current_.kind = Tok::Slash;  ++pos_; return;
      case '^': current_.kind = Tok::Caret;  ++pos_; return;
      case '(': current_.kind = Tok::LParen; ++pos_; return;
      case ')': current_.kind = Tok::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (res.ec != std::errc{})
        throw ParseError("malformed number", pos_);
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      current_.kind = Tok::Number;
      current_.number = v;
      if (pos_ < text_.size() && text_[pos_] == 'i') {
        current_.imag = true;
        ++pos_;
      }
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "i") {  // the imaginary unit, value 1i
        current_.kind = Tok::Number;
        current_.number = 1.0;
        current_.imag = true;
        return;
      }
      current_.kind = Tok::Ident;
      current_.ident = std::move(name);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

}  // namespace dlab::detail
