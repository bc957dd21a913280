#include "dlab/complex_literal.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace dlab {

namespace {

struct Part {
  double value = 0.0;
  bool imag = false;
};

// [sign] ( number ['i'] | 'i' )
Part parse_part(std::string_view s, std::size_t& pos, std::size_t base) {
  const std::size_t start = pos;
  double sign = 1.0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    if (s[pos] == '-') sign = -1.0;
    ++pos;
  }
  if (pos < s.size() && s[pos] == 'i') {
    ++pos;
    return {sign, true};
  }
  double v = 0.0;
  const char* first = s.data() + pos;
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{})
    throw ParseError("expected number in complex literal", base + start);
  pos = static_cast<std::size_t>(res.ptr - s.data());
  bool imag = false;
  if (pos < s.size() && s[pos] == 'i') {
    imag = true;
    ++pos;
  }
  return {sign * v, imag};
}

cnum parse_complex_at(std::string_view text, std::size_t base) {
  std::size_t lo = 0, hi = text.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1]))) --hi;
  std::string_view s = text.substr(0, hi);
  std::size_t pos = lo;
  if (pos >= s.size()) throw ParseError("empty complex literal", base + lo);

  Part a = parse_part(s, pos, base);
  if (pos == s.size()) return a.imag ? cnum(0.0, a.value) : cnum(a.value, 0.0);

  if (s[pos] != '+' && s[pos] != '-')
    throw ParseError("unexpected character in complex literal", base + pos);
  if (a.imag)
    throw ParseError("imaginary part must come last in complex literal", base + pos);
  Part b = parse_part(s, pos, base);
  if (!b.imag)
    throw ParseError("second component of complex literal must be imaginary", base + pos);
  if (pos != s.size())
    throw ParseError("trailing characters after complex literal", base + pos);
  return cnum(a.value, b.value);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

cnum parse_complex(std::string_view text) { return parse_complex_at(text, 0); }

std::string format_complex(cnum v) {
  const double re = v.real(), im = v.imag();
  if (im == 0.0) return format_double(re);
  std::string imag_part = format_double(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0.0 ? "-" : "") + imag_part;
  return format_double(re) + (im < 0.0 ? "-" : "+") + imag_part;
}

std::vector<cnum> parse_complex_list(std::string_view text) {
  std::vector<cnum> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::size_t end = (comma == std::string_view::npos) ? text.size() : comma;
    out.push_back(parse_complex_at(text.substr(pos, end - pos), pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace dlab
