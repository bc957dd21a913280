#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dlab {

using cnum = std::complex<double>;

/// Thrown by the text parsers; carries the byte offset of the offending
/// character in the original input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Parses a complex literal: `a`, `bi`, `a+bi`, `a-bi` with decimal reals and
/// an optional leading sign; `i` alone means `1i`.
cnum parse_complex(std::string_view text);

/// Renders a value as a literal accepted by parse_complex; round-trips the
/// double components exactly.
std::string format_complex(cnum v);

/// Comma-separated complex literals (polynomial coefficient lists, points).
std::vector<cnum> parse_complex_list(std::string_view text);

}  // namespace dlab
