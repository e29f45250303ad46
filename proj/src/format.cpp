#include "signorini/format.hpp"

#include <array>
#include <charconv>

#include "signorini/error.hpp"

namespace signorini {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format double");
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::ParseError, "malformed number '" + text + "'");
  }
  return v;
}

}  // namespace signorini
