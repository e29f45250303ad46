#pragma once

#include <string>

namespace signorini {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Inverse of format_double; throws ParseError on malformed text.
double parse_double(const std::string& text);

}  // namespace signorini
