#pragma once

// Shortest round-trip decimal text for doubles, and strict parsing back.

#include <string>
#include <string_view>

namespace hermite::runner {

std::string format_number(double v);
// Throws ValidationError naming `what` unless the whole text is a number.
double parse_number(std::string_view text, const std::string& what);
long long parse_integer(std::string_view text, const std::string& what);

}  // namespace hermite::runner
