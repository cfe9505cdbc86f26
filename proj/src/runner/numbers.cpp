#include "hermite/runner/numbers.hpp"

#include <charconv>
#include <cmath>

#include "hermite/error.hpp"

namespace hermite::runner {

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_number(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty())
    throw ValidationError(what + ": '" + std::string(text) + "' is not a number");
  return v;
}

long long parse_integer(std::string_view text, const std::string& what) {
  long long v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty())
    throw ValidationError(what + ": '" + std::string(text) + "' is not an integer");
  return v;
}

}  // namespace hermite::runner
