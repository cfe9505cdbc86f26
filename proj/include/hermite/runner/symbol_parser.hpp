#pragma once

// Multiplier symbols from text: variables z1..zn, numbers, + - * / ^, sqrt, exp
// and parentheses, evaluated in complex arithmetic (principal branches).

#include <cstddef>
#include <string>

#include "hermite/error.hpp"
#include "hermite/multiplier.hpp"

namespace hermite::runner {

class SymbolSyntaxError : public ValidationError {
 public:
  SymbolSyntaxError(const std::string& message, std::size_t offset)
      : ValidationError(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

struct ParsedSymbol {
  MultiplierSymbol symbol;
  // max |m| over the lattice points with every k_j <= bound_cap
  double sampled_bound = 0.0;
  int bound_cap = 0;
};

// Throws SymbolSyntaxError for malformed text and ValidationError when the symbol is
// not finite at a sampled lattice point. Sector metadata is attached only when given.
ParsedSymbol parse_symbol(const std::string& expr, int dim, int bound_cap = 16,
                          std::optional<double> sector = std::nullopt);

}  // namespace hermite::runner
