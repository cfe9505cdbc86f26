#pragma once

// Experiment dispatch: every experiment turns a validated config into a sealed report.

#include <string>
#include <vector>

#include "hermite/core.hpp"
#include "hermite/multiplier.hpp"
#include "hermite/runner/config.hpp"
#include "hermite/runner/report.hpp"

namespace hermite::runner {

std::vector<std::string> experiment_names();

// Validates the config, runs the named experiment and seals the report. Module
// errors are rethrown with the experiment name prepended, keeping their type.
ExperimentReport run(const ExperimentConfig& config);

// Seeded corpus member `item`: normal coefficients on |k| <= degree, keyed by (seed, item, draw).
HermiteExpansion corpus_member(int dim, int degree, const ValueSpace& space, std::uint64_t seed, std::uint64_t item,
                               std::uint64_t draw = 0);

// `catalog:<name>` selects a built-in symbol, anything else is parsed as an expression.
MultiplierSymbol config_symbol(const ExperimentConfig& config);

}  // namespace hermite::runner
