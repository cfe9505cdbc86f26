#pragma once

// Flat `key = value` experiment configuration.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hermite/core.hpp"

namespace hermite::runner {

using KeyValues = std::map<std::string, std::string>;

// One `key = value` per line; `#` starts a comment; blank lines are ignored.
// Errors name the offending line.
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::string& path);

struct ExperimentConfig {
  std::string experiment;
  int dim = 1;
  int cap = 8;                    // degree cap of the corpus and the grids
  int spatial_nodes = 0;          // per axis; 0 means the default for the dimension
  double time_min = 1e-4;
  double time_max = 40.0;
  int time_nodes = 200;
  std::vector<double> p{2.0};
  std::string value_space = "real";  // real | complex | lq
  double q = 2.0;
  int components = 2;
  std::optional<std::uint64_t> seed;
  int draws = 2000;
  int corpus_size = 20;
  int corpus_degree = 6;          // total degree |k| of corpus members
  int threads = 1;
  std::vector<int> orders;        // g-function orders; default all ones
  std::vector<int> alpha;         // representation / meda order; default all ones
  std::string symbol = "1";
  std::optional<double> symbol_sector;
  std::string growth = "exponential";  // exponential | polynomial
  double omega = 1.0;
  double growth_power = 0.0;
  int ell = 1;
  int split = 0;                  // catalog riesz symbol
  // Potential-space order for sobolev and triebel (H^{-beta}); no default, the
  // l vs l/2 reading is the caller's choice. Catalog imaginary powers default to 1.
  std::optional<double> beta;
  int k = 2;
  std::vector<double> t_list{0.5, 1.0, 2.0};
  double u_max = 20.0;
  int u_points = 81;
  std::string out = ".";
  std::string format = "json";

  static ExperimentConfig from_key_values(const KeyValues& kv);
  // Every key with its effective value (defaults filled in).
  KeyValues echo() const;
  // The keys that determine the numbers (everything except threads and output settings).
  KeyValues semantic_echo() const;

  ValueSpace space() const;
  bool randomized() const;
  void validate() const;
};

std::vector<std::string> config_keys();

}  // namespace hermite::runner
