#include "hermite/runner/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hermite/error.hpp"
#include "hermite/littlewood_paley.hpp"
#include "hermite/runner/numbers.hpp"

namespace hermite::runner {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>)
      out += format_number(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

int as_int(const std::string& key, const std::string& value) {
  const long long v = parse_integer(value, "config key '" + key + "'");
  if (v < -1000000000LL || v > 1000000000LL) throw ValidationError("config key '" + key + "': value out of range");
  return static_cast<int>(v);
}

const std::vector<std::string> kExperiments = {"basis",          "kernel", "equivalence", "polarization", "mellin",
                                               "representation", "meda",   "sobolev",     "triebel"};

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("config line " + std::to_string(number) + ": empty key");
    if (kv.count(key)) throw ValidationError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

std::vector<std::string> config_keys() {
  return {"experiment", "dim",        "cap",           "spatial_nodes", "time_min",   "time_max",      "time_nodes",
          "p",          "value_space", "q",            "components",    "seed",       "draws",         "corpus_size",
          "corpus_degree", "threads", "orders",        "alpha",         "symbol",     "symbol_sector", "growth",
          "omega",      "growth_power", "ell",         "split",         "beta",          "k",          "t_list",        "u_max",
          "u_points",   "out",        "format"};
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValues& kv) {
  const auto keys = config_keys();
  for (const auto& [key, value] : kv)
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ValidationError("unknown config key '" + key + "'");
  ExperimentConfig c;
  auto get = [&](const char* key) -> const std::string* {
    // An empty value means the default, so an echoed config reads back unchanged.
    const auto it = kv.find(key);
    return it == kv.end() || it->second.empty() ? nullptr : &it->second;
  };
  auto num = [&](const char* key, double& field) {
    if (const auto* v = get(key)) field = parse_number(*v, std::string("config key '") + key + "'");
  };
  auto integer = [&](const char* key, int& field) {
    if (const auto* v = get(key)) field = as_int(key, *v);
  };
  auto text = [&](const char* key, std::string& field) {
    if (const auto* v = get(key)) field = *v;
  };
  text("experiment", c.experiment);
  integer("dim", c.dim);
  integer("cap", c.cap);
  integer("spatial_nodes", c.spatial_nodes);
  num("time_min", c.time_min);
  num("time_max", c.time_max);
  integer("time_nodes", c.time_nodes);
  if (const auto* v = get("p")) {
    c.p.clear();
    for (const auto& item : split_list(*v)) c.p.push_back(parse_number(item, "config key 'p'"));
  }
  text("value_space", c.value_space);
  num("q", c.q);
  integer("components", c.components);
  if (const auto* v = get("seed")) {
    std::uint64_t s = 0;
    const auto r = std::from_chars(v->data(), v->data() + v->size(), s);
    if (r.ec != std::errc() || r.ptr != v->data() + v->size() || v->empty())
      throw ValidationError("config key 'seed': '" + *v + "' is not an unsigned integer");
    c.seed = s;
  }
  integer("draws", c.draws);
  integer("corpus_size", c.corpus_size);
  integer("corpus_degree", c.corpus_degree);
  integer("threads", c.threads);
  auto int_list = [&](const char* key, std::vector<int>& field) {
    if (const auto* v = get(key)) {
      field.clear();
      for (const auto& item : split_list(*v)) field.push_back(as_int(key, item));
    }
  };
  int_list("orders", c.orders);
  int_list("alpha", c.alpha);
  text("symbol", c.symbol);
  if (const auto* v = get("symbol_sector")) c.symbol_sector = parse_number(*v, "config key 'symbol_sector'");
  text("growth", c.growth);
  num("omega", c.omega);
  num("growth_power", c.growth_power);
  integer("ell", c.ell);
  integer("split", c.split);
  if (const auto* v = get("beta")) c.beta = parse_number(*v, "config key 'beta'");
  integer("k", c.k);
  if (const auto* v = get("t_list")) {
    c.t_list.clear();
    for (const auto& item : split_list(*v)) c.t_list.push_back(parse_number(item, "config key 't_list'"));
  }
  num("u_max", c.u_max);
  integer("u_points", c.u_points);
  text("out", c.out);
  text("format", c.format);
  return c;
}

KeyValues ExperimentConfig::echo() const {
  KeyValues kv = semantic_echo();
  kv["threads"] = std::to_string(threads);
  kv["out"] = out;
  kv["format"] = format;
  return kv;
}

KeyValues ExperimentConfig::semantic_echo() const {
  KeyValues kv;
  kv["experiment"] = experiment;
  kv["dim"] = std::to_string(dim);
  kv["cap"] = std::to_string(cap);
  kv["spatial_nodes"] = std::to_string(spatial_nodes);
  kv["time_min"] = format_number(time_min);
  kv["time_max"] = format_number(time_max);
  kv["time_nodes"] = std::to_string(time_nodes);
  kv["p"] = join(p);
  kv["value_space"] = value_space;
  kv["q"] = format_number(q);
  kv["components"] = std::to_string(components);
  kv["seed"] = seed ? std::to_string(*seed) : "";
  kv["draws"] = std::to_string(draws);
  kv["corpus_size"] = std::to_string(corpus_size);
  kv["corpus_degree"] = std::to_string(corpus_degree);
  kv["orders"] = join(orders);
  kv["alpha"] = join(alpha);
  kv["symbol"] = symbol;
  kv["symbol_sector"] = symbol_sector ? format_number(*symbol_sector) : "";
  kv["growth"] = growth;
  kv["omega"] = format_number(omega);
  kv["growth_power"] = format_number(growth_power);
  kv["ell"] = std::to_string(ell);
  kv["split"] = std::to_string(split);
  kv["beta"] = beta ? format_number(*beta) : "";
  kv["k"] = std::to_string(k);
  kv["t_list"] = join(t_list);
  kv["u_max"] = format_number(u_max);
  kv["u_points"] = std::to_string(u_points);
  return kv;
}

ValueSpace ExperimentConfig::space() const {
  if (value_space == "real") return ValueSpace::real();
  if (value_space == "complex") return ValueSpace::complex();
  if (value_space == "lq") return ValueSpace::lq(q, components);
  throw ValidationError("config key 'value_space': expected real, complex or lq");
}

bool ExperimentConfig::randomized() const {
  return experiment == "basis" || experiment == "equivalence" || experiment == "polarization" ||
         experiment == "representation" || experiment == "sobolev" || experiment == "triebel";
}

void ExperimentConfig::validate() const {
  if (experiment.empty()) throw ValidationError("config: no experiment named");
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end())
    throw ValidationError("unknown experiment '" + experiment + "'");
  if (dim < 1 || dim > kMaxDim) throw ValidationError("config key 'dim': must be 1, 2 or 3");
  if (cap < 0 || cap > 64) throw ValidationError("config key 'cap': must be in 0..64");
  if (spatial_nodes < 0) throw ValidationError("config key 'spatial_nodes': must be >= 0");
  const std::pair<const char*, double> reals[] = {{"time_min", time_min}, {"time_max", time_max}, {"q", q},
                                                   {"omega", omega},       {"growth_power", growth_power},
                                                   {"beta", beta.value_or(1.0)}, {"u_max", u_max}};
  for (const auto& [key, v] : reals)
    if (!std::isfinite(v)) throw ValidationError(std::string("config key '") + key + "': must be finite");
  if (symbol_sector && !(*symbol_sector > 0.0 && *symbol_sector < std::numbers::pi))
    throw ValidationError("config key 'symbol_sector': must be in (0, pi)");
  if (!(time_min > 0.0) || !(time_max > time_min)) throw ValidationError("config: need 0 < time_min < time_max");
  if (time_nodes < 2 || time_nodes > 4000) throw ValidationError("config key 'time_nodes': must be in 2..4000");
  if (p.empty()) throw ValidationError("config key 'p': empty list");
  for (double v : p)
    if (!(v >= 1.0) || !std::isfinite(v)) throw ValidationError("config key 'p': every p must be a finite value >= 1");
  (void)space();
  if (draws < kMinDraws) throw ValidationError("config key 'draws': at least " + std::to_string(kMinDraws));
  if (corpus_size < 1 || corpus_size > 100000) throw ValidationError("config key 'corpus_size': must be in 1..100000");
  if (corpus_degree < 0 || corpus_degree > cap) throw ValidationError("config key 'corpus_degree': must be in 0..cap");
  if (threads < 1 || threads > 256) throw ValidationError("config key 'threads': must be in 1..256");
  if (!orders.empty() && static_cast<int>(orders.size()) != dim)
    throw ValidationError("config key 'orders': needs one entry per dimension");
  if (!alpha.empty() && static_cast<int>(alpha.size()) != dim)
    throw ValidationError("config key 'alpha': needs one entry per dimension");
  if (growth != "exponential" && growth != "polynomial")
    throw ValidationError("config key 'growth': expected exponential or polynomial");
  if (ell < 1) throw ValidationError("config key 'ell': must be >= 1");
  if (split < 0 || split > dim) throw ValidationError("config key 'split': must be in 0..dim");
  if (beta && !(*beta > 0.0)) throw ValidationError("config key 'beta': must be positive");
  if (!beta && (experiment == "sobolev" || experiment == "triebel"))
    throw ValidationError("config key 'beta': required for " + experiment + " (e.g. beta = ell/2 or beta = ell)");
  if (t_list.empty()) throw ValidationError("config key 't_list': empty list");
  for (double t : t_list)
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("config key 't_list': times must be positive");
  if (!(u_max > 0.0) || u_points < 2) throw ValidationError("config: need u_max > 0 and u_points >= 2");
  if (format != "json" && format != "csv") throw ValidationError("config key 'format': expected csv or json");
  if (randomized() && !seed)
    throw ValidationError("experiment '" + experiment + "' is randomized and needs a seed");
}

}  // namespace hermite::runner
