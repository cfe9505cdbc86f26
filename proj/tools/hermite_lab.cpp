// hermite_lab: run an experiment from a flat config, or re-check a saved report.
//
// Exit codes: 0 success, 1 validation error, 2 numeric non-convergence, 3 I/O.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hermite/error.hpp"
#include "hermite/runner/config.hpp"
#include "hermite/runner/experiments.hpp"
#include "hermite/runner/report.hpp"

using namespace hermite;
using namespace hermite::runner;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNonConvergence = 2, kIo = 3 };

struct CommonFlags {
  std::string config;
  std::string out;
  std::string seed;
  std::string threads;
  std::string format;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "flat key = value config file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "seed for randomized experiments");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--set", f.overrides, "extra key=value settings (repeatable)");
}

ExperimentConfig build_config(const std::string& experiment, const CommonFlags& f) {
  KeyValues kv;
  if (!f.config.empty()) kv = load_key_values(f.config);
  const auto it = kv.find("experiment");
  if (it != kv.end() && !it->second.empty() && it->second != experiment)
    throw ValidationError("config names experiment '" + it->second + "' but the command runs '" + experiment + "'");
  kv["experiment"] = experiment;
  for (const auto& item : f.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (!f.out.empty()) kv["out"] = f.out;
  if (!f.seed.empty()) kv["seed"] = f.seed;
  if (!f.threads.empty()) kv["threads"] = f.threads;
  if (!f.format.empty()) kv["format"] = f.format;
  return ExperimentConfig::from_key_values(kv);
}

void print_summary(const ExperimentReport& r, const std::vector<std::string>& written) {
  std::cout << r.experiment << "  hash " << r.content_hash << "\n";
  for (const auto& [k, v] : r.summary) std::cout << "  " << k << " = " << v << "\n";
  for (const auto& path : written) std::cout << "  wrote " << path << "\n";
}

int run_experiment(const std::string& experiment, const CommonFlags& f) {
  const auto config = build_config(experiment, f);
  const auto report = run(config);
  print_summary(report, write_report(report, config.out, config.format));
  return kOk;
}

struct ReportFlags {
  std::string path;
  std::string out;
  std::string format;
  bool rerun = false;
  std::string threads;
};

int check_report(const ReportFlags& f) {
  const auto report = from_json(read_text_file(f.path));
  const auto recomputed = compute_content_hash(report);
  if (recomputed != report.content_hash) {
    std::cerr << "content hash mismatch: file says " << report.content_hash << ", contents give " << recomputed << "\n";
    return kValidation;
  }
  std::cout << "hash verified " << recomputed << "\n";
  if (f.rerun) {
    auto kv = report.config;
    if (!f.threads.empty()) kv["threads"] = f.threads;
    const auto fresh = run(ExperimentConfig::from_key_values(kv));
    if (fresh.content_hash != report.content_hash) {
      std::cerr << "rerun gives a different hash: " << fresh.content_hash << "\n";
      return kValidation;
    }
    std::cout << "rerun reproduces the report\n";
  }
  if (!f.out.empty()) {
    const auto written = write_report(report, f.out, f.format.empty() ? "json" : f.format);
    for (const auto& path : written) std::cout << "  wrote " << path << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite expansion experiments"};
  app.require_subcommand(1);

  // Command name -> experiment; `multiplier` and `sobolev` take a mode.
  std::map<std::string, CommonFlags> flags;
  std::map<std::string, CLI::App*> commands;
  const std::vector<std::pair<std::string, std::string>> simple = {
      {"basis", "orthonormality and Parseval on a seeded corpus"},
      {"kernel", "Mehler kernel, eigen-action and subordination checks (n = 1)"},
      {"gfunc", "g-function norm equivalence ratios"},
      {"polarize", "polarization identity residuals"},
      {"multiplier", "imaginary-power representation of T_m, or Mellin samples"},
      {"meda", "integrability of sup_t |M(t, u)| against an imaginary-power growth model"},
      {"sobolev", "Sobolev / potential / Triebel norm equivalence ratios"},
  };
  for (const auto& [name, help] : simple) {
    commands[name] = app.add_subcommand(name, help);
    add_common(commands[name], flags[name]);
  }
  std::string multiplier_mode = "representation";
  commands["multiplier"]
      ->add_option("--mode", multiplier_mode, "representation or mellin")
      ->check(CLI::IsMember({"representation", "mellin"}));
  std::string sobolev_mode = "sobolev";
  commands["sobolev"]
      ->add_option("--mode", sobolev_mode, "sobolev or triebel")
      ->check(CLI::IsMember({"sobolev", "triebel"}));

  ReportFlags report_flags;
  auto* report_cmd = app.add_subcommand("report", "verify a JSON report's hash and re-export it");
  report_cmd->add_option("path", report_flags.path, "JSON report")->required();
  report_cmd->add_option("--out", report_flags.out, "re-export into this directory");
  report_cmd->add_option("--format", report_flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  report_cmd->add_flag("--rerun", report_flags.rerun, "rerun the embedded config and compare hashes");
  report_cmd->add_option("--threads", report_flags.threads, "worker threads for --rerun");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (report_cmd->parsed()) return check_report(report_flags);
    const std::map<std::string, std::string> experiment_of = {
        {"basis", "basis"},       {"kernel", "kernel"}, {"gfunc", "equivalence"}, {"polarize", "polarization"},
        {"multiplier", multiplier_mode}, {"meda", "meda"}, {"sobolev", sobolev_mode}};
    for (const auto& [name, cmd] : commands)
      if (cmd->parsed()) return run_experiment(experiment_of.at(name), flags[name]);
    return kValidation;
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
