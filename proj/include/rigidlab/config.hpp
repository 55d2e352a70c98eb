#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace rigidlab {

enum class ExperimentKind {
  Ladder,
  Classify,
  SampleGaf,
  SampleDpp,
  SampleLattice,
  VarianceSweep,
  PalmSweep,
  KakutaniSweep,
  Recover,
  AppendixDemos,
  MixtureDemo,
};

std::string to_string(ExperimentKind k);

// Flat typed key-value experiment description. Values are stored parsed;
// every accessor falls back to the schema default when the key was omitted.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Ladder;
  std::map<std::string, std::string> strings;
  std::map<std::string, double> reals;
  std::map<std::string, long long> ints;
  std::map<std::string, bool> bools;
  std::map<std::string, std::vector<double>> real_lists;
  std::set<std::string> emit;  // subset of {csv, json, svg}
  std::uint64_t master_seed = 1;
  long long replicas = 1;
  std::string output_dir;
  std::string config_hash;  // FNV-1a of the raw config text
  std::string source_text;

  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::vector<double>& real_list(const std::string& key) const;
  bool has(const std::string& key) const;
};

struct ConfigIssue {
  int line = 0;
  std::string message;
};

using ValidationResult = std::variant<ExperimentConfig, std::vector<ConfigIssue>>;

// Full schema validation with line-anchored messages; unknown keys are
// errors and carry a nearest-key suggestion.
ValidationResult validate_config(const std::string& text);

// validate_config or throw ConfigError with all messages joined.
ExperimentConfig parse_config(const std::string& text);

}  // namespace rigidlab
