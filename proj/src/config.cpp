#include "rigidlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "rigidlab/errors.hpp"
#include "rigidlab/io.hpp"

namespace rigidlab {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Ladder: return "ladder";
    case ExperimentKind::Classify: return "classify";
    case ExperimentKind::SampleGaf: return "sample_gaf";
    case ExperimentKind::SampleDpp: return "sample_dpp";
    case ExperimentKind::SampleLattice: return "sample_lattice";
    case ExperimentKind::VarianceSweep: return "variance_sweep";
    case ExperimentKind::PalmSweep: return "palm_sweep";
    case ExperimentKind::KakutaniSweep: return "kakutani_sweep";
    case ExperimentKind::Recover: return "recover";
    case ExperimentKind::AppendixDemos: return "appendix_demos";
    case ExperimentKind::MixtureDemo: return "mixture_demo";
  }
  return "?";
}

namespace {

enum class FieldType { Int, Real, Bool, String, RealList, Enum, Emit };

struct FieldSpec {
  const char* name;
  FieldType type;
  bool required;
  const char* default_value;          // textual default (nullptr = none)
  std::vector<const char*> choices;   // Enum only
};

const std::vector<FieldSpec>& common_fields() {
  static const std::vector<FieldSpec> f = {
      {"experiment", FieldType::Enum, true, nullptr,
       {"ladder", "classify", "sample_gaf", "sample_dpp", "sample_lattice",
        "variance_sweep", "palm_sweep", "kakutani_sweep", "recover",
        "appendix_demos", "mixture_demo"}},
      {"master_seed", FieldType::Int, false, "1", {}},
      {"replicas", FieldType::Int, false, "1", {}},
      {"output_dir", FieldType::String, true, nullptr, {}},
      {"emit", FieldType::Emit, false, "csv,json", {}},
  };
  return f;
}

std::vector<FieldSpec> measure_fields() {
  return {
      {"measure", FieldType::Enum, true, nullptr, {"gaussian_power", "disk_uniform"}},
      {"a", FieldType::Real, false, "0", {}},
      {"b", FieldType::Real, false, "1", {}},
      {"c", FieldType::Real, false, "2", {}},
      {"radius", FieldType::Real, false, "1", {}},
  };
}

std::vector<FieldSpec> fields_for(ExperimentKind kind) {
  std::vector<FieldSpec> f;
  auto add = [&](std::vector<FieldSpec> more) {
    f.insert(f.end(), more.begin(), more.end());
  };
  switch (kind) {
    case ExperimentKind::Ladder:
      add(measure_fields());
      f.push_back({"j", FieldType::Int, false, "64", {}});
      break;
    case ExperimentKind::Classify:
      add(measure_fields());
      f.push_back({"j", FieldType::Int, false, "256", {}});
      f.push_back({"j_min", FieldType::Int, false, "64", {}});
      f.push_back({"abs_continuous", FieldType::Bool, false, "true", {}});
      break;
    case ExperimentKind::SampleGaf:
      f.push_back({"alpha", FieldType::Real, false, "1", {}});
      f.push_back({"alpha_list", FieldType::RealList, false, nullptr, {}});
      f.push_back({"window_radius", FieldType::Real, true, nullptr, {}});
      f.push_back({"tail_tol", FieldType::Real, false, "1e-12", {}});
      break;
    case ExperimentKind::SampleDpp:
      add(measure_fields());
      f.push_back({"rank", FieldType::Int, true, nullptr, {}});
      break;
    case ExperimentKind::SampleLattice:
      f.push_back({"beta", FieldType::Real, true, nullptr, {}});
      f.push_back({"m", FieldType::Int, false, "64", {}});
      f.push_back({"symmetric", FieldType::Bool, false, "true", {}});
      break;
    case ExperimentKind::VarianceSweep:
      f.push_back({"target", FieldType::Enum, true, nullptr, {"lattice", "gaf"}});
      f.push_back({"l_list", FieldType::RealList, true, nullptr, {}});
      f.push_back({"eps", FieldType::Real, false, "1", {}});
      f.push_back({"beta", FieldType::Real, false, "0.25", {}});
      f.push_back({"alpha", FieldType::Real, false, "0.5", {}});
      f.push_back({"r0", FieldType::Real, false, "1.25", {}});
      f.push_back({"k", FieldType::Int, false, "0", {}});
      f.push_back({"mode", FieldType::Enum, false, "bound", {"bound", "exact", "both"}});
      f.push_back({"tail_tol", FieldType::Real, false, "1e-12", {}});
      break;
    case ExperimentKind::PalmSweep:
      add(measure_fields());
      f.push_back({"n_list", FieldType::RealList, true, nullptr, {}});
      break;
    case ExperimentKind::KakutaniSweep:
      f.push_back({"beta", FieldType::Real, true, nullptr, {}});
      f.push_back({"k_max", FieldType::Int, true, nullptr, {}});
      break;
    case ExperimentKind::Recover:
      f.push_back({"process", FieldType::Enum, true, nullptr, {"dpp", "gaf", "lattice"}});
      add(measure_fields());
      f[f.size() - 5].required = false;  // measure only needed for dpp
      f[f.size() - 5].default_value = "gaussian_power";
      f.push_back({"rank", FieldType::Int, false, "64", {}});
      f.push_back({"alpha", FieldType::Real, false, "0.5", {}});
      f.push_back({"beta", FieldType::Real, false, "0.25", {}});
      f.push_back({"tail_tol", FieldType::Real, false, "1e-12", {}});
      f.push_back({"r0", FieldType::Real, true, nullptr, {}});
      f.push_back({"k_max", FieldType::Int, false, "0", {}});
      f.push_back({"epsilon", FieldType::Real, false, "0", {}});
      f.push_back({"l", FieldType::Real, false, "0", {}});
      f.push_back({"certificate_delta", FieldType::Real, false, "0", {}});
      f.push_back({"j_max", FieldType::Int, false, "2048", {}});
      break;
    case ExperimentKind::AppendixDemos:
      break;
    case ExperimentKind::MixtureDemo:
      add(measure_fields());
      f.push_back({"rank", FieldType::Int, false, "1", {}});
      f.push_back({"weak_index", FieldType::Int, false, "-1", {}});
      f.push_back({"weak_value", FieldType::Real, false, "0.5", {}});
      f.push_back({"perturbation", FieldType::Real, false, "-1", {}});
      break;
  }
  return f;
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = int(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = int(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool parse_int(const std::string& s, long long& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool parse_real(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && !s.empty();
}

struct RawEntry {
  std::string value;
  int line;
};

}  // namespace

double ExperimentConfig::real(const std::string& key) const {
  auto it = reals.find(key);
  if (it == reals.end()) throw ConfigError("missing real field: " + key);
  return it->second;
}

long long ExperimentConfig::integer(const std::string& key) const {
  auto it = ints.find(key);
  if (it == ints.end()) throw ConfigError("missing int field: " + key);
  return it->second;
}

const std::string& ExperimentConfig::str(const std::string& key) const {
  auto it = strings.find(key);
  if (it == strings.end()) throw ConfigError("missing string field: " + key);
  return it->second;
}

bool ExperimentConfig::flag(const std::string& key) const {
  auto it = bools.find(key);
  if (it == bools.end()) throw ConfigError("missing bool field: " + key);
  return it->second;
}

const std::vector<double>& ExperimentConfig::real_list(const std::string& key) const {
  auto it = real_lists.find(key);
  if (it == real_lists.end()) throw ConfigError("missing list field: " + key);
  return it->second;
}

bool ExperimentConfig::has(const std::string& key) const {
  return strings.count(key) || reals.count(key) || ints.count(key) ||
         bools.count(key) || real_lists.count(key);
}

ValidationResult validate_config(const std::string& text) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, RawEntry> raw;
  {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string::npos) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        issues.push_back({lineno, "expected KEY = VALUE"});
        continue;
      }
      auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t");
        std::size_t e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        issues.push_back({lineno, "empty key"});
        continue;
      }
      if (raw.count(key)) {
        issues.push_back({lineno, "duplicate key '" + key + "'"});
        continue;
      }
      raw[key] = {value, lineno};
    }
  }

  auto kind_it = raw.find("experiment");
  if (kind_it == raw.end()) {
    issues.push_back({0, "missing required key 'experiment'"});
    return issues;
  }
  ExperimentKind kind;
  {
    bool found = false;
    for (int k = 0; k <= int(ExperimentKind::MixtureDemo); ++k) {
      if (to_string(ExperimentKind(k)) == kind_it->second.value) {
        kind = ExperimentKind(k);
        found = true;
        break;
      }
    }
    if (!found) {
      issues.push_back({kind_it->second.line,
                        "unknown experiment '" + kind_it->second.value + "'"});
      return issues;
    }
  }

  std::vector<FieldSpec> schema = common_fields();
  {
    auto extra = fields_for(kind);
    schema.insert(schema.end(), extra.begin(), extra.end());
  }

  // Unknown keys, with a nearest-name suggestion.
  for (const auto& [key, entry] : raw) {
    bool known = false;
    for (const auto& s : schema)
      if (key == s.name) known = true;
    if (known) continue;
    std::string best;
    int best_d = 4;
    for (const auto& s : schema) {
      int d = edit_distance(key, s.name);
      if (d < best_d) {
        best_d = d;
        best = s.name;
      }
    }
    std::string msg = "unknown key '" + key + "'";
    if (!best.empty()) msg += "; did you mean '" + best + "'?";
    issues.push_back({entry.line, msg});
  }

  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.source_text = text;
  cfg.config_hash = io::hex64(io::fnv1a64(text));

  for (const auto& s : schema) {
    auto it = raw.find(s.name);
    std::string value;
    int line = 0;
    if (it != raw.end()) {
      value = it->second.value;
      line = it->second.line;
    } else if (s.required) {
      issues.push_back({0, std::string("missing required key '") + s.name + "'"});
      continue;
    } else if (s.default_value) {
      value = s.default_value;
    } else {
      continue;  // optional, no default
    }
    switch (s.type) {
      case FieldType::Int: {
        long long v;
        if (!parse_int(value, v)) {
          issues.push_back({line, std::string("field '") + s.name + "' expects an integer, got '" + value + "'"});
          break;
        }
        cfg.ints[s.name] = v;
        break;
      }
      case FieldType::Real: {
        double v;
        if (!parse_real(value, v)) {
          issues.push_back({line, std::string("field '") + s.name + "' expects a number, got '" + value + "'"});
          break;
        }
        cfg.reals[s.name] = v;
        break;
      }
      case FieldType::Bool: {
        if (value == "true") cfg.bools[s.name] = true;
        else if (value == "false") cfg.bools[s.name] = false;
        else issues.push_back({line, std::string("field '") + s.name + "' expects true/false"});
        break;
      }
      case FieldType::String:
        cfg.strings[s.name] = value;
        break;
      case FieldType::Enum: {
        bool ok = false;
        for (const char* c : s.choices)
          if (value == c) ok = true;
        if (!ok) {
          std::string msg = std::string("field '") + s.name + "' must be one of {";
          for (std::size_t i = 0; i < s.choices.size(); ++i)
            msg += std::string(i ? "," : "") + s.choices[i];
          msg += "}";
          issues.push_back({line, msg});
          break;
        }
        cfg.strings[s.name] = value;
        break;
      }
      case FieldType::RealList: {
        std::vector<double> vs;
        std::stringstream ss(value);
        std::string item;
        bool ok = true;
        while (std::getline(ss, item, ',')) {
          double v;
          if (!parse_real(item, v)) {
            ok = false;
            break;
          }
          vs.push_back(v);
        }
        if (!ok || vs.empty()) {
          issues.push_back({line, std::string("field '") + s.name + "' expects a comma-separated number list"});
          break;
        }
        cfg.real_lists[s.name] = vs;
        break;
      }
      case FieldType::Emit: {
        std::stringstream ss(value);
        std::string item;
        bool ok = true;
        std::set<std::string> emit;
        while (std::getline(ss, item, ',')) {
          if (item != "csv" && item != "json" && item != "svg") {
            ok = false;
            break;
          }
          emit.insert(item);
        }
        if (!ok || emit.empty())
          issues.push_back({line, "field 'emit' expects a subset of csv,json,svg"});
        else
          cfg.emit = emit;
        break;
      }
    }
  }

  // Semantic checks.
  if (cfg.ints.count("replicas")) {
    cfg.replicas = cfg.ints["replicas"];
    if (cfg.replicas < 0)
      issues.push_back({raw.count("replicas") ? raw["replicas"].line : 0,
                        "field 'replicas' must be >= 0"});
  }
  if (cfg.ints.count("master_seed"))
    cfg.master_seed = std::uint64_t(cfg.ints["master_seed"]);
  if (cfg.strings.count("output_dir")) cfg.output_dir = cfg.strings["output_dir"];
  if (cfg.ints.count("j") && cfg.ints["j"] < 1)
    issues.push_back({raw.count("j") ? raw["j"].line : 0, "field 'j' must be >= 1"});
  if (cfg.ints.count("rank") && cfg.ints["rank"] < 0)
    issues.push_back({raw.count("rank") ? raw["rank"].line : 0, "field 'rank' must be >= 0"});
  if (cfg.ints.count("k_max") && cfg.ints["k_max"] < 0)
    issues.push_back({raw.count("k_max") ? raw["k_max"].line : 0, "field 'k_max' must be >= 0"});
  if (kind == ExperimentKind::Recover) {
    bool has_pair = cfg.reals["epsilon"] > 0.0 && cfg.reals["l"] > 0.0;
    bool has_delta = cfg.reals["certificate_delta"] > 0.0;
    if (!has_pair && !has_delta)
      issues.push_back({0, "recover needs either (epsilon, l) or certificate_delta"});
  }

  if (!issues.empty()) return issues;
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  ValidationResult r = validate_config(text);
  if (auto* cfg = std::get_if<ExperimentConfig>(&r)) return *cfg;
  std::string msg = "config errors:";
  for (const auto& issue : std::get<std::vector<ConfigIssue>>(r))
    msg += "\n  line " + std::to_string(issue.line) + ": " + issue.message;
  throw ConfigError(msg);
}

}  // namespace rigidlab
