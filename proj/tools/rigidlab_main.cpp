#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "rigidlab/config.hpp"
#include "rigidlab/demo_configs.hpp"
#include "rigidlab/experiments.hpp"
#include "rigidlab/io.hpp"
#include "rigidlab/parallel.hpp"

namespace {

int run_text(const std::string& text, const std::string& output_override) {
  rigidlab::ValidationResult r = rigidlab::validate_config(text);
  if (auto* issues = std::get_if<std::vector<rigidlab::ConfigIssue>>(&r)) {
    for (const auto& issue : *issues)
      std::fprintf(stderr, "config error at line %d: %s\n", issue.line,
                   issue.message.c_str());
    return 2;
  }
  const auto& cfg = std::get<rigidlab::ExperimentConfig>(r);
  rigidlab::RunResult result = rigidlab::run_experiment(cfg, output_override);
  if (result.exit_code != 0) {
    std::fprintf(stderr, "experiment failed: %s\n", result.error.c_str());
    return 1;
  }
  for (const auto& path : result.artifacts) std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidlab: rigidity and tolerance experiments for random point fields"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: RIGIDLAB_THREADS or hardware)");

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--output-dir", output_dir, "override the config output_dir");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", validate_path, "experiment config file")->required();

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "run a bundled demo recipe");
  demo->add_option("name", demo_name, "demo name (use 'list' to enumerate)")->required();
  demo->add_option("--output-dir", output_dir, "override the demo output_dir");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) rigidlab::set_thread_count(threads);

  try {
    if (run->parsed()) {
      return run_text(rigidlab::io::read_file(config_path), output_dir);
    }
    if (validate->parsed()) {
      auto r = rigidlab::validate_config(rigidlab::io::read_file(validate_path));
      if (auto* issues = std::get_if<std::vector<rigidlab::ConfigIssue>>(&r)) {
        for (const auto& issue : *issues)
          std::fprintf(stderr, "line %d: %s\n", issue.line, issue.message.c_str());
        return 2;
      }
      std::printf("ok: %s experiment, config_hash=%s\n",
                  to_string(std::get<rigidlab::ExperimentConfig>(r).kind).c_str(),
                  std::get<rigidlab::ExperimentConfig>(r).config_hash.c_str());
      return 0;
    }
    if (demo->parsed()) {
      if (demo_name == "list") {
        for (const auto& [name, text] : rigidlab::demo_configs())
          std::printf("%s\n", name.c_str());
        return 0;
      }
      const std::string* text = rigidlab::find_demo_config(demo_name);
      if (!text) {
        std::fprintf(stderr, "unknown demo '%s' (try 'demo list')\n", demo_name.c_str());
        return 2;
      }
      return run_text(*text, output_dir);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
