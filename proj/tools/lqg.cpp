#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "lqg/cli/runner.hpp"
#include "lqg/cli/suites.hpp"

using namespace lqg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo experiments for Liouville Brownian motion and stable Levy processes"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the suites");
  bool show_params = false;
  list->add_flag("--params", show_params, "Print every module parameter with its default");

  auto* run = app.add_subcommand("run", "Run a suite from a config file or from flags");
  std::string config_path, suite;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  bool all = false;
  run->add_option("config", config_path, "JSON experiment config");
  auto* suite_opt = run->add_option("--suite", suite, "Suite name (see `list`)");
  auto* all_opt = run->add_flag("--all", all, "Run the full acceptance battery into OUT/<suite>/");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out, "Output directory");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  suite_opt->excludes(all_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  if (list->parsed()) {
    if (show_params) {
      std::cout << default_params().dump(2) << "\n";
      return kOk;
    }
    std::size_t width = 0;
    for (const Suite& s : suites()) width = std::max(width, s.name.size());
    for (const Suite& s : suites()) std::cout << s.name << std::string(width + 2 - s.name.size(), ' ') << s.description << "\n";
    return kOk;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      if (!suite.empty()) throw ConfigError("give either a config file or --suite, not both");
      config = load_config(config_path);
    } else if (!suite.empty()) {
      config.suite = suite;
    } else if (!all) {
      throw ConfigError("run needs a config file, --suite NAME or --all");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  if (seed) config.seed = *seed;
  if (out) config.out = *out;
  if (workers) config.workers = *workers;
  return all ? run_all(config, std::cerr) : run_suite(config, std::cerr);
}
