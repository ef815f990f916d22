#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lqg/cli/config.hpp"
#include "lqg/common/report.hpp"

namespace lqg::cli {

/// Everything a suite emits. File names are relative to the run directory.
struct SuiteOutput {
  std::vector<EstimateReport> reports;
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::vector<std::pair<std::string, std::function<void(const std::filesystem::path&)>>> binaries;

  bool inconclusive() const;
};

struct Suite {
  std::string name;
  std::string description;
  /// Throws ConfigError before any sampling when the parameters are invalid.
  std::function<void(const ExperimentConfig&)> validate;
  std::function<SuiteOutput(const ExperimentConfig&)> run;
};

/// Registered suites in a fixed order.
const std::vector<Suite>& suites();
const Suite& find_suite(const std::string& name);

/// Every module parameter at its default value, in config form.
nlohmann::json default_params();

/// The suites run by `run --all`, one per acceptance criterion.
const std::vector<std::string>& acceptance_suites();

}  // namespace lqg::cli
