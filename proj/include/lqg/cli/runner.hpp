#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lqg/cli/config.hpp"

namespace lqg::cli {

enum ExitCode : int { kOk = 0, kError = 1, kInconclusive = 2 };

std::string version();

/// Exclusive hold on an output directory, released on destruction.
class OutputLock {
public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

private:
  std::filesystem::path path_;
};

/// Runs one suite into config.out: reports.json, config.json, CSV curves,
/// optional binaries, then manifest.json. On error or SIGINT/SIGTERM the
/// files written so far are removed and no manifest is left behind.
/// Returns kOk, kInconclusive when any report is flagged, or kError.
int run_suite(const ExperimentConfig& config, std::ostream& log);

/// Every acceptance suite into config.out/<suite>/.
int run_all(const ExperimentConfig& config, std::ostream& log);

}  // namespace lqg::cli
