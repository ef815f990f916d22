#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace lqg {

/// A named statistic with its Monte-Carlo standard error. This is the record
/// every estimator returns and the CLI serializes.
struct EstimateReport {
  std::string name;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  /// Set when the tail data were too thin to fit; reported, not failed.
  bool inconclusive = false;
};

nlohmann::json to_json(const EstimateReport& report);
EstimateReport report_from_json(const nlohmann::json& j);

/// Column-oriented CSV table with a header row.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(const std::vector<double>& row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& data() const { return rows_; }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace lqg
