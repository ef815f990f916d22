#include "lqg/common/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lqg {

nlohmann::json to_json(const EstimateReport& report) {
  nlohmann::json params = report.params;
  if (report.inconclusive) params["inconclusive"] = true;
  // JSON has no NaN/inf; non-finite values are carried as null.
  auto number = [](double x) -> nlohmann::json {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  return nlohmann::json{{"name", report.name},
                        {"estimate", number(report.estimate)},
                        {"stderr", number(report.stderr_)},
                        {"n", report.n},
                        {"seed", report.seed},
                        {"params", params}};
}

EstimateReport report_from_json(const nlohmann::json& j) {
  EstimateReport r;
  r.name = j.at("name").get<std::string>();
  r.estimate = j.at("estimate").is_null() ? NAN : j.at("estimate").get<double>();
  r.stderr_ = j.at("stderr").is_null() ? NAN : j.at("stderr").get<double>();
  r.n = j.at("n").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.params = j.at("params");
  if (r.params.contains("inconclusive")) {
    r.inconclusive = r.params["inconclusive"].get<bool>();
    r.params.erase("inconclusive");
  }
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
}

}  // namespace lqg
