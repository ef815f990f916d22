#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

namespace lqg::cli {

/// Invalid configuration; the message names the line or field at fault.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One suite run. `params` holds per-module sub-records keyed by module name
/// (analytic_bounds, stable_levy, brownian_map, gmc_lbm); absent fields keep
/// their defaults.
struct ExperimentConfig {
  std::string suite;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::filesystem::path out = "runs";
  nlohmann::json params = nlohmann::json::object();

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// SHA-256 of the canonical JSON form, hex encoded.
std::string config_hash(const ExperimentConfig& config);
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Reads or writes the fields of a module config from a JSON object,
/// rejecting unknown keys and mistyped values.
class FieldReader {
public:
  FieldReader(const nlohmann::json& object, std::string where);

  template <class T>
  void operator()(const char* key, T& value) {
    seen_.push_back(key);
    if (!object_.contains(key)) return;
    const nlohmann::json& j = object_.at(key);
    if (!matches<T>(j)) throw ConfigError(where_ + "." + key + ": expected " + expected<T>() + ", got " + j.dump());
    value = j.template get<T>();
  }
  void finish() const;

private:
  template <class T>
  static bool matches(const nlohmann::json& j) {
    if constexpr (std::is_same_v<T, bool>) return j.is_boolean();
    else if constexpr (std::is_integral_v<T>) return j.is_number_unsigned() || (j.is_number_integer() && !(std::is_unsigned_v<T> && j.template get<std::int64_t>() < 0));
    else if constexpr (std::is_floating_point_v<T>) return j.is_number();
    else if constexpr (std::is_same_v<T, std::string>) return j.is_string();
    else if constexpr (std::is_same_v<T, nlohmann::json>) return j.is_object();
    else return j.is_array() && std::all_of(j.begin(), j.end(), matches<typename T::value_type>);
  }

  template <class T>
  static std::string expected() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return std::is_unsigned_v<T> ? "a non-negative integer" : "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else if constexpr (std::is_same_v<T, nlohmann::json>) return "an object";
    else return "an array, each element " + expected<typename T::value_type>();
  }

  const nlohmann::json& object_;
  std::string where_;
  std::vector<std::string> seen_;
};

class FieldWriter {
public:
  template <class T>
  void operator()(const char* key, const T& value) {
    json_[key] = value;
  }
  nlohmann::json take() { return std::move(json_); }

private:
  nlohmann::json json_ = nlohmann::json::object();
};

}  // namespace lqg::cli
