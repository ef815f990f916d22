#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lqg::io {

/// Little-endian flat binary writer: fixed header fields followed by arrays
/// of IEEE-754 doubles.
class BinaryWriter {
public:
  void put_u64(std::uint64_t v);
  void put_f64(double v);
  void put_f64_array(std::span<const double> values);

  const std::vector<unsigned char>& bytes() const { return bytes_; }
  void save(const std::filesystem::path& path) const;

private:
  std::vector<unsigned char> bytes_;
};

class BinaryReader {
public:
  explicit BinaryReader(std::vector<unsigned char> bytes);
  static BinaryReader load(const std::filesystem::path& path);

  std::uint64_t get_u64();
  double get_f64();
  std::vector<double> get_f64_array(std::size_t count);
  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  void need(std::size_t count) const;

  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace lqg::io
