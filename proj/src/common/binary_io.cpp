#include "lqg/common/binary_io.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace lqg::io {

void BinaryWriter::put_u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void BinaryWriter::put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::put_f64_array(std::span<const double> values) {
  bytes_.reserve(bytes_.size() + 8 * values.size());
  for (double v : values) put_f64(v);
}

void BinaryWriter::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes_.data()), static_cast<std::streamsize>(bytes_.size()));
}

BinaryReader::BinaryReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

BinaryReader BinaryReader::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return BinaryReader(std::move(bytes));
}

void BinaryReader::need(std::size_t count) const {
  if (remaining() < count) throw std::runtime_error("binary array file truncated");
}

std::uint64_t BinaryReader::get_u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

double BinaryReader::get_f64() { return std::bit_cast<double>(get_u64()); }

std::vector<double> BinaryReader::get_f64_array(std::size_t count) {
  need(8 * count);
  std::vector<double> out(count);
  for (auto& v : out) v = get_f64();
  return out;
}

}  // namespace lqg::io
