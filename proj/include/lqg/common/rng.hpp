#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace lqg {

/// Philox4x32-10 block function (Salmon et al., Random123).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The pair (seed, stream id) selects an
/// independent sequence, so workers never share state and results do not
/// depend on how tasks are scheduled.
class RandomStream {
public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal (Box-Muller, one cached value).
  double normal();
  /// Exp(1).
  double exponential();

  void fill_uniform(std::span<double> out);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Derive a child seed from a parent seed and a label; used to give every
/// suite component (field, walk, map ...) its own key space.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace lqg
