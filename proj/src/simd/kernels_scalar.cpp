#include <algorithm>
#include <cmath>
#include <numbers>

#include "lqg/simd/kernels.hpp"

namespace lqg::simd::scalar {

void philox_uniforms(std::uint64_t seed, std::uint64_t stream, std::uint64_t first_block,
                     std::span<double> out) {
  for (std::size_t b = 0; 2 * b < out.size(); ++b) {
    const std::uint64_t block = first_block + b;
    std::uint32_t c0 = static_cast<std::uint32_t>(block), c1 = static_cast<std::uint32_t>(block >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream), c3 = static_cast<std::uint32_t>(stream >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed), k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
      const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
      const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
      c1 = static_cast<std::uint32_t>(p1);
      c3 = static_cast<std::uint32_t>(p0);
      c0 = n0;
      c2 = n2;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    const std::uint64_t w0 = (static_cast<std::uint64_t>(c1) << 32) | c0;
    const std::uint64_t w1 = (static_cast<std::uint64_t>(c3) << 32) | c2;
    out[2 * b] = (static_cast<double>(w0 >> 11) + 0.5) * 0x1.0p-53;
    out[2 * b + 1] = (static_cast<double>(w1 >> 11) + 0.5) * 0x1.0p-53;
  }
}

void stable_from_uniforms(std::span<const double> u_angle, std::span<const double> u_exp,
                          std::span<double> out, const StableParams& p) {
  const double alpha = p.alpha;
  const double t = p.skew * std::tan(std::numbers::pi * alpha / 2);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = std::numbers::pi * (u_angle[i] - 0.5);
    const double w = -std::log(u_exp[i]);
    const double a = alpha * (v + b);
    const double x = s * std::sin(a) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - a) / w, (1.0 - alpha) / alpha);
    out[i] = p.scale * x;
  }
}

void normal_from_uniforms(std::span<const double> u1, std::span<const double> u2,
                          std::span<double> out_a, std::span<double> out_b) {
  for (std::size_t i = 0; i < u1.size(); ++i) {
    const double r = std::sqrt(-2.0 * std::log(u1[i]));
    const double phi = 2.0 * std::numbers::pi * u2[i];
    out_a[i] = r * std::cos(phi);
    out_b[i] = r * std::sin(phi);
  }
}

void scaled_exp(std::span<const double> x, std::span<const double> v, double a, double b,
                double scale, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * std::exp(a * x[i] + b * v[i]);
}

double sum(std::span<const double> x) {
  double acc[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) acc[i % 4] += x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void elementwise_min(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a[i], b[i]);
}

void exp(std::span<const double> x, std::span<double> out) {
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::exp(v); });
}

void log(std::span<const double> x, std::span<double> out) {
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::log(v); });
}

void sin(std::span<const double> x, std::span<double> out) {
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::sin(v); });
}

void cos(std::span<const double> x, std::span<double> out) {
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::cos(v); });
}

}  // namespace lqg::simd::scalar
