#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lqg/simd/kernels.hpp"

namespace lqg::simd {

namespace {

Isa detect() {
  if (const char* forced = std::getenv("LQG_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("simd::") + what + ": span size mismatch");
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("requested SIMD variant not supported by this CPU");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#define LQG_DISPATCH(fn, ...) \
  (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))

void philox_uniforms(std::uint64_t seed, std::uint64_t stream, std::uint64_t first_block,
                     std::span<double> out) {
  if (out.size() % 2 != 0) throw std::invalid_argument("simd::philox_uniforms: odd output size");
  LQG_DISPATCH(philox_uniforms, seed, stream, first_block, out);
}

void stable_from_uniforms(std::span<const double> u_angle, std::span<const double> u_exp,
                          std::span<double> out, const StableParams& p) {
  check_sizes(u_angle.size(), out.size(), "stable_from_uniforms");
  check_sizes(u_exp.size(), out.size(), "stable_from_uniforms");
  LQG_DISPATCH(stable_from_uniforms, u_angle, u_exp, out, p);
}

void normal_from_uniforms(std::span<const double> u1, std::span<const double> u2,
                          std::span<double> out_a, std::span<double> out_b) {
  check_sizes(u1.size(), u2.size(), "normal_from_uniforms");
  check_sizes(u1.size(), out_a.size(), "normal_from_uniforms");
  check_sizes(u1.size(), out_b.size(), "normal_from_uniforms");
  LQG_DISPATCH(normal_from_uniforms, u1, u2, out_a, out_b);
}

void scaled_exp(std::span<const double> x, std::span<const double> v, double a, double b,
                double scale, std::span<double> out) {
  check_sizes(x.size(), out.size(), "scaled_exp");
  check_sizes(v.size(), out.size(), "scaled_exp");
  LQG_DISPATCH(scaled_exp, x, v, a, b, scale, out);
}

double sum(std::span<const double> x) { return LQG_DISPATCH(sum, x); }

void elementwise_min(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  check_sizes(a.size(), out.size(), "elementwise_min");
  check_sizes(b.size(), out.size(), "elementwise_min");
  LQG_DISPATCH(elementwise_min, a, b, out);
}

void exp(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "exp");
  LQG_DISPATCH(exp, x, out);
}

void log(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "log");
  LQG_DISPATCH(log, x, out);
}

void sin(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "sin");
  LQG_DISPATCH(sin, x, out);
}

void cos(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "cos");
  LQG_DISPATCH(cos, x, out);
}

#undef LQG_DISPATCH

}  // namespace lqg::simd
