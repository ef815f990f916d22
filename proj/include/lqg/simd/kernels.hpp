#pragma once

// Data-parallel inner loops shared by the samplers. Each kernel has a scalar
// reference implementation (plain loops over <cmath>) and an AVX2 variant
// with its own polynomial vector math; the active variant is chosen once at
// runtime from CPUID and can be forced with LQG_SIMD=scalar|avx2.

#include <cstdint>
#include <span>
#include <string_view>

namespace lqg::simd {

enum class Isa { scalar, avx2 };

bool isa_available(Isa isa);
Isa active_isa();
/// Force a variant (tests, benchmarks). Throws if the CPU lacks it.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

/// Constants of the Chambers-Mallows-Stuck map for a strictly alpha-stable
/// law S_alpha(scale, skew, 0), alpha != 1.
struct StableParams {
  double alpha = 1.5;
  double skew = -1.0;
  double scale = 1.0;
};

/// Philox4x32-10 uniforms in (0, 1): block b yields out[2b], out[2b+1] from the
/// 128-bit counter (first_block + b, stream) under the 64-bit key `seed`.
/// out.size() must be even. Bitwise identical in every variant.
void philox_uniforms(std::uint64_t seed, std::uint64_t stream, std::uint64_t first_block,
                     std::span<double> out);

/// out[i] = CMS(V, W) with V = pi (u_angle[i] - 1/2), W = -log(u_exp[i]).
void stable_from_uniforms(std::span<const double> u_angle, std::span<const double> u_exp,
                          std::span<double> out, const StableParams& p);

/// Box-Muller: out_a[i] = r cos(2 pi u2), out_b[i] = r sin(2 pi u2), r = sqrt(-2 log u1).
void normal_from_uniforms(std::span<const double> u1, std::span<const double> u2,
                          std::span<double> out_a, std::span<double> out_b);

/// out[i] = scale * exp(a * x[i] + b * v[i]).
void scaled_exp(std::span<const double> x, std::span<const double> v, double a, double b,
                double scale, std::span<double> out);

/// Sum with four interleaved partial sums (same association in every variant).
double sum(std::span<const double> x);

/// out[i] = min(a[i], b[i]).
void elementwise_min(std::span<const double> a, std::span<const double> b, std::span<double> out);

/// Elementary vector math, exposed for equivalence testing.
void exp(std::span<const double> x, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);
void sin(std::span<const double> x, std::span<double> out);
void cos(std::span<const double> x, std::span<double> out);

/// Per-variant entry points; the dispatching functions above forward here.
#define LQG_SIMD_DECLARE_VARIANT(ns)                                                        \
  namespace ns {                                                                          \
  void philox_uniforms(std::uint64_t, std::uint64_t, std::uint64_t, std::span<double>);   \
  void stable_from_uniforms(std::span<const double>, std::span<const double>,             \
                            std::span<double>, const StableParams&);                      \
  void normal_from_uniforms(std::span<const double>, std::span<const double>,             \
                            std::span<double>, std::span<double>);                        \
  void scaled_exp(std::span<const double>, std::span<const double>, double, double,       \
                  double, std::span<double>);                                             \
  double sum(std::span<const double>);                                                    \
  void elementwise_min(std::span<const double>, std::span<const double>,                  \
                       std::span<double>);                                                \
  void exp(std::span<const double>, std::span<double>);                                   \
  void log(std::span<const double>, std::span<double>);                                   \
  void sin(std::span<const double>, std::span<double>);                                   \
  void cos(std::span<const double>, std::span<double>);                                   \
  }

LQG_SIMD_DECLARE_VARIANT(scalar)
LQG_SIMD_DECLARE_VARIANT(avx2)

#undef LQG_SIMD_DECLARE_VARIANT

}  // namespace lqg::simd
