// AVX2 variants. Compiled with -mavx2 (no FMA) and only called after
// isa_available(Isa::avx2) is true.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lqg/simd/kernels.hpp"

namespace lqg::simd::avx2 {

namespace {

using vd = __m256d;

inline vd set1(double x) { return _mm256_set1_pd(x); }
inline vd add(vd a, vd b) { return _mm256_add_pd(a, b); }
inline vd sub(vd a, vd b) { return _mm256_sub_pd(a, b); }
inline vd mul(vd a, vd b) { return _mm256_mul_pd(a, b); }
inline vd div(vd a, vd b) { return _mm256_div_pd(a, b); }
inline vd round_nearest(vd a) { return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC); }

// Integer-valued doubles in [0, 2^52) <-> their integer bit pattern.
const vd kTwo52 = set1(0x1p52);
inline __m256i small_int_bits(vd k) { return _mm256_castpd_si256(add(k, kTwo52)); }

// 2^k for integer-valued k in [-1022, 1023].
inline vd pow2(vd k) {
  const __m256i biased = small_int_bits(add(k, set1(1023.0)));
  return _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
}

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

// exp(r) on |r| <= ln2/2 by Taylor series to degree 13.
inline vd exp_reduced(vd r) {
  constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0,
                          1.0 / 3628800.0,    1.0 / 362880.0,    1.0 / 40320.0,
                          1.0 / 5040.0,       1.0 / 720.0,       1.0 / 120.0,
                          1.0 / 24.0,         1.0 / 6.0,         0.5,
                          1.0,                1.0};
  vd p = set1(c[0]);
  for (int i = 1; i < 14; ++i) p = add(mul(p, r), set1(c[i]));
  return p;
}

inline vd vexp(vd x) {
  const vd hi = set1(709.782712893384);
  const vd lo = set1(-745.1332191019412);
  const vd overflow = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const vd underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const vd xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
  const vd k = round_nearest(mul(xc, set1(std::numbers::log2e)));
  const vd r = sub(sub(xc, mul(k, set1(kLn2Hi))), mul(k, set1(kLn2Lo)));
  const vd p = exp_reduced(r);
  // Split 2^k so both halves stay in the normal range.
  const vd k1 = _mm256_floor_pd(mul(k, set1(0.5)));
  const vd k2 = sub(k, k1);
  vd y = mul(mul(p, pow2(k1)), pow2(k2));
  y = _mm256_blendv_pd(y, set1(HUGE_VAL), overflow);
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), underflow);
  return _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
}

// Natural log for positive normal inputs; 0 -> -inf, negative -> NaN.
inline vd vlog(vd x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_field = _mm256_srli_epi64(bits, 52);
  vd e = sub(_mm256_castsi256_pd(_mm256_or_si256(exp_field, _mm256_castpd_si256(kTwo52))), kTwo52);
  e = sub(e, set1(1023.0));
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
  vd m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  const vd big = _mm256_cmp_pd(m, set1(std::numbers::sqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, mul(m, set1(0.5)), big);
  e = _mm256_blendv_pd(e, add(e, set1(1.0)), big);
  const vd s = div(sub(m, set1(1.0)), add(m, set1(1.0)));
  const vd z = mul(s, s);
  // 2 atanh(s) = 2 s sum_k z^k / (2k + 1)
  vd p = set1(1.0 / 23.0);
  for (int k = 10; k >= 0; --k) p = add(mul(p, z), set1(1.0 / (2.0 * k + 1.0)));
  const vd logm = mul(add(s, s), p);
  vd y = add(mul(e, set1(kLn2Hi)), add(logm, mul(e, set1(kLn2Lo))));
  const vd zero = _mm256_setzero_pd();
  y = _mm256_blendv_pd(y, set1(-HUGE_VAL), _mm256_cmp_pd(x, zero, _CMP_EQ_OQ));
  y = _mm256_blendv_pd(y, set1(NAN), _mm256_cmp_pd(x, zero, _CMP_LT_OQ));
  y = _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, set1(HUGE_VAL), _CMP_EQ_OQ));
  return _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
}

constexpr double kPio2_1 = 1.57079632673412561417e+00;
constexpr double kPio2_2 = 6.07710050630396597660e-11;
constexpr double kPio2_3 = 2.02226624871116645580e-21;

inline vd sin_poly(vd r) {
  const vd z = mul(r, r);
  constexpr double c[] = {1.0 / 355687428096000.0, -1.0 / 1307674368000.0, 1.0 / 6227020800.0,
                          -1.0 / 39916800.0,       1.0 / 362880.0,          -1.0 / 5040.0,
                          1.0 / 120.0,             -1.0 / 6.0};
  vd p = set1(c[0]);
  for (int i = 1; i < 8; ++i) p = add(mul(p, z), set1(c[i]));
  return add(r, mul(mul(r, z), p));
}

inline vd cos_poly(vd r) {
  const vd z = mul(r, r);
  constexpr double c[] = {-1.0 / 6402373705728000.0, 1.0 / 20922789888000.0, -1.0 / 87178291200.0,
                          1.0 / 479001600.0,         -1.0 / 3628800.0,       1.0 / 40320.0,
                          -1.0 / 720.0,              1.0 / 24.0};
  vd p = set1(c[0]);
  for (int i = 1; i < 8; ++i) p = add(mul(p, z), set1(c[i]));
  return add(sub(set1(1.0), mul(z, set1(0.5))), mul(mul(z, z), p));
}

// Quadrant-reduced sine/cosine; accurate for |x| up to about 1e5.
inline void vsincos(vd x, vd& s, vd& c) {
  const vd k = round_nearest(mul(x, set1(2.0 / std::numbers::pi)));
  const vd r = sub(sub(sub(x, mul(k, set1(kPio2_1))), mul(k, set1(kPio2_2))), mul(k, set1(kPio2_3)));
  const vd sr = sin_poly(r);
  const vd cr = cos_poly(r);
  // Quadrant q = k mod 4 from the integer bits of k + 2^20 (keeps k non-negative).
  const __m256i q = _mm256_and_si256(small_int_bits(add(k, set1(1048576.0))), _mm256_set1_epi64x(3));
  const vd swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)),
                                                         _mm256_set1_epi64x(1)));
  const vd neg_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(2)),
                                                          _mm256_set1_epi64x(2)));
  // cos changes sign in quadrants 1 and 2: (q + 1) & 2.
  const __m256i q1 = _mm256_add_epi64(q, _mm256_set1_epi64x(1));
  const vd neg_c = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q1, _mm256_set1_epi64x(2)),
                                                          _mm256_set1_epi64x(2)));
  const vd sign = set1(-0.0);
  vd sv = _mm256_blendv_pd(sr, cr, swap);
  vd cv = _mm256_blendv_pd(cr, sr, swap);
  sv = _mm256_xor_pd(sv, _mm256_and_pd(neg_s, sign));
  cv = _mm256_xor_pd(cv, _mm256_and_pd(neg_c, sign));
  s = sv;
  c = cv;
}

inline vd vsin(vd x) {
  vd s, c;
  vsincos(x, s, c);
  return s;
}

inline vd vcos(vd x) {
  vd s, c;
  vsincos(x, s, c);
  return c;
}

// Apply a lane-wise op over spans; the tail runs through the same vector code
// on a padded buffer so every element sees identical arithmetic.
template <class Op>
void map1(std::span<const double> x, std::span<double> out, Op op) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out.data() + i, op(_mm256_loadu_pd(x.data() + i)));
  if (i < n) {
    alignas(32) double in[4] = {1, 1, 1, 1}, res[4];
    std::copy(x.begin() + i, x.begin() + n, in);
    _mm256_store_pd(res, op(_mm256_load_pd(in)));
    std::copy(res, res + (n - i), out.begin() + i);
  }
}

template <class Op>
void map2(std::span<const double> a, std::span<const double> b, std::span<double> out, Op op) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, op(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  if (i < n) {
    alignas(32) double ia[4] = {0.5, 0.5, 0.5, 0.5}, ib[4] = {0.5, 0.5, 0.5, 0.5}, res[4];
    std::copy(a.begin() + i, a.begin() + n, ia);
    std::copy(b.begin() + i, b.begin() + n, ib);
    _mm256_store_pd(res, op(_mm256_load_pd(ia), _mm256_load_pd(ib)));
    std::copy(res, res + (n - i), out.begin() + i);
  }
}

using vi = __m256i;

const vi kLow32 = _mm256_set1_epi64x(0xFFFFFFFFll);

// 53 high bits of each 64-bit lane to (x + 0.5) 2^-53, exactly as the scalar path.
inline vd bits_to_unit(vi w) {
  const vi top = _mm256_srli_epi64(w, 11);
  const vi magic = _mm256_castpd_si256(kTwo52);
  const vd lo = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(top, kLow32), magic)), kTwo52);
  const vd hi = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(top, 32), magic)), kTwo52);
  return mul(add(add(mul(hi, set1(0x1p32)), lo), set1(0.5)), set1(0x1p-53));
}

}  // namespace

void philox_uniforms(std::uint64_t seed, std::uint64_t stream, std::uint64_t first_block,
                     std::span<double> out) {
  const std::size_t blocks = out.size() / 2;
  const vi m0 = _mm256_set1_epi64x(0xD2511F53ll);
  const vi m1 = _mm256_set1_epi64x(0xCD9E8D57ll);
  const vi s2 = _mm256_set1_epi64x(static_cast<std::uint32_t>(stream));
  const vi s3 = _mm256_set1_epi64x(static_cast<std::uint32_t>(stream >> 32));
  std::size_t b = 0;
  for (; b + 4 <= blocks; b += 4) {
    const std::uint64_t first = first_block + b;
    const vi blk = _mm256_setr_epi64x(first, first + 1, first + 2, first + 3);
    vi c0 = _mm256_and_si256(blk, kLow32), c1 = _mm256_srli_epi64(blk, 32), c2 = s2, c3 = s3;
    std::uint32_t k0 = static_cast<std::uint32_t>(seed), k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
      const vi p0 = _mm256_mul_epu32(m0, c0);
      const vi p1 = _mm256_mul_epu32(m1, c2);
      const vi n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1), _mm256_set1_epi64x(k0));
      const vi n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3), _mm256_set1_epi64x(k1));
      c1 = _mm256_and_si256(p1, kLow32);
      c3 = _mm256_and_si256(p0, kLow32);
      c0 = n0;
      c2 = n2;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    const vd u0 = bits_to_unit(_mm256_or_si256(_mm256_slli_epi64(c1, 32), c0));
    const vd u1 = bits_to_unit(_mm256_or_si256(_mm256_slli_epi64(c3, 32), c2));
    // Interleave to block order: (u0[0], u1[0], u0[1], u1[1], ...).
    const vd lo = _mm256_unpacklo_pd(u0, u1);
    const vd hi = _mm256_unpackhi_pd(u0, u1);
    _mm256_storeu_pd(out.data() + 2 * b, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(out.data() + 2 * b + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  if (b < blocks) scalar::philox_uniforms(seed, stream, first_block + b, out.subspan(2 * b, 2 * (blocks - b)));
}

void stable_from_uniforms(std::span<const double> u_angle, std::span<const double> u_exp,
                          std::span<double> out, const StableParams& p) {
  const double alpha = p.alpha;
  const double t = p.skew * std::tan(std::numbers::pi * alpha / 2);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const vd v_alpha = set1(alpha);
  const vd v_b = set1(b);
  const vd v_pre = set1(p.scale * s);
  const vd v_inv_alpha = set1(-1.0 / alpha);
  const vd v_expo = set1((1.0 - alpha) / alpha);
  const vd v_pi = set1(std::numbers::pi);
  const vd v_half = set1(0.5);
  map2(u_angle, u_exp, out, [&](vd ua, vd ue) {
    const vd v = mul(v_pi, sub(ua, v_half));
    const vd w = sub(_mm256_setzero_pd(), vlog(ue));
    const vd a = mul(v_alpha, add(v, v_b));
    const vd log_cos_v = vlog(vcos(v));
    const vd log_ratio = vlog(div(vcos(sub(v, a)), w));
    const vd mag = vexp(add(mul(v_inv_alpha, log_cos_v), mul(v_expo, log_ratio)));
    return mul(mul(v_pre, vsin(a)), mag);
  });
}

void normal_from_uniforms(std::span<const double> u1, std::span<const double> u2,
                          std::span<double> out_a, std::span<double> out_b) {
  const std::size_t n = u1.size();
  const vd two_pi = set1(2.0 * std::numbers::pi);
  const vd m2 = set1(-2.0);
  auto kernel = [&](vd a, vd b, vd& ca, vd& sb) {
    const vd r = _mm256_sqrt_pd(mul(m2, vlog(a)));
    vd s, c;
    vsincos(mul(two_pi, b), s, c);
    ca = mul(r, c);
    sb = mul(r, s);
  };
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vd ca, sb;
    kernel(_mm256_loadu_pd(u1.data() + i), _mm256_loadu_pd(u2.data() + i), ca, sb);
    _mm256_storeu_pd(out_a.data() + i, ca);
    _mm256_storeu_pd(out_b.data() + i, sb);
  }
  if (i < n) {
    alignas(32) double ia[4] = {0.5, 0.5, 0.5, 0.5}, ib[4] = {0.5, 0.5, 0.5, 0.5}, ra[4], rb[4];
    std::copy(u1.begin() + i, u1.begin() + n, ia);
    std::copy(u2.begin() + i, u2.begin() + n, ib);
    vd ca, sb;
    kernel(_mm256_load_pd(ia), _mm256_load_pd(ib), ca, sb);
    _mm256_store_pd(ra, ca);
    _mm256_store_pd(rb, sb);
    std::copy(ra, ra + (n - i), out_a.begin() + i);
    std::copy(rb, rb + (n - i), out_b.begin() + i);
  }
}

void scaled_exp(std::span<const double> x, std::span<const double> v, double a, double b,
                double scale, std::span<double> out) {
  const vd va = set1(a), vb = set1(b), vs = set1(scale);
  map2(x, v, out, [&](vd xi, vd vi) { return mul(vs, vexp(add(mul(va, xi), mul(vb, vi)))); });
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  vd acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = add(acc, _mm256_loadu_pd(x.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (; i < n; ++i) lanes[i % 4] += x[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void elementwise_min(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, _mm256_min_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

void exp(std::span<const double> x, std::span<double> out) { map1(x, out, vexp); }
void log(std::span<const double> x, std::span<double> out) { map1(x, out, vlog); }
void sin(std::span<const double> x, std::span<double> out) { map1(x, out, vsin); }
void cos(std::span<const double> x, std::span<double> out) { map1(x, out, vcos); }

}  // namespace lqg::simd::avx2
