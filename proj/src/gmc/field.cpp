#include "lqg/gmc/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "lqg/common/binary_io.hpp"
#include "lqg/common/rng.hpp"

namespace lqg::gmc {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

struct Plan {
  fftw_plan p;
  explicit Plan(fftw_plan plan) : p(plan) {
    if (!p) throw std::runtime_error("FFTW plan creation failed");
  }
  ~Plan() { fftw_destroy_plan(p); }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void run() const { fftw_execute(p); }
};

template <class T>
FftwBuffer<T> allocate(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

void fill_torus(LatticeField& f, RandomStream& rng) {
  const std::size_t n = f.n, half = n / 2 + 1;
  const int ni = static_cast<int>(n);
  auto real = allocate<double>(n * n);
  auto spec = allocate<fftw_complex>(n * half);
  const Plan forward(fftw_plan_dft_r2c_2d(ni, ni, real.get(), spec.get(), FFTW_ESTIMATE));
  const Plan backward(fftw_plan_dft_c2r_2d(ni, ni, spec.get(), real.get(), FFTW_ESTIMATE));
  for (std::size_t i = 0; i < n * n; ++i) real[i] = rng.normal();
  forward.run();
  const double two_pi = 2 * std::numbers::pi;
  double var = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const double ca = std::cos(two_pi * static_cast<double>(a) / static_cast<double>(n));
    for (std::size_t b = 0; b < half; ++b) {
      const double cb = std::cos(two_pi * static_cast<double>(b) / static_cast<double>(n));
      const double lambda = 4 - 2 * ca - 2 * cb;
      const double w = (a == 0 && b == 0) ? 0.0 : std::sqrt(two_pi / lambda);
      spec[a * half + b][0] *= w;
      spec[a * half + b][1] *= w;
      // Each stored b stands for b and n - b except the self-conjugate columns.
      if (a != 0 || b != 0) var += (b == 0 || 2 * b == n ? 1.0 : 2.0) * two_pi / lambda;
    }
  }
  backward.run();
  const double scale = 1 / static_cast<double>(n * n);
  f.h.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) f.h[i] = real[i] * scale;
  f.variance.assign(n * n, var * scale);
}

void fill_dirichlet(LatticeField& f, RandomStream& rng) {
  const std::size_t n = f.n;
  const int ni = static_cast<int>(n);
  const double two_pi = 2 * std::numbers::pi;
  const double m = static_cast<double>(n + 1);
  std::vector<double> lam1(n), weight(n * n);
  for (std::size_t j = 0; j < n; ++j) lam1[j] = 2 - 2 * std::cos(std::numbers::pi * static_cast<double>(j + 1) / m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) weight[a * n + b] = two_pi / (lam1[a] + lam1[b]);

  // h = (S x S)(sqrt(weight) Z) with S the orthonormal DST-I; FFTW's RODFT00
  // computes 2 (n + 1) S in two dimensions.
  auto buf = allocate<double>(n * n);
  const Plan plan(fftw_plan_r2r_2d(ni, ni, buf.get(), buf.get(), FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE));
  for (std::size_t i = 0; i < n * n; ++i) buf[i] = std::sqrt(weight[i]) * rng.normal();
  plan.run();
  f.h.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) f.h[i] = buf[i] / (2 * m);

  // Var(x) = sum_ab weight_ab S_a(x1)^2 S_b(x2)^2, two dense contractions.
  std::vector<double> s2(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t x = 0; x < n; ++x) {
      const double s = std::sin(std::numbers::pi * static_cast<double>((a + 1) * (x + 1)) / m);
      s2[a * n + x] = 2 / m * s * s;
    }
  }
  std::vector<double> partial(n * n, 0.0);  // partial[x1][b] = sum_a S_a(x1)^2 weight_ab
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t x = 0; x < n; ++x) {
      const double s = s2[a * n + x];
      double* row = &partial[x * n];
      const double* w = &weight[a * n];
      for (std::size_t b = 0; b < n; ++b) row[b] += s * w[b];
    }
  }
  f.variance.assign(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double* out = &f.variance[x * n];
    for (std::size_t b = 0; b < n; ++b) {
      const double p = partial[x * n + b];
      const double* s = &s2[b * n];
      for (std::size_t y = 0; y < n; ++y) out[y] += p * s[y];
    }
  }
}

}  // namespace

LatticeField sample_gff(std::size_t n, bool periodic, std::uint64_t seed) {
  if (n < 64 || (n & (n - 1)) != 0) throw std::invalid_argument("sample_gff: n must be a power of two >= 64");
  LatticeField f;
  f.n = n;
  f.periodic = periodic;
  f.seed = seed;
  RandomStream rng(seed, 0x676666);
  if (periodic) {
    fill_torus(f, rng);
  } else {
    fill_dirichlet(f, rng);
  }
  return f;
}

LatticeField flat_field(std::size_t n, bool periodic) {
  if (n < 2) throw std::invalid_argument("flat_field: n must be >= 2");
  LatticeField f;
  f.n = n;
  f.periodic = periodic;
  f.h.assign(n * n, 0.0);
  f.variance.assign(n * n, 0.0);
  return f;
}

GmcMeasure gmc_mass(const LatticeField& field, double gamma) {
  if (!(gamma > 0 && gamma < 2)) throw std::invalid_argument("gmc_mass: gamma must lie in (0, 2)");
  GmcMeasure m;
  m.gamma = gamma;
  const double area = 1 / static_cast<double>(field.size());
  m.cell_mass.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    m.cell_mass[i] = std::exp(gamma * field.h[i] - 0.5 * gamma * gamma * field.variance[i]) * area;
    m.total += m.cell_mass[i];
  }
  return m;
}

void save_field(const LatticeField& field, const GmcMeasure& measure, double xi, const std::filesystem::path& path) {
  if (measure.cell_mass.size() != field.size()) throw std::invalid_argument("save_field: measure does not match field");
  io::BinaryWriter w;
  w.put_u64(field.n);
  w.put_f64(measure.gamma);
  w.put_f64(xi);
  w.put_u64(field.seed);
  w.put_f64_array(field.h);
  w.put_f64_array(field.variance);
  w.put_f64_array(measure.cell_mass);
  w.save(path);
}

StoredField load_field(const std::filesystem::path& path) {
  auto r = io::BinaryReader::load(path);
  StoredField s;
  s.field.n = r.get_u64();
  s.measure.gamma = r.get_f64();
  s.xi = r.get_f64();
  s.field.seed = r.get_u64();
  const std::size_t cells = s.field.n * s.field.n;
  if (r.remaining() != 3 * cells * sizeof(double)) throw std::runtime_error("load_field: size does not match header");
  s.field.h = r.get_f64_array(cells);
  s.field.variance = r.get_f64_array(cells);
  s.measure.cell_mass = r.get_f64_array(cells);
  for (double m : s.measure.cell_mass) s.measure.total += m;
  // Torus variance is the same at every vertex; the Dirichlet profile is not.
  const auto [lo, hi] = std::minmax_element(s.field.variance.begin(), s.field.variance.end());
  s.field.periodic = *lo == *hi;
  return s;
}

}  // namespace lqg::gmc
