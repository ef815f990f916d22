#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <vector>

#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"
#include "lqg/gmc/field.hpp"
#include "lqg/gmc/heat_kernel.hpp"
#include "lqg/gmc/lfpp.hpp"
#include "lqg/gmc/walk.hpp"

using namespace lqg;
using namespace lqg::gmc;

namespace {

std::size_t ring(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

}  // namespace

TEST_CASE("torus field has zero mean and constant exact variance") {
  for (std::size_t n : {64u, 128u}) {
    const LatticeField f = sample_gff(n, true, 11);
    CHECK(std::abs(stats::mean(f.h)) < 1e-10);
    CHECK(f.variance.front() == f.variance.back());
  }
  CHECK_THROWS(sample_gff(32, true, 1));
  CHECK_THROWS(sample_gff(96, true, 1));
}

TEST_CASE("field variance grows with log n") {
  std::vector<double> logn, var;
  for (std::size_t n : {64u, 256u, 1024u}) {
    stats::MeanAccumulator sq;
    double exact = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const LatticeField f = sample_gff(n, true, seed);
      double s = 0;
      for (double x : f.h) s += x * x;
      sq.add(s / static_cast<double>(f.size()));
      exact = f.variance[0];
    }
    CHECK(sq.mean() == doctest::Approx(exact).epsilon(0.1));
    logn.push_back(std::log(static_cast<double>(n)));
    var.push_back(sq.mean());
  }
  const auto fit = stats::linear_fit(logn, var);
  CHECK(fit.slope > 0.5);
  CHECK(fit.slope < 1.5);
}

TEST_CASE("recorded variance matches the ensemble") {
  for (bool periodic : {true, false}) {
    const std::size_t n = 64, fields = 600;
    const std::vector<std::size_t> probe{0, 5 * n + 7, 32 * n + 32};
    std::vector<stats::MeanAccumulator> sq(probe.size());
    LatticeField last;
    for (std::size_t s = 0; s < fields; ++s) {
      last = sample_gff(n, periodic, 1000 + s);
      for (std::size_t k = 0; k < probe.size(); ++k) sq[k].add(last.h[probe[k]] * last.h[probe[k]]);
    }
    for (std::size_t k = 0; k < probe.size(); ++k) {
      CAPTURE(periodic);
      CAPTURE(k);
      CHECK(std::abs(sq[k].mean() - last.variance[probe[k]]) < 4 * sq[k].stderr_of_mean());
    }
    if (!periodic) CHECK(last.variance[0] < last.variance[32 * n + 32]);
  }
}

TEST_CASE("distinct seeds give independent fields") {
  stats::MeanAccumulator cross;
  for (std::size_t s = 0; s < 400; ++s) {
    const LatticeField a = sample_gff(64, true, 2 * s), b = sample_gff(64, true, 2 * s + 1);
    cross.add(a.h[100] * b.h[100]);
  }
  CHECK(std::abs(cross.mean()) < 3 * cross.stderr_of_mean());
}

TEST_CASE("covariance decays logarithmically") {
  const std::size_t n = 64;
  const std::vector<std::size_t> lags{1, 2, 4, 8, 16};
  std::vector<stats::MeanAccumulator> cov(lags.size());
  for (std::size_t s = 0; s < 300; ++s) {
    const LatticeField f = sample_gff(n, true, 7000 + s);
    for (std::size_t k = 0; k < lags.size(); ++k) {
      for (std::size_t i = 0; i < n; i += 8) cov[k].add(f.h[i * n] * f.h[i * n + lags[k]]);
    }
  }
  std::vector<double> x, y;
  for (std::size_t k = 0; k < lags.size(); ++k) {
    x.push_back(-std::log(static_cast<double>(lags[k]) / static_cast<double>(n)));
    y.push_back(cov[k].mean());
  }
  const auto fit = stats::linear_fit(x, y);
  CHECK(fit.slope > 0.5);
  CHECK(fit.slope < 1.5);
}

TEST_CASE("chaos masses") {
  const GmcMeasure flat = gmc_mass(flat_field(64));
  for (double m : flat.cell_mass) CHECK(m == doctest::Approx(1.0 / 4096));
  CHECK(flat.total == doctest::Approx(1.0));
  CHECK_THROWS(gmc_mass(flat_field(64), 2.0));
  CHECK_THROWS(gmc_mass(flat_field(64), 0.0));

  stats::MeanAccumulator total;
  std::vector<double> box;
  for (std::size_t s = 0; s < 200; ++s) {
    const LatticeField f = sample_gff(64, true, 300 + s);
    const GmcMeasure m = gmc_mass(f);
    CHECK(*std::min_element(m.cell_mass.begin(), m.cell_mass.end()) > 0);
    total.add(m.total);
    double b = 0;
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) b += m.cell_mass[f.index(i, j)];
    box.push_back(b);
  }
  CHECK(std::abs(total.mean() - 1) < 3 * total.stderr_of_mean());
  const double skew = stats::sample_skewness(box);
  MESSAGE("skewness of a 1/16 box mass over 200 fields: " << skew);
  CHECK(std::isfinite(skew));
}

TEST_CASE("flat LFPP is the scaled graph metric") {
  for (bool periodic : {true, false}) {
    const std::size_t n = 64;
    const LatticeField f = flat_field(n, periodic);
    const LfppMetric m(f);
    const auto d = m.distances_from(f.index(10, 50));
    for (std::size_t v = 0; v < f.size(); v += 37) {
      const std::size_t i = v / n, j = v % n;
      const double graph = periodic ? static_cast<double>(ring(i, 10, n) + ring(j, 50, n))
                                    : std::abs(static_cast<double>(i) - 10) + std::abs(static_cast<double>(j) - 50);
      CHECK(d[v] == doctest::Approx(graph / static_cast<double>(n)));
    }
  }
}

TEST_CASE("LFPP is a metric") {
  const LatticeField f = sample_gff(64, true, 3);
  const LfppMetric m(f);
  CHECK(m.xi() == doctest::Approx(kXi));
  RandomStream rng(4, 0);
  for (int k = 0; k < 10; ++k) {
    const std::size_t a = rng() % f.size(), b = rng() % f.size(), c = rng() % f.size();
    const auto da = m.distances_from(a), db = m.distances_from(b);
    CHECK(da[a] == 0.0);
    CHECK(da[b] == doctest::Approx(db[a]).epsilon(1e-12));
    CHECK(da[c] <= da[b] + db[c] + 1e-12);
    if (a != b) CHECK(da[b] > 0);
  }
  const auto ball = m.ball(7, 0.05);
  const auto d7 = m.distances_from(7);
  CHECK(ball.front() == 7);
  for (std::size_t k = 1; k < ball.size(); ++k) CHECK(d7[ball[k - 1]] <= d7[ball[k]]);
  CHECK(ball.size() == static_cast<std::size_t>(std::count_if(d7.begin(), d7.end(), [](double x) { return x <= 0.05; })));
  CHECK_THROWS(m.distances_from(f.size()));
}

TEST_CASE("adding a constant rescales mass and distance jointly") {
  const double c = 0.7;
  LatticeField f = sample_gff(64, true, 9);
  const GmcMeasure m0 = gmc_mass(f);
  const auto d0 = LfppMetric(f).distances_from(5);
  for (double& x : f.h) x += c;
  const GmcMeasure m1 = gmc_mass(f);
  const auto d1 = LfppMetric(f).distances_from(5);
  for (std::size_t v = 0; v < f.size(); v += 17) {
    CHECK(m1.cell_mass[v] == doctest::Approx(m0.cell_mass[v] * std::exp(kGamma * c)));
    CHECK(d1[v] == doctest::Approx(d0[v] * std::exp(kXi * c)));
  }
  const auto radii = stats::geomspace(0.02, 0.2, 8);
  std::vector<double> shifted;
  for (double r : radii) shifted.push_back(r * std::exp(kXi * c));
  const auto v0 = ball_mass_curve(d0, m0, radii), v1 = ball_mass_curve(d1, m1, shifted);
  const auto s0 = stats::loglog_fit(v0.radii, v0.mass), s1 = stats::loglog_fit(v1.radii, v1.mass);
  CHECK(s0.slope == doctest::Approx(s1.slope).epsilon(1e-9));
}

TEST_CASE("flat volume growth is quadratic") {
  const LatticeField f = flat_field(256);
  const auto d = LfppMetric(f).distances_from(0);
  const auto radii = stats::geomspace(0.02, 0.2, 8);
  const auto v = ball_mass_curve(d, gmc_mass(f), radii);
  CHECK(stats::loglog_fit(v.radii, v.mass).slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("walk trajectories") {
  const LatticeField f = sample_gff(64, false, 2);
  const GmcMeasure m = gmc_mass(f);
  const auto path = liouville_walk(f, m, f.index(30, 30), 1e-3, 8);
  REQUIRE(path.size() > 2);
  CHECK(path.back().clock == 1e-3);
  std::array<std::size_t, 4> nb;
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    CHECK(path[k].clock > path[k - 1].clock);
    const std::size_t deg = lattice_neighbors(f.n, f.periodic, path[k - 1].position, nb);
    CHECK(std::find(nb.begin(), nb.begin() + static_cast<long>(deg), path[k].position) != nb.begin() + static_cast<long>(deg));
  }
  CHECK(path.back().position == path[path.size() - 2].position);
  CHECK(liouville_walk(f, m, 3, 1e-3, 8) == liouville_walk(f, m, 3, 1e-3, 8));
  CHECK_THROWS(liouville_walk(f, m, 3, 0.0, 8));
  CHECK_THROWS(liouville_walk(f, m, f.size(), 1.0, 8));

  LiouvilleWalk fixed(f, m, 100, 1, 0, false);
  CHECK(fixed.draw_hold() == doctest::Approx(2 * m.cell_mass[100] / 4));
}

TEST_CASE("walk is reversible and ergodic for the chaos measure") {
  const std::size_t n = 64;
  const LatticeField f = sample_gff(n, true, 21);
  const GmcMeasure m = gmc_mass(f);
  LiouvilleWalk walk(f, m, 0, 3, 0);
  std::map<std::pair<std::size_t, std::size_t>, double> flow;
  const std::size_t blocks = 8, side = n / blocks;
  std::vector<double> occ(blocks * blocks, 0.0), target(blocks * blocks, 0.0);
  auto block = [&](std::size_t v) { return (v / n / side) * blocks + (v % n) / side; };
  for (std::size_t v = 0; v < f.size(); ++v) target[block(v)] += m.cell_mass[v] / m.total;
  for (std::size_t k = 0; k < 40'000'000; ++k) {
    const std::size_t from = walk.state().position;
    occ[block(from)] += walk.step();
    flow[{from, walk.state().position}] += 1;
  }
  // Orient every edge from its lighter to its heavier end so that a bias
  // towards mass would show up in the aggregate.
  double up = 0, down = 0, worst = 0;
  for (const auto& [e, fxy] : flow) {
    if (m.cell_mass[e.first] >= m.cell_mass[e.second]) continue;
    const auto it = flow.find({e.second, e.first});
    const double fyx = it == flow.end() ? 0.0 : it->second;
    up += fxy;
    down += fyx;
    if (fxy + fyx > 40000) worst = std::max(worst, std::abs(fxy / fyx - 1));
  }
  CHECK(up / down == doctest::Approx(1.0).epsilon(0.005));
  CHECK(worst < 0.05);
  double tv = 0;
  for (std::size_t b = 0; b < occ.size(); ++b) tv += std::abs(occ[b] / walk.state().clock - target[b]);
  CHECK(tv / 2 < 0.05);
}

TEST_CASE("flat exit times scale like r^2") {
  const LatticeField f = flat_field(256);
  const GmcMeasure m = gmc_mass(f);
  const auto d = LfppMetric(f).distances_from(f.index(128, 128));
  const auto radii = stats::geomspace(0.02, 0.2, 6);
  const auto curve = exit_time_curve(f, m, d, radii, 400, 5);
  CHECK(stats::loglog_fit(curve.radii, curve.mean).slope == doctest::Approx(2.0).epsilon(0.1));
  for (std::size_t k = 1; k < curve.mean.size(); ++k) CHECK(curve.mean[k] > curve.mean[k - 1]);

  const std::vector<double> tiny{0.5 / 256};
  const auto one = exit_time_curve(f, m, d, tiny, 4000, 6);
  CHECK(std::abs(one.mean[0] - m.cell_mass[0] / 2) < 3 * one.stderr_[0]);

  const std::vector<double> huge{0.4};
  CHECK_THROWS(exit_time_curve(f, m, d, huge, 10, 1));
  const LatticeField box = flat_field(256, false);
  const auto db = LfppMetric(box).distances_from(box.index(10, 128));
  const std::vector<double> touching{0.05};
  CHECK_THROWS(exit_time_curve(box, gmc_mass(box), db, touching, 10, 1));
}

TEST_CASE("heat kernel is symmetric") {
  const LatticeField f = sample_gff(64, true, 14);
  const GmcMeasure m = gmc_mass(f);
  const std::size_t n = f.n;
  const auto heaviest = [&](auto keep) {
    std::size_t best = f.size();
    for (std::size_t v = 0; v < f.size(); ++v)
      if (keep(v) && (best == f.size() || m.cell_mass[v] > m.cell_mass[best])) best = v;
    return best;
  };
  const std::size_t x = heaviest([](std::size_t) { return true; });
  const std::size_t y = heaviest([&](std::size_t v) {
    const std::size_t l = ring(v / n, x / n, n) + ring(v % n, x % n, n);
    return l >= 4 && l <= 8;
  });
  const double d = LfppMetric(f).distance(x, y);
  const std::vector<double> times{m.total * 0.01, m.total * 0.03};
  HeatKernelOptions opt;
  opt.bin = 1;
  const std::vector<std::size_t> from_x{x, y}, from_y{y, x};
  const std::vector<double> dist{0, d};
  const auto px = heat_kernel_profile(f, m, x, from_x, dist, times, 200000, 1, opt);
  const auto py = heat_kernel_profile(f, m, y, from_y, dist, times, 200000, 2, opt);
  for (std::size_t k = 0; k < times.size(); ++k) {
    REQUIRE(px.kept(k, 1));
    REQUIRE(py.kept(k, 1));
    const double joint = std::hypot(px.stderr_[k][1], py.stderr_[k][1]);
    CHECK(std::abs(px.p[k][1] - py.p[k][1]) < 3 * joint);
  }
  CHECK_THROWS(heat_kernel_profile(f, m, x, from_y, dist, times, 10, 1, opt));
}

TEST_CASE("flat on-diagonal heat kernel decays like 1/t") {
  const LatticeField f = flat_field(128);
  const GmcMeasure m = gmc_mass(f);
  const std::size_t x = f.index(64, 64);
  const std::vector<std::size_t> targets{x};
  const std::vector<double> dist{0};
  const auto times = stats::geomspace(2e-3, 6e-2, 6);
  HeatKernelOptions opt;
  opt.bin = 1;
  opt.bin_fraction = 1.0 / 3;
  const auto est = heat_kernel_profile(f, m, x, targets, dist, times, 20000, 3, opt);
  CHECK_FALSE(est.inconclusive);
  const auto fit = on_diagonal_fit(est);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.1));

  opt.bin_fraction = 0;
  const auto sparse = heat_kernel_profile(f, m, x, targets, dist, times, 200, 3, opt);
  CHECK(sparse.inconclusive);
  CHECK(stretch_exponent_fit(sparse).inconclusive);
}

TEST_CASE("pre-mixing proxy") {
  const LatticeField f = flat_field(64);
  const double t = premixing_time(f, gmc_mass(f), 0, 1);
  CHECK(t > 0.05);
  CHECK(t < 20);
  CHECK_THROWS(premixing_time(f, gmc_mass(f), 0, 1, 7));
}

TEST_CASE("field files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "lqg_test_gmc";
  std::filesystem::create_directories(dir);
  for (bool periodic : {true, false}) {
    const LatticeField f = sample_gff(64, periodic, 77);
    const GmcMeasure m = gmc_mass(f);
    const auto path = dir / "field.bin";
    save_field(f, m, kXi, path);
    CHECK(std::filesystem::file_size(path) == 32 + 3 * 8 * f.size());
    const StoredField s = load_field(path);
    CHECK(s.field.n == 64);
    CHECK(s.field.seed == 77);
    CHECK(s.field.periodic == periodic);
    CHECK(s.xi == kXi);
    CHECK(s.measure.gamma == kGamma);
    CHECK(s.field.h == f.h);
    CHECK(s.measure.cell_mass == m.cell_mass);
  }
  std::filesystem::remove_all(dir);
}
