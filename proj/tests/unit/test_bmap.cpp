#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "../support/chain_oracle.hpp"
#include "lqg/bmap/metric.hpp"
#include "lqg/bmap/snake.hpp"
#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"

using namespace lqg;
using namespace lqg::bmap;

TEST_CASE("contours are excursions") {
  for (auto variant : {ContourVariant::dyck, ContourVariant::brownian}) {
    const ContourExcursion c = sample_contour(500, variant, 3);
    CHECK(c.n == 1000);
    REQUIRE(c.X.size() == 1001);
    CHECK(c.X.front() == 0.0);
    CHECK(c.X.back() == 0.0);
    CHECK(*std::min_element(c.X.begin(), c.X.end()) >= 0.0);
    CHECK(c.time(1000) == 1.0);
  }
  const ContourExcursion d = sample_contour(64, ContourVariant::dyck, 9);
  for (std::size_t k = 1; k < d.X.size(); ++k) CHECK(std::abs(d.X[k] - d.X[k - 1]) == doctest::Approx(0.125));
  CHECK_THROWS(sample_contour(1, ContourVariant::dyck, 1));
  CHECK(parse_variant("brownian") == ContourVariant::brownian);
  CHECK_THROWS(parse_variant("tree"));
}

TEST_CASE("brownian contour maximum is stable across resolutions") {
  const std::size_t samples = 100000;
  std::vector<double> coarse(samples), fine(samples);
  stats::MeanAccumulator mean;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a = sample_contour(1 << 9, ContourVariant::brownian, 2 * i).X;
    const auto b = sample_contour(1 << 11, ContourVariant::brownian, 2 * i + 1).X;
    coarse[i] = *std::max_element(a.begin(), a.end());
    fine[i] = *std::max_element(b.begin(), b.end());
    mean.add(fine[i]);
  }
  CHECK(stats::ks_two_sample(coarse, fine) < 0.03);
  // E max of the normalized excursion is sqrt(pi/2); the grid misses about
  // 2 * 0.5826 sqrt(dt) between the maximum and the rotation point.
  const double bias = 2 * 0.5826 / std::sqrt(4096.0);
  CHECK(std::abs(mean.mean() + bias - std::sqrt(std::numbers::pi / 2)) < 3 * mean.stderr_of_mean() + 0.005);
}

TEST_CASE("tree vertices and the tree pseudometric") {
  const ContourExcursion c = sample_contour(200, ContourVariant::dyck, 4);
  const auto v = tree_vertices(c);
  CHECK(v.front() == v.back());
  CHECK(*std::max_element(v.begin(), v.end()) == 200);  // n + 1 vertices
  RandomStream rng(5, 0);
  auto pick = [&] { return static_cast<std::size_t>(rng.uniform() * 401); };
  for (int k = 0; k < 10000; ++k) {
    const std::size_t s = pick(), t = pick(), u = pick();
    CHECK(tree_pseudometric(c, s, s) == 0.0);
    CHECK(tree_pseudometric(c, s, t) == tree_pseudometric(c, t, s));
    CHECK(tree_pseudometric(c, s, u) <= tree_pseudometric(c, s, t) + tree_pseudometric(c, t, u) + 1e-12);
    CHECK((tree_pseudometric(c, s, t) == 0.0) == (v[s] == v[t]));
  }
}

TEST_CASE("snake labels respect the tree") {
  const ContourExcursion c = sample_contour(300, ContourVariant::dyck, 6);
  const SnakeSample s = snake_labels(c, 7);
  CHECK(s.Y[0] == 0.0);
  CHECK(s.Y.back() == 0.0);
  const auto v = tree_vertices(c);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) CHECK(s.Y[i] == s.Y[j]);
    }
  }
  CHECK(s.root == root_index(s.Y));
  CHECK(s.Y[s.root] == *std::min_element(s.Y.begin(), s.Y.end()));
}

TEST_CASE("label variance equals height") {
  for (auto variant : {ContourVariant::dyck, ContourVariant::brownian}) {
    const ContourExcursion c = sample_contour(64, variant, 8);
    std::vector<stats::MeanAccumulator> acc(c.X.size());
    std::vector<stats::MeanAccumulator> cross(c.X.size());
    for (std::uint64_t r = 0; r < 10000; ++r) {
      const SnakeSample s = snake_labels(c, 1000 + r);
      for (std::size_t i = 0; i < c.X.size(); ++i) {
        acc[i].add(s.Y[i] * s.Y[i]);
        cross[i].add(s.Y[i] * s.Y[c.X.size() / 3]);
      }
    }
    std::vector<double> var;
    for (const auto& a : acc) var.push_back(a.mean());
    const auto fit = stats::linear_fit(c.X, var);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.05));
    // Covariance with a fixed index follows the minimum of X in between.
    const std::size_t t = c.X.size() / 3;
    std::vector<double> m, cov;
    for (std::size_t i = 0; i < c.X.size(); ++i) {
      const auto lo = std::min(i, t), hi = std::max(i, t);
      m.push_back(*std::min_element(c.X.begin() + lo, c.X.begin() + hi + 1));
      cov.push_back(cross[i].mean());
    }
    CHECK(stats::linear_fit(m, cov).slope == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("d_circ") {
  const SnakeSample s = snake_labels(sample_contour(128, ContourVariant::dyck, 10), 11);
  const SnakeMetric metric(s);
  const std::size_t n = s.Y.size();
  const double low = s.Y[s.root];
  for (std::size_t a = 0; a < n; ++a) {
    CHECK(metric.d_circ(a, a) == 0.0);
    CHECK(metric.d_circ(a, s.root) == doctest::Approx(s.Y[a] - low));
    for (std::size_t b = 0; b < n; ++b) {
      const double d = metric.d_circ(a, b);
      CHECK(d >= 0.0);
      CHECK(d == metric.d_circ(b, a));
    }
  }
  RandomStream rng(12, 0);
  for (int k = 0; k < 2000; ++k) {
    const auto a = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    const auto b = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    CHECK(metric.d_circ(a, b) == doctest::Approx(oracle::d_circ(s, a, b)).epsilon(1e-12));
    CHECK(metric.m_X(a, b) == doctest::Approx(tree_pseudometric(s.contour, a, b)).epsilon(1e-12));
  }
}

TEST_CASE("landmark shortest paths equal exhaustive chain enumeration") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SnakeSample s = snake_labels(sample_contour(12, ContourVariant::dyck, 100 + seed), 200 + seed);
    const SnakeMetric metric(s);
    const std::vector<std::size_t> landmarks = {0, 4, 9, 13, 18, s.root};
    const LandmarkDistances lm = landmark_distances(metric, landmarks);
    const auto brute = oracle::chain_infimum(s, landmarks);
    for (std::size_t i = 0; i < brute.size(); ++i) CHECK(lm.chain[i] == doctest::Approx(brute[i]).epsilon(1e-12));
  }
}

TEST_CASE("landmark distance matrix") {
  const SnakeSample s = snake_labels(sample_contour(2000, ContourVariant::dyck, 13), 14);
  const SnakeMetric metric(s);
  const LandmarkDistances lm = map_distance_matrix(metric, 64);
  REQUIRE(lm.size() == 65);
  CHECK(lm.landmarks.back() == s.root);
  double far = 0;
  std::size_t arg = 0;
  for (std::size_t a = 0; a < lm.size(); ++a) {
    CHECK(lm.chain_at(a, a) == 0.0);
    for (std::size_t b = 0; b < lm.size(); ++b) {
      CHECK(lm.chain_at(a, b) == lm.chain_at(b, a));
      CHECK(lm.chain_at(a, b) <= lm.edge_at(a, b));
      CHECK(lm.edge_at(a, b) <= metric.d_circ(lm.landmarks[a], lm.landmarks[b]));
      for (std::size_t c = 0; c < lm.size(); ++c)
        CHECK(lm.chain_at(a, c) <= lm.chain_at(a, b) + lm.chain_at(b, c) + 1e-12);
    }
    // Distance to the root is the label gap.
    CHECK(lm.chain_at(lm.root(), a) == doctest::Approx(s.Y[lm.landmarks[a]] - s.Y[s.root]));
    if (lm.edge_at(lm.root(), a) > far) {
      far = lm.edge_at(lm.root(), a);
      arg = a;
    }
  }
  CHECK(lm.chain_at(lm.root(), arg) > 0);
  CHECK(lm.diameter() >= far);
  CHECK_THROWS_AS(map_distance_matrix(metric, 1000, 1 << 20), std::length_error);
  CHECK_THROWS(map_distance_matrix(metric, 0));
}

TEST_CASE("ball volumes") {
  const SnakeSample s = snake_labels(sample_contour(3000, ContourVariant::dyck, 15), 16);
  const SnakeMetric metric(s);
  const LandmarkDistances lm = map_distance_matrix(metric, 128);
  const std::size_t center = 17;
  const auto dist = distances_from(metric, lm, center);
  const double top = *std::max_element(dist.begin(), dist.end());
  std::vector<double> radii = {0.0, 0.1, 0.2, 0.5, 1.0, top, 2 * top};
  const BallVolumeCurve curve = ball_volume_curve(metric, lm, center, radii);
  for (std::size_t i = 1; i < radii.size(); ++i) CHECK(curve.fraction[i] >= curve.fraction[i - 1]);
  CHECK(curve.fraction[5] == 1.0);
  CHECK(curve.fraction[6] == 1.0);
  const auto& v = metric.vertex();
  const auto own = std::count_if(v.begin(), v.end() - 1, [&](std::size_t x) { return x == v[lm.landmarks[center]]; });
  CHECK(curve.fraction[0] == doctest::Approx(static_cast<double>(own) / 6000.0));
  // Distances via landmarks bound the one-link value from above by at most it.
  for (std::size_t x = 0; x < dist.size(); x += 37) {
    CHECK(dist[x] <= metric.d_circ(lm.landmarks[center], x) + 1e-12);
    CHECK(dist[x] >= std::abs(s.Y[x] - s.Y[lm.landmarks[center]]) - 1e-12);
  }
  const std::vector<double> tiny = {1e-9};
  const BallVolumeCurve around_root = ball_volume_curve(metric, lm, lm.root(), tiny);
  CHECK(around_root.fraction[0] > 0);
}

TEST_CASE("root index") {
  std::vector<double> y = {0.5, -1.0, 2.0, -1.0, 0.0};
  CHECK(root_index(y) == 1);
  for (double& v : y) v += 10;
  CHECK(root_index(y) == 1);
  CHECK_THROWS(root_index(std::vector<double>{}));
}

TEST_CASE("snake binary round trip") {
  const SnakeSample s = snake_labels(sample_contour(50, ContourVariant::brownian, 17), 18);
  const auto path = std::filesystem::temp_directory_path() / "lqg_snake_test.bin";
  save_snake(s, path);
  CHECK(std::filesystem::file_size(path) == 3 * 8 + 2 * 101 * 8);
  std::ifstream in(path, std::ios::binary);
  unsigned char head[8];
  in.read(reinterpret_cast<char*>(head), 8);
  CHECK(head[0] == 100);
  CHECK(head[1] == 0);
  const SnakeSample back = load_snake(path);
  CHECK(back.contour.n == 100);
  CHECK(back.contour.variant == ContourVariant::brownian);
  CHECK(back.seed == 18);
  CHECK(back.contour.X == s.contour.X);
  CHECK(back.Y == s.Y);
  CHECK(back.root == s.root);
  std::filesystem::remove(path);
}
