#include "lqg/bmap/snake.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/binary_io.hpp"
#include "lqg/common/rng.hpp"

namespace lqg::bmap {

SnakeSample snake_labels(const ContourExcursion& contour, std::uint64_t seed) {
  if (contour.X.size() != contour.n + 1 || contour.X.front() != 0)
    throw std::invalid_argument("snake_labels: malformed contour");
  RandomStream rng(seed, 0x736e616b65);
  SnakeSample out;
  out.contour = contour;
  out.seed = seed;
  out.Y.resize(contour.X.size());
  struct Point {
    double height, label;
  };
  std::vector<Point> line{{contour.X[0], 0.0}};
  out.Y[0] = 0;
  for (std::size_t k = 1; k < contour.X.size(); ++k) {
    const double b = contour.X[k];
    const Point cur = line.back();
    if (b > cur.height) {
      line.push_back({b, cur.label + std::sqrt(b - cur.height) * rng.normal()});
    } else if (b < cur.height) {
      Point above = cur;
      while (line.back().height > b) {
        above = line.back();
        line.pop_back();
      }
      const Point below = line.back();
      if (below.height < b) {
        const double span = above.height - below.height;
        const double w = (b - below.height) / span;
        const double mean = below.label + w * (above.label - below.label);
        const double var = (b - below.height) * (above.height - b) / span;
        line.push_back({b, mean + std::sqrt(var) * rng.normal()});
      }
    }
    out.Y[k] = line.back().label;
  }
  out.root = root_index(out.Y);
  return out;
}

std::size_t root_index(std::span<const double> Y) {
  if (Y.empty()) throw std::invalid_argument("root_index: empty labels");
  return static_cast<std::size_t>(std::min_element(Y.begin(), Y.end()) - Y.begin());
}

void save_snake(const SnakeSample& sample, const std::filesystem::path& path) {
  io::BinaryWriter w;
  w.put_u64(sample.contour.n);
  w.put_u64(static_cast<std::uint64_t>(sample.contour.variant));
  w.put_u64(sample.seed);
  w.put_f64_array(sample.contour.X);
  w.put_f64_array(sample.Y);
  w.save(path);
}

SnakeSample load_snake(const std::filesystem::path& path) {
  auto r = io::BinaryReader::load(path);
  SnakeSample s;
  s.contour.n = r.get_u64();
  const std::uint64_t variant = r.get_u64();
  if (variant > 1) throw std::runtime_error("load_snake: unknown variant " + std::to_string(variant));
  s.contour.variant = static_cast<ContourVariant>(variant);
  s.seed = r.get_u64();
  s.contour.X = r.get_f64_array(s.contour.n + 1);
  s.Y = r.get_f64_array(s.contour.n + 1);
  if (r.remaining() != 0) throw std::runtime_error("load_snake: trailing bytes");
  s.root = root_index(s.Y);
  return s;
}

}  // namespace lqg::bmap
