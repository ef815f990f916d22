#include "lqg/levy/chunk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/parallel.hpp"
#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"

namespace lqg::levy {

ChunkStats chunk_statistics(const LevyPath& L, const LevyPath& R, double A) {
  if (L.dt != R.dt) throw std::invalid_argument("chunk_statistics: paths must share one grid");
  if (!(A >= 2)) throw std::invalid_argument("chunk_statistics: A must be >= 2");
  const double dt = L.dt;
  if (dt > 1 / A) throw std::invalid_argument("chunk_statistics: grid too coarse to resolve 1/A");
  const std::size_t start = static_cast<std::size_t>(std::ceil(1 / (A * dt) - 1e-9));
  const std::size_t last = static_cast<std::size_t>(std::llround(1 / dt));
  const std::size_t n = std::min(L.values.size(), R.values.size());
  const double tol = hit_tolerance(dt);
  double inf_l = L.values[0], inf_r = R.values[0];
  for (std::size_t k = 0; k < n; ++k) {
    inf_l = std::min(inf_l, L.values[k]);
    inf_r = std::min(inf_r, R.values[k]);
    const bool closes = k >= start && (L.values[k] - inf_l <= tol || R.values[k] - inf_r <= tol);
    if (closes || k == last) {
      ChunkStats s;
      s.sigma = dt * static_cast<double>(k);
      s.L_sigma = L.values[k];
      s.R_sigma = R.values[k];
      s.T = (L.values[k] - inf_l) + (R.values[k] - inf_r);
      s.B_L = L.values[0] - inf_l;
      s.B_R = R.values[0] - inf_r;
      return s;
    }
  }
  throw std::invalid_argument("chunk_statistics: paths end before the chunk closes");
}

ChunkStats sample_chunk(double A, double dt, std::uint64_t seed, std::uint64_t stream) {
  const PairStop stop = scan_pair(dt, 1 / A, 1.0, seed, stream);
  LevyPath L, R;
  L.dt = R.dt = dt;
  // Re-run the two streams to the stopping index to hand chunk_statistics full paths.
  const auto steps = static_cast<std::size_t>(std::llround(stop.time / dt));
  StableIncrements sl(seed, 2 * stream), sr(seed, 2 * stream + 1);
  const double scale = std::pow(dt, 2.0 / 3.0);
  L.values.resize(steps + 1);
  R.values.resize(steps + 1);
  L.values[0] = R.values[0] = 0;
  for (std::size_t k = 1; k <= steps; ++k) {
    L.values[k] = L.values[k - 1] + scale * sl.next();
    R.values[k] = R.values[k - 1] + scale * sr.next();
  }
  return chunk_statistics(L, R, A);
}

PairStop scan_pair(double dt, double t_start, double t_end, std::uint64_t seed, std::uint64_t stream) {
  StableIncrements s1(seed, 2 * stream), s2(seed, 2 * stream + 1);
  const double scale = std::pow(dt, 2.0 / 3.0);
  const double tol = hit_tolerance(dt);
  const auto start = static_cast<std::size_t>(std::ceil(t_start / dt - 1e-9));
  const auto last = static_cast<std::size_t>(std::llround(t_end / dt));
  PairStop out;
  double x1 = 0, x2 = 0, i1 = 0, i2 = 0;
  for (std::size_t k = 1;; ++k) {
    x1 += scale * s1.next();
    x2 += scale * s2.next();
    i1 = std::min(i1, x1);
    i2 = std::min(i2, x2);
    out.returned = k >= start && (x1 - i1 <= tol || x2 - i2 <= tol);
    if (out.returned || k >= last) {
      out.time = dt * static_cast<double>(k);
      out.X[0] = x1;
      out.X[1] = x2;
      out.I[0] = i1;
      out.I[1] = i2;
      return out;
    }
  }
}

const EstimateReport& ChunkSuiteResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named " + name);
}

namespace {

constexpr std::size_t kTask = 500;

EstimateReport make(std::string name, const stats::MeanAccumulator& acc, std::uint64_t seed, nlohmann::json params) {
  EstimateReport r;
  r.name = std::move(name);
  r.estimate = acc.mean();
  r.stderr_ = acc.stderr_of_mean();
  r.n = acc.count();
  r.seed = seed;
  r.params = std::move(params);
  return r;
}

bool invariants_hold(const ChunkStats& c, double A, double tol) {
  return c.T >= 0 && c.B_L >= 0 && c.B_R >= 0 && c.B_L + tol > 0 && c.B_R + tol > 0 &&
         c.sigma >= 1 / A - 1e-12 && c.sigma <= 1 + 1e-12;
}

}  // namespace

void ChunkSuiteConfig::validate() const {
  if (A_values.size() < 2 || n_samples < 2 || !(dt_unit > 0 && dt_unit <= 1))
    throw std::invalid_argument("chunk suite: need two A values, samples and dt_unit in (0, 1]");
  for (double A : A_values) {
    if (!(A >= 2)) throw std::invalid_argument("chunk suite: A must be >= 2");
  }
  for (double A : identity_A) {
    if (!(A >= 2)) throw std::invalid_argument("chunk suite: identity A must be >= 2");
  }
}

ChunkSuiteResult chunk_suite(const ChunkSuiteConfig& cfg) {
  cfg.validate();
  ChunkSuiteResult out;
  std::vector<double> regressor, means, weights;
  for (double A : cfg.A_values) {
    const double dt = cfg.dt_unit / A;
    const double tol = hit_tolerance(dt);
    const std::uint64_t s = derive_seed(cfg.seed, 0x6368000 + static_cast<std::uint64_t>(A));
    const std::size_t tasks = (cfg.n_samples + kTask - 1) / kTask;
    struct Slot {
      stats::MeanAccumulator raw, controlled;
      std::size_t violations = 0, zero_infimum = 0;
    };
    std::vector<Slot> slots(tasks);
    parallel_for(tasks, cfg.workers, [&](std::size_t task) {
      Slot& slot = slots[task];
      for (std::size_t i = task * kTask; i < std::min(cfg.n_samples, (task + 1) * kTask); ++i) {
        const ChunkStats c = sample_chunk(A, dt, s, i);
        if (!invariants_hold(c, A, tol)) ++slot.violations;
        if (c.B_L == 0 || c.B_R == 0) ++slot.zero_infimum;
        slot.raw.add(c.T - c.B_R);
        slot.controlled.add(c.T - c.B_R - c.L_sigma - c.R_sigma);
      }
    });
    Slot total;
    for (const auto& slot : slots) {
      total.raw.merge(slot.raw);
      total.controlled.merge(slot.controlled);
      total.violations += slot.violations;
      total.zero_infimum += slot.zero_infimum;
    }
    out.invariant_violations += total.violations;
    const double x = std::pow(A, -2.0 / 3.0) * std::log(A);
    out.reports.push_back(make("chunk_invariant_violations_A" + format_double(A), total.raw, s,
                               {{"A", A}, {"violations", total.violations}, {"grid_zero_infimum", total.zero_infimum}}));
    out.reports.back().estimate = static_cast<double>(total.violations);
    out.reports.back().stderr_ = 0;
    out.reports.push_back(make("chunk_T_minus_BR_A" + format_double(A), total.controlled, s,
                               {{"A", A}, {"dt", dt}, {"raw_mean", total.raw.mean()},
                                {"raw_stderr", total.raw.stderr_of_mean()}}));
    out.curve.add_row({A, total.controlled.mean(), total.controlled.stderr_of_mean(), x});
    regressor.push_back(x);
    means.push_back(total.controlled.mean());
    weights.push_back(1 / std::pow(total.controlled.stderr_of_mean(), 2));

    if (std::find(cfg.identity_A.begin(), cfg.identity_A.end(), A) == cfg.identity_A.end()) continue;
    const std::uint64_t u = derive_seed(cfg.seed, 0x6964000 + static_cast<std::uint64_t>(A));
    std::vector<stats::MeanAccumulator> parts(tasks);
    const double scale = std::pow(A, -2.0 / 3.0);
    parallel_for(tasks, cfg.workers, [&](std::size_t task) {
      for (std::size_t i = task * kTask; i < std::min(cfg.n_samples, (task + 1) * kTask); ++i) {
        const PairStop p = scan_pair(cfg.dt_unit, 1, A, u, i);
        parts[task].add(-scale * p.I[0]);
      }
    });
    stats::MeanAccumulator unit;
    for (const auto& p : parts) unit.merge(p);
    const double diff = total.controlled.mean() - unit.mean();
    const double se = std::hypot(total.controlled.stderr_of_mean(), unit.stderr_of_mean());
    auto r = make("chunk_identity_unit_A" + format_double(A), unit, u, {{"A", A}});
    out.reports.push_back(r);
    r.name = "chunk_identity_z_A" + format_double(A);
    r.estimate = se > 0 ? diff / se : 0;
    r.stderr_ = 0;
    r.params = {{"A", A}, {"direct", total.controlled.mean()}, {"unit", unit.mean()}, {"difference", diff},
                {"stderr", se}};
    out.reports.push_back(r);
  }
  if (regressor.size() >= 2) {
    const auto fit = stats::weighted_linear_fit(regressor, means, weights);
    EstimateReport r;
    r.name = "chunk_regression_slope";
    r.estimate = fit.slope;
    r.stderr_ = fit.slope_stderr;
    r.n = cfg.n_samples * regressor.size();
    r.seed = cfg.seed;
    r.params = {{"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    out.reports.push_back(r);
  }
  return out;
}

}  // namespace lqg::levy
