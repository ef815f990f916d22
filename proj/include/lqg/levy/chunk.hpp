#pragma once

#include <cstdint>
#include <vector>

#include "lqg/common/report.hpp"
#include "lqg/levy/stable.hpp"

namespace lqg::levy {

struct ChunkStats {
  double sigma = 0;  // (tau^L ^ tau^R) ^ 1, returns counted from t = 1/A
  double T = 0;      // top length
  double B_L = 0, B_R = 0;
  double L_sigma = 0, R_sigma = 0;
};

/// Chunk boundary lengths from two paths on one grid. The paths may end
/// early provided one of them has returned to its running infimum.
ChunkStats chunk_statistics(const LevyPath& L, const LevyPath& R, double A);

/// Sample L and R with step dt until the chunk closes (at most time 1).
ChunkStats sample_chunk(double A, double dt, std::uint64_t seed, std::uint64_t stream);

struct PairStop {
  double time = 0;  // first t >= t_start where either coordinate returns, capped at t_end
  double X[2] = {0, 0}, I[2] = {0, 0};
  bool returned = false;
};

/// Advance two independent unit processes in lockstep until the first grid
/// time t >= t_start with X^j - I^j <= 3 dt^{2/3} for some j, or t_end.
PairStop scan_pair(double dt, double t_start, double t_end, std::uint64_t seed, std::uint64_t stream);

struct ChunkSuiteConfig {
  std::vector<double> A_values = {4, 16, 64, 256};
  std::vector<double> identity_A = {4, 64};
  std::size_t n_samples = 10000;
  double dt_unit = 0.01;  // chunks at scale A use dt_unit / A
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
};

struct ChunkSuiteResult {
  std::vector<EstimateReport> reports;
  CsvTable curve{{"A", "mean_T_minus_BR", "stderr", "regressor"}};
  std::size_t invariant_violations = 0;

  const EstimateReport& report(const std::string& name) const;
};

/// Invariant check, the two estimators of E[T - B_R] and the regression
/// against A^{-2/3} log A.
ChunkSuiteResult chunk_suite(const ChunkSuiteConfig& config);

}  // namespace lqg::levy
