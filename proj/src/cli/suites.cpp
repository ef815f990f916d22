#include "lqg/cli/suites.hpp"

#include <algorithm>

#include "lqg/analytic/suite.hpp"
#include "lqg/bmap/snake.hpp"
#include "lqg/bmap/suite.hpp"
#include "lqg/common/rng.hpp"
#include "lqg/gmc/field.hpp"
#include "lqg/gmc/suite.hpp"
#include "lqg/levy/appendix_b.hpp"
#include "lqg/levy/chunk.hpp"
#include "lqg/levy/exact_law.hpp"

namespace lqg::cli {

namespace {

template <class V>
void visit(V& v, analytic::ScaleSuiteConfig& c) {
  v("betas", c.betas);
  v("kappas", c.kappas);
  v("grid_lo", c.grid_lo);
  v("grid_hi", c.grid_hi);
  v("grid_points", c.grid_points);
  v("epsilon_h", c.epsilon_h);
  v("poisson_lambdas", c.poisson_lambdas);
  v("poisson_ratios", c.poisson_ratios);
  v("poisson_samples", c.poisson_samples);
  v("cramer_n", c.cramer_n);
  v("cramer_trials", c.cramer_trials);
  v("cramer_mean", c.cramer_mean);
  v("cramer_sd", c.cramer_sd);
}

template <class V>
void visit(V& v, levy::ExactLawConfig& c) {
  v("c", c.c);
  v("y0", c.y0);
  v("survival_t", c.survival_t);
  v("laplace_t", c.laplace_t);
  v("laplace_lambda", c.laplace_lambda);
  v("n_paths", c.n_paths);
  v("roundtrip_seeds", c.roundtrip_seeds);
  v("roundtrip_horizon", c.roundtrip_horizon);
  v("roundtrip_dt", c.roundtrip_dt);
}

template <class V>
void visit(V& v, levy::AppendixBConfig& c) {
  v("n_pairs", c.n_pairs);
  v("dt", c.dt);
  v("horizon", c.horizon);
  v("A_values", c.A_values);
  v("A_reflection", c.A_reflection);
  v("tail_lo", c.tail_lo);
  v("tail_hi", c.tail_hi);
  v("tail_points", c.tail_points);
  v("p_moment", c.p_moment);
  v("n_overshoot", c.n_overshoot);
  v("overshoot_lo", c.overshoot_lo);
  v("overshoot_hi", c.overshoot_hi);
  v("n_reflected", c.n_reflected);
  v("reflected_lo", c.reflected_lo);
  v("reflected_hi", c.reflected_hi);
  v("reflected_points", c.reflected_points);
  v("joint_gap", c.joint_gap);
  v("joint_y", c.joint_y);
  v("min_hits", c.min_hits);
  v("min_tail_points", c.min_tail_points);
}

template <class V>
void visit(V& v, levy::ChunkSuiteConfig& c) {
  v("chunk_A_values", c.A_values);
  v("chunk_identity_A", c.identity_A);
  v("chunk_samples", c.n_samples);
  v("chunk_dt_unit", c.dt_unit);
}

template <class V>
void visit(V& v, bmap::BallVolumeConfig& c) {
  v("n", c.n);
  v("n_coarse", c.n_coarse);
  v("maps", c.maps);
  v("centers", c.centers);
  v("landmarks", c.landmarks);
  v("r_lo", c.r_lo);
  v("r_hi", c.r_hi);
  v("radii", c.radii);
  v("triples", c.triples);
  std::string variant = bmap::to_string(c.variant);
  v("variant", variant);
  try {
    c.variant = bmap::parse_variant(variant);
  } catch (const std::exception&) {
    throw ConfigError("params.brownian_map.variant: expected \"dyck\" or \"brownian\", got \"" + variant + "\"");
  }
}

template <class V>
void visit(V& v, gmc::LbmConfig& c) {
  v("n", c.n);
  v("n_coarse", c.n_coarse);
  v("volume_fields", c.volume_fields);
  v("volume_centers", c.volume_centers);
  v("volume_radii", c.volume_radii);
  v("exit_fields", c.exit_fields);
  v("exit_walks", c.exit_walks);
  v("exit_radii", c.exit_radii);
  v("exit_decade_top", c.exit_decade_top);
  v("heat_fields", c.heat_fields);
  v("heat_walks", c.heat_walks);
  v("heat_times", c.heat_times);
  v("heat_decades", c.heat_decades);
  v("heat_window", c.heat_window);
  v("heat_bin_fraction", c.heat_bin_fraction);
  v("heat_levels", c.heat_levels);
  v("heat_targets_per_level", c.heat_targets_per_level);
  v("exponential_holding", c.exponential_holding);
}

// Module records under params. The Levy module carries the exact-law,
// appendix-B and chunk parameters side by side, so each reader accepts the
// union of their keys.
struct LevyParams {
  levy::ExactLawConfig exact;
  levy::AppendixBConfig appendix;
  levy::ChunkSuiteConfig chunk;
};

template <class V>
void visit(V& v, LevyParams& p) {
  visit(v, p.exact);
  visit(v, p.appendix);
  visit(v, p.chunk);
}

struct Params {
  analytic::ScaleSuiteConfig analytic;
  LevyParams levy;
  bmap::BallVolumeConfig bmap;
  gmc::LbmConfig gmc;
  bool save_samples = false;
};

template <class T>
void read_module(const nlohmann::json& params, const char* key, T& record) {
  if (!params.contains(key)) return;
  FieldReader read(params.at(key), std::string("params.") + key);
  visit(read, record);
  read.finish();
}

template <class T>
nlohmann::json write_module(T record) {
  FieldWriter write;
  visit(write, record);
  return write.take();
}

void invalid(const std::string& where, const std::exception& e) {
  throw ConfigError(where + ": " + e.what());
}

Params read_params(const ExperimentConfig& config) {
  Params p;
  const nlohmann::json& j = config.params;
  for (const auto& [key, value] : j.items()) {
    if (key != "analytic_bounds" && key != "stable_levy" && key != "brownian_map" && key != "gmc_lbm" &&
        key != "save_samples")
      throw ConfigError("params." + key + ": unknown module");
  }
  read_module(j, "analytic_bounds", p.analytic);
  read_module(j, "stable_levy", p.levy);
  read_module(j, "brownian_map", p.bmap);
  read_module(j, "gmc_lbm", p.gmc);
  if (j.contains("save_samples")) {
    if (!j.at("save_samples").is_boolean()) throw ConfigError("params.save_samples: expected a boolean");
    p.save_samples = j.at("save_samples").get<bool>();
  }
  p.analytic.seed = derive_seed(config.seed, 1);
  p.levy.exact.seed = derive_seed(config.seed, 2);
  p.levy.appendix.seed = derive_seed(config.seed, 3);
  p.levy.chunk.seed = derive_seed(config.seed, 4);
  p.bmap.seed = derive_seed(config.seed, 5);
  p.gmc.seed = derive_seed(config.seed, 6);
  p.analytic.workers = p.levy.exact.workers = p.levy.appendix.workers = p.levy.chunk.workers = p.bmap.workers =
      p.gmc.workers = config.workers;
  return p;
}

template <class T>
void check(const char* where, const T& record) {
  try {
    record.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    invalid(where, e);
  }
}

using Runner = SuiteOutput (*)(const Params&);

SuiteOutput exact_law(const Params& p, bool survival, bool laplace, bool roundtrip) {
  SuiteOutput out;
  if (survival || laplace) {
    auto r = levy::csbp_exact_law(p.levy.exact, survival, laplace);
    out.reports = std::move(r.reports);
    out.tables.emplace_back("exact_law.csv", std::move(r.table));
  }
  if (roundtrip) out.reports.push_back(levy::lamperti_roundtrip(p.levy.exact));
  return out;
}

SuiteOutput run_exact_law(const Params& p) { return exact_law(p, true, true, true); }
SuiteOutput run_extinction(const Params& p) { return exact_law(p, true, false, false); }
SuiteOutput run_laplace(const Params& p) { return exact_law(p, false, true, false); }
SuiteOutput run_roundtrip(const Params& p) { return exact_law(p, false, false, true); }

SuiteOutput run_appendix_b(const Params& p) {
  auto r = levy::appendix_b_estimators(p.levy.appendix);
  SuiteOutput out;
  out.reports = std::move(r.reports);
  for (auto& [name, table] : r.curves) out.tables.emplace_back(name + ".csv", std::move(table));
  return out;
}

SuiteOutput run_scale(const Params& p) {
  auto r = analytic::scale_function_suite(p.analytic);
  SuiteOutput out;
  out.reports = std::move(r.reports);
  out.tables.emplace_back("phi_table.csv", std::move(r.phi));
  return out;
}

SuiteOutput run_phi(const Params& p) {
  auto r = analytic::phi_table(p.analytic);
  SuiteOutput out;
  out.reports = std::move(r.reports);
  out.tables.emplace_back("phi_table.csv", std::move(r.phi));
  return out;
}

SuiteOutput run_ball_volume(const Params& p) {
  auto r = bmap::ball_volume_suite(p.bmap);
  SuiteOutput out;
  out.reports = std::move(r.reports);
  out.tables.emplace_back("ball_volume.csv", std::move(r.curve));
  if (p.save_samples) {
    const bmap::BallVolumeConfig c = p.bmap;
    out.binaries.emplace_back("snake_sample.bin", [c](const std::filesystem::path& path) {
      const auto contour = bmap::sample_contour(c.n, c.variant, derive_seed(c.seed, 0x736e616b65));
      bmap::save_snake(bmap::snake_labels(contour, derive_seed(c.seed, 0x6c6162656c)), path);
    });
  }
  return out;
}

SuiteOutput lbm(const Params& p, gmc::LbmResult (*fn)(const gmc::LbmConfig&), const char* csv) {
  auto r = fn(p.gmc);
  SuiteOutput out;
  out.reports = std::move(r.reports);
  out.tables.emplace_back(csv, std::move(r.points));
  if (p.save_samples) {
    const gmc::LbmConfig c = p.gmc;
    out.binaries.emplace_back("field_sample.bin", [c](const std::filesystem::path& path) {
      const auto field = gmc::sample_gff(c.n, true, derive_seed(c.seed, 0x6669656c64));
      gmc::save_field(field, gmc::gmc_mass(field), gmc::kXi, path);
    });
  }
  return out;
}

SuiteOutput run_lbm_volume(const Params& p) { return lbm(p, gmc::lbm_volume_suite, "lbm_volume.csv"); }
SuiteOutput run_lbm_exit(const Params& p) { return lbm(p, gmc::lbm_exit_suite, "lbm_exit.csv"); }
SuiteOutput run_lbm_heat(const Params& p) { return lbm(p, gmc::lbm_heat_kernel_suite, "lbm_heatkernel.csv"); }

SuiteOutput run_chunk(const Params& p) {
  auto r = levy::chunk_suite(p.levy.chunk);
  SuiteOutput out;
  out.reports = std::move(r.reports);
  out.tables.emplace_back("chunk_curve.csv", std::move(r.curve));
  return out;
}

enum class Module { analytic, exact, appendix, chunk, bmap, gmc };

void validate_module(const Params& p, Module m) {
  switch (m) {
    case Module::analytic: return check("params.analytic_bounds", p.analytic);
    case Module::exact: return check("params.stable_levy", p.levy.exact);
    case Module::appendix: return check("params.stable_levy", p.levy.appendix);
    case Module::chunk: return check("params.stable_levy", p.levy.chunk);
    case Module::bmap: return check("params.brownian_map", p.bmap);
    case Module::gmc: return check("params.gmc_lbm", p.gmc);
  }
}

Suite make(std::string name, std::string description, Module module, Runner runner) {
  return {std::move(name), std::move(description),
          [module](const ExperimentConfig& c) { validate_module(read_params(c), module); },
          [module, runner](const ExperimentConfig& c) {
            const Params p = read_params(c);
            validate_module(p, module);
            return runner(p);
          }};
}

}  // namespace

bool SuiteOutput::inconclusive() const {
  return std::any_of(reports.begin(), reports.end(), [](const EstimateReport& r) { return r.inconclusive; });
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      make("exact-law", "CSBP survival and Laplace transform against closed forms, Lamperti round trip", Module::exact,
           run_exact_law),
      make("csbp-extinction", "CSBP survival probabilities against the closed form", Module::exact, run_extinction),
      make("csbp-laplace", "CSBP Laplace transforms against the closed form", Module::exact, run_laplace),
      make("lamperti-roundtrip", "Lamperti transform round trip on seeded paths", Module::exact, run_roundtrip),
      make("appendix-b", "return-time tails, overshoot, reflected supremum and joint-event estimators",
           Module::appendix, run_appendix_b),
      make("scale-functions", "Phi_kappa table plus Poisson and Cramer bound checks", Module::analytic, run_scale),
      make("phi-table", "Phi_kappa on the (r, t) grid against the power-case closed form", Module::analytic, run_phi),
      make("ball-volume", "Brownian map ball-volume exponent, resolution drift and metric axioms", Module::bmap,
           run_ball_volume),
      make("lbm-volume", "LFPP ball mass exponent with flat control", Module::gmc, run_lbm_volume),
      make("lbm-exit", "Liouville walk exit-time exponent with flat control", Module::gmc, run_lbm_exit),
      make("lbm-heatkernel", "on-diagonal heat-kernel decay and off-diagonal stretch exponent", Module::gmc,
           run_lbm_heat),
      make("chunk-stats", "chunk boundary-length invariants and the two E[T - B_R] estimators", Module::chunk,
           run_chunk),
  };
  return all;
}

const Suite& find_suite(const std::string& name) {
  for (const Suite& s : suites())
    if (s.name == name) return s;
  throw ConfigError("config.suite: unknown suite \"" + name + "\" (see `lqg list`)");
}

nlohmann::json default_params() {
  const Params p;
  return {{"analytic_bounds", write_module(p.analytic)},
          {"stable_levy", write_module(p.levy)},
          {"brownian_map", write_module(p.bmap)},
          {"gmc_lbm", write_module(p.gmc)},
          {"save_samples", p.save_samples}};
}

const std::vector<std::string>& acceptance_suites() {
  static const std::vector<std::string> names = {"exact-law", "appendix-b", "scale-functions", "ball-volume",
                                                 "lbm-volume", "lbm-exit", "lbm-heatkernel", "chunk-stats"};
  return names;
}

}  // namespace lqg::cli
