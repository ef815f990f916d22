#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "../support/chain_oracle.hpp"
#include "lqg/bmap/metric.hpp"
#include "lqg/cli/runner.hpp"
#include "lqg/cli/suites.hpp"

namespace fs = std::filesystem;
using namespace lqg;
using namespace lqg::cli;

namespace {

struct Line {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [FAIL]");
  }
};

std::string num(double x, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

using Reports = std::vector<EstimateReport>;

Reports run(const std::string& suite, const fs::path& root, std::uint64_t seed, unsigned workers,
            const nlohmann::json& params = nlohmann::json::object()) {
  ExperimentConfig c;
  c.suite = suite;
  c.seed = seed;
  c.workers = workers;
  c.out = root / suite;
  c.params = params;
  const int status = run_suite(c, std::cerr);
  if (status == kError) throw std::runtime_error(suite + " failed");
  std::ifstream in(c.out / "reports.json");
  Reports out;
  for (const auto& j : nlohmann::json::parse(in)) out.push_back(report_from_json(j));
  return out;
}

const EstimateReport& get(const Reports& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("missing report " + name);
}

Reports named(const Reports& rs, const std::string& prefix) {
  Reports out;
  for (const auto& r : rs)
    if (r.name.rfind(prefix, 0) == 0) out.push_back(r);
  return out;
}

std::string fit(const EstimateReport& r) { return num(r.estimate) + " +- " + num(r.stderr_, 2); }

void criterion1(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  const Reports rs = run("exact-law", root, seed, workers);
  for (const char* kind : {"csbp_survival_", "csbp_laplace_"}) {
    const Reports pts = named(rs, kind);
    double worst = 0;
    std::size_t within = 0;
    for (const auto& r : pts) {
      const double z = std::abs(r.params.at("z").get<double>());
      worst = std::max(worst, z);
      within += z <= 3;
    }
    const std::size_t want = std::string(kind) == "csbp_survival_" ? 9 : 12;
    l.require(pts.size() == want && within == want,
              std::string(kind == std::string("csbp_survival_") ? "survival" : "Laplace") + " " +
                  std::to_string(within) + "/" + std::to_string(want) + " within 3 sigma (max |z| " + num(worst) + ")");
  }
  const auto& rt = get(rs, "lamperti_roundtrip_max_error");
  l.require(rt.estimate <= 1e-3, "Lamperti round trip max error " + num(rt.estimate) + "*y0 over " +
                                     std::to_string(rt.n) + " seeds");
}

void criterion2(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  const Reports rs = run("appendix-b", root, seed, workers);
  const auto& t1 = get(rs, "tau1_tail_slope");
  l.require(!t1.inconclusive && std::abs(t1.estimate + 1.0 / 3) <= 0.12, "tau1 slope " + fit(t1));
  const auto& t2 = get(rs, "tau_tail_slope");
  l.require(!t2.inconclusive && std::abs(t2.estimate + 2.0 / 3) <= 0.12, "tau slope " + fit(t2));
  const auto& inf = get(rs, "running_inf_log_slope");
  l.require(inf.params.at("strictly_increasing").get<bool>() && inf.estimate > 0,
            "E[-I 1{tau<A}] increasing, log-A slope " + fit(inf));
  const auto& refl = get(rs, "reflection_mean_max");
  const double bound = refl.params.at("bound").get<double>();
  l.require(refl.estimate <= bound, "reflection max " + num(refl.estimate) + " <= " + num(bound));
  const auto& sup = get(rs, "reflected_sup_r2");
  l.require(!sup.inconclusive && sup.estimate >= 0.98,
            "reflected-sup R^2 " + num(sup.estimate, 4) + (sup.inconclusive ? " (inconclusive: resolved to x = " +
                                                                                   num(sup.params.at("x_resolved_max").get<double>()) + ")"
                                                                             : ""));
  const auto& over = get(rs, "overshoot_tail_slope");
  l.require(!over.inconclusive && over.estimate >= -1.8, "overshoot slope " + fit(over));
  const auto& joint = get(rs, "joint_event_slope");
  l.require(joint.estimate > 0, "joint-event slope " + fit(joint));
}

void criterion3(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  const Reports rs = run("scale-functions", root, seed, workers);
  const auto& phi = get(rs, "phi_kappa_max_relative_error");
  l.require(phi.estimate <= 1e-6, "Phi_0 relative error " + num(phi.estimate));
  for (const char* k : {"0.25", "1"}) {
    const auto& r = get(rs, std::string("phi_kappa_lemma_ratio_min_kappa_") + k);
    l.require(r.estimate > 0, std::string("ratio min at kappa ") + k + " = " + num(r.estimate));
  }
  std::size_t ok = 0, total = 0;
  for (const auto& r : named(rs, "poisson_tail_")) {
    ++total;
    ok += r.estimate <= r.params.at("bound").get<double>() + 3 * r.stderr_;
  }
  l.require(total > 0 && ok == total, "Poisson bound dominates " + std::to_string(ok) + "/" + std::to_string(total));
  ok = total = 0;
  for (const auto& r : named(rs, "cramer_sum_tail_")) {
    ++total;
    ok += r.estimate <= r.params.at("bound").get<double>() + 3 * r.stderr_;
  }
  l.require(total == 3 && ok == total, "Cramer bound dominates " + std::to_string(ok) + "/" + std::to_string(total));
}

void criterion4(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  const Reports rs = run("ball-volume", root, seed, workers);
  const auto& slope = get(rs, "ball_volume_slope");
  l.require(slope.estimate >= 3.3 && slope.estimate <= 4.7, "volume slope " + fit(slope));
  const auto& drift = get(rs, "ball_volume_slope_drift");
  l.require(drift.estimate < 0.3, "drift " + num(drift.estimate));
  const auto& axioms = get(rs, "pseudometric_violations");
  const auto& root_id = get(rs, "root_identity_undercuts");
  l.require(axioms.estimate == 0 && root_id.estimate == 0, "axiom violations " + num(axioms.estimate) +
                                                                ", root-identity undercuts " + num(root_id.estimate));
  std::size_t mismatches = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto snake = bmap::snake_labels(bmap::sample_contour(12, bmap::ContourVariant::dyck, 7000 + s), 8000 + s);
    const bmap::SnakeMetric metric(snake);
    const std::vector<std::size_t> landmarks = {0, 3, 7, 11, 16, 20, snake.root};
    const auto lm = bmap::landmark_distances(metric, landmarks);
    const auto brute = oracle::chain_infimum(snake, landmarks);
    for (std::size_t i = 0; i < brute.size(); ++i)
      mismatches += std::abs(lm.chain[i] - brute[i]) > 1e-12 * std::max(1.0, std::abs(brute[i]));
  }
  l.require(mismatches == 0, "toy chain infimum vs brute force, " + std::to_string(mismatches) + " mismatches on 50 maps");
}

void criterion5(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  const Reports vol = run("lbm-volume", root, seed, workers);
  const Reports exit = run("lbm-exit", root, seed, workers);
  const Reports heat = run("lbm-heatkernel", root, seed, workers);
  const auto& v = get(vol, "lbm_volume_slope");
  l.require(v.estimate >= 3.2 && v.estimate <= 4.8, "volume slope " + fit(v));
  const auto& e = get(exit, "lbm_exit_slope");
  l.require(e.estimate >= 3.2 && e.estimate <= 4.8, "exit slope " + fit(e));
  const auto& d = get(heat, "lbm_ondiag_slope");
  l.require(!d.inconclusive && d.estimate >= -1.3 && d.estimate <= -0.7, "on-diagonal slope " + fit(d));
  const auto& vf = get(vol, "lbm_volume_slope_flat");
  const auto& ef = get(exit, "lbm_exit_slope_flat");
  const auto& df = get(heat, "lbm_ondiag_slope_flat");
  l.require(std::abs(vf.estimate - 2) <= 0.2 && std::abs(ef.estimate - 2) <= 0.2 && std::abs(df.estimate + 1) <= 0.3,
            "flat controls " + num(vf.estimate) + ", " + num(ef.estimate) + ", " + num(df.estimate));
  const auto& st = get(heat, "lbm_stretch_exponent");
  l.require(!st.inconclusive && st.estimate >= 0.15 && st.estimate <= 0.55,
            "stretch exponent " + fit(st) + ", 95% CI [" + num(st.estimate - 1.96 * st.stderr_) + ", " +
                num(st.estimate + 1.96 * st.stderr_) + "]");
}

void criterion6(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  const Reports rs = run("chunk-stats", root, seed, workers);
  double violations = 0;
  std::size_t samples = 0;
  for (const auto& r : named(rs, "chunk_invariant_violations_A")) {
    violations += r.estimate;
    samples = r.n;
  }
  l.require(violations == 0 && samples >= 10000,
            "invariant violations " + num(violations) + " (" + std::to_string(samples) + " samples per A)");
  for (const char* A : {"4", "64"}) {
    const auto& z = get(rs, std::string("chunk_identity_z_A") + A);
    l.require(std::abs(z.estimate) <= 3, std::string("estimators agree at A = ") + A + ", z = " + num(z.estimate));
  }
  const auto& slope = get(rs, "chunk_regression_slope");
  l.require(slope.estimate > 0, "regression slope " + fit(slope));
}

std::map<std::string, std::string> payload(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name == "manifest.json") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[name] = s.str();
  }
  return out;
}

void criterion7(Line& l, const fs::path& root, std::uint64_t seed, unsigned workers) {
  // Reduced sizes keep the double runs cheap; the code paths are the full ones.
  const std::map<std::string, nlohmann::json> small = {
      {"exact-law", {{"stable_levy", {{"n_paths", 2000}, {"roundtrip_seeds", 5}}}}},
      {"appendix-b", {{"stable_levy", {{"n_pairs", 2000}, {"n_overshoot", 2000}, {"n_reflected", 5000}}}}},
      {"scale-functions", {{"analytic_bounds", {{"poisson_samples", 20000}, {"cramer_trials", 2000}}}}},
      {"ball-volume",
       {{"brownian_map", {{"n", 4096}, {"n_coarse", 1024}, {"maps", 2}, {"landmarks", 64}, {"triples", 200}}},
        {"save_samples", true}}},
      {"lbm-volume", {{"gmc_lbm", {{"n", 128}, {"n_coarse", 64}, {"volume_fields", 2}}}, {"save_samples", true}}},
      {"lbm-exit", {{"gmc_lbm", {{"n", 128}, {"n_coarse", 64}, {"exit_fields", 2}, {"exit_walks", 100}}}}},
      {"lbm-heatkernel", {{"gmc_lbm", {{"n", 64}, {"n_coarse", 64}, {"heat_fields", 2}, {"heat_walks", 300}}}}},
      {"chunk-stats", {{"stable_levy", {{"chunk_samples", 400}}}}},
  };
  std::size_t same = 0;
  for (const auto& suite : acceptance_suites()) {
    run(suite, root / "first", seed, workers, small.at(suite));
    run(suite, root / "second", seed, workers, small.at(suite));
    const auto a = payload(root / "first" / suite), b = payload(root / "second" / suite);
    const bool ok = !a.empty() && a == b;
    same += ok;
    if (!ok) l.require(false, suite + " payloads differ");
  }
  l.require(same == acceptance_suites().size(),
            std::to_string(same) + "/" + std::to_string(acceptance_suites().size()) + " suites byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance battery: one line per criterion"};
  std::uint64_t seed = 1;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  std::vector<int> only;
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Keep run directories here instead of a temporary directory");
  app.add_option("--only", only, "Criteria to run (1-7)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);

  const bool keep = !out.empty();
  const fs::path root = keep ? fs::path(out) : fs::temp_directory_path() / ("lqg_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root / "first");
  fs::remove_all(root / "second");

  const std::vector<std::function<void(Line&, const fs::path&, std::uint64_t, unsigned)>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
  const std::set<int> chosen(only.begin(), only.end());
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.contains(id)) continue;
    Line line;
    try {
      criteria[i](line, root, seed, workers);
    } catch (const std::exception& e) {
      line.require(false, std::string("error: ") + e.what());
    }
    all &= line.pass;
    std::cout << "criterion " << id << ": " << (line.pass ? "PASS" : "FAIL") << "  " << line.detail.str() << std::endl;
  }
  if (!keep) fs::remove_all(root);
  return all ? 0 : 1;
}
