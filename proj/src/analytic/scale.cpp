#include "lqg/analytic/scale.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace lqg::analytic {

namespace {

constexpr int kGridPoints = 512;
constexpr double kGridDecades = 16.0;
constexpr double kGoldenTol = 1e-10;  // in log10 s
constexpr int kMaxShifts = 64;

struct Optimum {
  double u;  // log10 of the maximiser
  double value;
};

// Golden-section search for a maximum of f on [a, b].
Optimum golden_max(const std::function<double(double)>& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int iterations = 0;
  while (b - a > kGoldenTol * std::max(1.0, std::abs(a))) {
    if (!std::isfinite(fc) || !std::isfinite(fd) || ++iterations > 400) {
      throw NumericalError("golden-section refinement did not converge", std::pow(10.0, a),
                           std::pow(10.0, b));
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double u = 0.5 * (a + b);
  return {u, f(u)};
}

// Maximise f(u) over a 512-point grid of log10 s spanning [lo, lo + 16], then
// refine around the best grid point. A grid edge may be moved outwards when
// the best point sits on it and the direction is allowed.
Optimum grid_then_golden(const std::function<double(double)>& f, double lo, bool shift_left,
                         bool shift_right) {
  const double step = kGridDecades / (kGridPoints - 1);
  for (int shift = 0; shift <= kMaxShifts; ++shift) {
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGridPoints; ++k) {
      const double v = f(lo + k * step);
      if (v > best_value) {
        best_value = v;
        best = k;
      }
    }
    if (best < 0) throw NumericalError("objective is not finite on the grid", std::pow(10.0, lo),
                                       std::pow(10.0, lo + kGridDecades));
    if (best == 0 && shift_left) {
      lo -= kGridDecades / 2;
      continue;
    }
    if (best == kGridPoints - 1 && shift_right) {
      lo += kGridDecades / 2;
      continue;
    }
    const double a = lo + std::max(best - 1, 0) * step;
    const double b = lo + std::min(best + 1, kGridPoints - 1) * step;
    Optimum refined = golden_max(f, a, b);
    if (best_value > refined.value) refined = {lo + best * step, best_value};
    return refined;
  }
  throw NumericalError("supremum not bracketed after grid shifts", std::pow(10.0, lo),
                       std::pow(10.0, lo + kGridDecades));
}

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

double correction_h(double r) {
  require(r > 0, "correction_h: r must be positive");
  if (std::isinf(r)) return 1.0;
  return std::log(std::numbers::e + 1.0 / r);
}

ScaleFunction ScaleFunction::power(double beta) {
  require(beta > 1, "ScaleFunction::power: beta must exceed 1");
  ScaleFunction f;
  f.beta_ = beta;
  return f;
}

ScaleFunction ScaleFunction::tabulated(std::vector<double> s, std::vector<double> psi) {
  require(s.size() == psi.size() && s.size() >= 2, "ScaleFunction::tabulated: need >= 2 knots");
  ScaleFunction f;
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] > 0 && psi[i] > 0, "ScaleFunction::tabulated: knots must be positive");
    if (i > 0) require(s[i] > s[i - 1] && psi[i] > psi[i - 1], "ScaleFunction::tabulated: must be increasing");
    f.knots_s_.push_back(std::log(s[i]));
    f.knots_psi_.push_back(std::log(psi[i]));
  }
  const std::size_t n = s.size();
  f.beta_ = (f.knots_psi_[n - 1] - f.knots_psi_[0]) / (f.knots_s_[n - 1] - f.knots_s_[0]);
  return f;
}

double ScaleFunction::interp(std::span<const double> xs, std::span<const double> ys, double x) {
  std::size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  k = std::clamp<std::size_t>(k, 1, xs.size() - 1);
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

double ScaleFunction::operator()(double s) const {
  if (is_power()) return std::pow(s, beta_);
  return std::exp(interp(knots_s_, knots_psi_, std::log(s)));
}

double ScaleFunction::inverse(double y) const {
  if (is_power()) return std::pow(y, 1.0 / beta_);
  return std::exp(interp(knots_psi_, knots_s_, std::log(y)));
}

ScaleSpec ScaleSpec::power(double alpha, double beta, double epsilon_h) {
  ScaleSpec spec{alpha, beta, epsilon_h, ScaleFunction::power(beta)};
  spec.validate();
  return spec;
}

double ScaleSpec::C_h() const { return 2.0 + std::exp(-1.0) / epsilon_h; }

void ScaleSpec::validate() const {
  require(alpha > 0, "ScaleSpec: alpha must be positive");
  require(beta > 1, "ScaleSpec: beta must exceed 1");
  require(epsilon_h > 0, "ScaleSpec: epsilon_h must be positive");
}

double phi0_closed(double r, double t, double beta) {
  require(t > 0, "phi0_closed: t must be positive");
  require(beta > 1, "phi0_closed: beta must exceed 1");
  require(r >= 0, "phi0_closed: r must be non-negative");
  const double c_beta = std::pow(beta, -beta / (beta - 1)) * (beta - 1);
  return c_beta * std::pow(std::pow(r, beta) / t, 1.0 / (beta - 1));
}

double phi_kappa_numeric(double r, double t, double kappa, const ScaleSpec& spec) {
  require(r >= 0 && t > 0 && kappa >= 0, "phi_kappa_numeric: need r >= 0, t > 0, kappa >= 0");
  spec.validate();
  if (r == 0) return 0.0;
  const auto radius = [&](double s) { return spec.psi.inverse(s * std::pow(correction_h(s), kappa)); };
  const auto objective = [&](double u) {
    const double s = std::pow(10.0, u);
    return r / radius(s) - t / s;
  };
  // Centre the window where both terms balance: r s / Psi^{-1}(s h^kappa) = t.
  const auto balance = [&](double u) {
    const double s = std::pow(10.0, u);
    return std::log(r) + std::log(s) - std::log(radius(s)) - std::log(t);
  };
  double lo = -300.0, hi = 300.0;
  double centre = std::log10(t);
  if (balance(lo) < 0 && balance(hi) > 0) {
    for (int i = 0; i < 200 && hi - lo > 1e-6; ++i) {
      const double mid = 0.5 * (lo + hi);
      (balance(mid) < 0 ? lo : hi) = mid;
    }
    centre = 0.5 * (lo + hi);
  }
  const Optimum best = grid_then_golden(objective, centre - kGridDecades / 2, true, true);
  return std::max(best.value, 0.0);
}

double psi_kappa_inverse(double t, double kappa, const ScaleSpec& spec) {
  require(t > 0 && kappa >= 0, "psi_kappa_inverse: need t > 0, kappa >= 0");
  spec.validate();
  if (spec.epsilon_h * kappa >= 1) {
    throw std::domain_error("psi_kappa_inverse: epsilon_h * kappa must be < 1");
  }
  const double top = std::log10(t);
  const auto objective = [&](double u) {
    const double s = std::pow(10.0, std::min(u, top));
    return spec.psi.inverse(s * std::pow(correction_h(s), kappa));
  };
  const Optimum best = grid_then_golden(objective, top - kGridDecades, true, false);
  return std::max(best.value, objective(top)) + spec.psi.inverse(t);
}

}  // namespace lqg::analytic
