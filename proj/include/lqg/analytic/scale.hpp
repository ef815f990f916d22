#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lqg::analytic {

/// Raised when a supremum search cannot bracket its optimum.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const { return lo_; }
  double bracket_hi() const { return hi_; }

private:
  double lo_, hi_;
};

/// h(r) = log(e + 1/r); r may be +infinity.
double correction_h(double r);

/// Increasing bijection Psi of (0, inf): either s^beta or a tabulated curve,
/// log-log interpolated and extended by the end-segment power laws.
class ScaleFunction {
public:
  static ScaleFunction power(double beta);
  static ScaleFunction tabulated(std::vector<double> s, std::vector<double> psi);

  double operator()(double s) const;
  double inverse(double y) const;
  bool is_power() const { return knots_s_.empty(); }
  double power_exponent() const { return beta_; }

private:
  static double interp(std::span<const double> xs, std::span<const double> ys, double x);

  double beta_ = 0.0;
  std::vector<double> knots_s_, knots_psi_;  // logs of the table
};

struct ScaleSpec {
  double alpha = 4.0;
  double beta = 4.0;
  double epsilon_h = 1e-2;
  ScaleFunction psi = ScaleFunction::power(4.0);

  static ScaleSpec power(double alpha, double beta, double epsilon_h = 1e-2);
  double C_h() const;
  void validate() const;
};

/// c_beta (r^beta / t)^{1/(beta-1)} with c_beta = beta^{-beta/(beta-1)} (beta-1).
double phi0_closed(double r, double t, double beta);

/// sup_s r / Psi^{-1}(s h(s)^kappa) - t/s.
double phi_kappa_numeric(double r, double t, double kappa, const ScaleSpec& spec);

/// sup_{s in (0,t]} Psi^{-1}(s h(s)^kappa) + Psi^{-1}(t).
double psi_kappa_inverse(double t, double kappa, const ScaleSpec& spec);

}  // namespace lqg::analytic
