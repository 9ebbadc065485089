#include "mtstab/classical.hpp"

#include <cmath>

namespace mtstab {

void DmnParams::validate() const {
  for (double v : {v_plus, v_minus, f_cat, f_res}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("DMN parameters must be strictly positive");
    }
  }
}

Eigen::Matrix2d transition_matrix(const DmnParams& p, double t) {
  p.validate();
  if (t < 0.0) throw std::invalid_argument("transition_matrix: t must be nonnegative");
  const double tau = p.tau_c();
  const double e = std::exp(-t / tau);
  Eigen::Matrix2d P;
  // rows/cols ordered (-, +)
  P(0, 0) = tau * (p.f_cat + p.f_res * e);
  P(0, 1) = tau * (p.f_cat * (1.0 - e));
  P(1, 0) = tau * (p.f_res * (1.0 - e));
  P(1, 1) = tau * (p.f_res + p.f_cat * e);
  return P;
}

double mean_velocity(const DmnParams& p, double p_plus_0, double t) {
  p.validate();
  if (p_plus_0 < 0.0 || p_plus_0 > 1.0) {
    throw std::invalid_argument("mean_velocity: p_plus_0 must lie in [0,1]");
  }
  const double v_inf = drift_J(p);
  const double v0 = p.v_plus * p_plus_0 - p.v_minus * (1.0 - p_plus_0);
  return v_inf + (v0 - v_inf) * std::exp(-p.total_rate() * t);
}

double drift_J(const DmnParams& p) {
  p.validate();
  return (p.v_plus * p.f_res - p.v_minus * p.f_cat) / p.total_rate();
}

double d_eff(const DmnParams& p) {
  p.validate();
  const double F = p.total_rate();
  const double s = p.v_plus + p.v_minus;
  return p.f_cat * p.f_res * s * s / (F * F * F);
}

double mean_length(const DmnParams& p) {
  p.validate();
  const double den = p.v_minus * p.f_cat - p.v_plus * p.f_res;
  if (!(den > 0.0)) {
    throw std::domain_error("mean_length: unbounded-growth regime (v- f_cat <= v+ f_res)");
  }
  return p.v_minus * p.v_plus / den;
}

}  // namespace mtstab
