#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace mtstab {

/// Constant-rate two-state switching process (the classical baseline with
/// concentration-independent speeds and rates).
struct DmnParams {
  double v_plus = 1.0;   ///< growth speed
  double v_minus = 1.0;  ///< shrink speed
  double f_cat = 1.0;    ///< + -> - rate
  double f_res = 1.0;    ///< - -> + rate

  void validate() const;
  double total_rate() const { return f_cat + f_res; }
  double tau_c() const { return 1.0 / total_rate(); }
};

/// Transition matrix P(t), state order (-, +); columns sum to 1.
Eigen::Matrix2d transition_matrix(const DmnParams& p, double t);

/// Instantaneous mean velocity given the initial growing-state probability.
double mean_velocity(const DmnParams& p, double p_plus_0, double t);

/// Stationary drift (v+ f_res - v- f_cat) / (f_cat + f_res).
double drift_J(const DmnParams& p);

/// Effective diffusion f_cat f_res (v+ + v-)^2 / (f_cat + f_res)^3.
double d_eff(const DmnParams& p);

/// Mean length of the exponential steady-state length distribution; only
/// defined in the bounded regime v- f_cat > v+ f_res.
double mean_length(const DmnParams& p);

}  // namespace mtstab
