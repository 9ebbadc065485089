#pragma once

#include <vector>

#include "mtstab/model.hpp"

namespace mtstab {

/// Raised when the requested boundary/case combination admits only the
/// identically trivial slow solution (homogeneous flux data with vanishing
/// limiting concentration).
struct TrivialSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SlowCase { I, II };  // I: c(+inf) = 0, II: c(+inf) > 0

/// Outer (d = 0) solution: c in closed form, z = v+ p+ from the scalar
/// linear ODE integrated in the stretched variable s = exp(-x sqrt(k/D)),
/// p- recovered from the conserved combination v+ p+ - nu- p- = alpha.
class SlowSolution {
 public:
  SlowSolution(const ModelParams& p, const BoundaryCondition& bc, SlowCase kind,
               double c_inf, double x_max);

  double c(double x) const;
  double p_plus(double x) const;
  double p_minus(double x) const;
  StateVec state(double x) const;

  double alpha_cons() const { return alpha_; }
  SlowCase case_kind() const { return kind_; }
  double c_inf() const { return c_inf_; }
  double x_max() const { return x_max_; }
  const ModelParams& params() const { return params_; }
  /// The equilibrium the solution approaches (Case II lies on the curve).
  StateVec limit_state() const;

 private:
  double z_of_x(double x) const;  // v+ p+
  double w_at(double x) const;    // interpolated z or log z

  ModelParams params_;
  BoundaryCondition bc_;
  SlowCase kind_;
  double c_inf_;
  double alpha_;
  double kappa_;  // sqrt(k/D)
  double x_max_;
  double c0_;
  // dense samples of z (Case II) or log z (Case I) on a uniform x-grid
  std::vector<double> xs_;
  std::vector<double> w_;
  std::vector<double> dw_;  // ODE slope at the nodes, for Hermite evaluation
  bool log_form_;
};

SlowSolution slow_solve(const ModelParams& p, const BoundaryCondition& bc,
                        SlowCase kind, double c_inf = 0.0, double x_max = 40.0);

/// Inner solution on the stretched scale x~ = x/d: densities p+ and c are
/// frozen, p- relaxes exponentially at rate nu- from the boundary value to
/// the outer value.
struct FastLayer {
  double nu_minus = 1.0;
  double d = 0.1;
  double p_plus_const = 0.0;
  double c_const = 0.0;
  double p_minus_outer = 0.0;
  double p_minus_jump = 0.0;  // boundary value minus outer value

  StateVec at_stretched(double x_tilde) const;
  StateVec at_x(double x) const { return at_stretched(x / d); }
};

FastLayer fast_layer_solve(const ModelParams& p, const StateVec& outer_at_0,
                           const BoundaryCondition& bc);

/// Uniformly valid outer + inner - common-limit approximation.
class CompositeSolution {
 public:
  CompositeSolution(SlowSolution slow, FastLayer fast)
      : slow_(std::move(slow)), fast_(fast) {}

  StateVec at(double x) const;
  const SlowSolution& slow() const { return slow_; }
  const FastLayer& fast() const { return fast_; }

 private:
  SlowSolution slow_;
  FastLayer fast_;
};

CompositeSolution composite(const ModelParams& p, const BoundaryCondition& bc,
                            SlowCase kind, double c_inf = 0.0, double x_max = 40.0);

}  // namespace mtstab
