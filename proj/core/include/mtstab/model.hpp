#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mtstab {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Complex = std::complex<double>;
using CMat3 = Eigen::Matrix3cd;
using CMat6 = Eigen::Matrix<Complex, 6, 6>;
using CVec6 = Eigen::Matrix<Complex, 6, 1>;

/// The seven positive constants of the concentration-dependent
/// growth/shrinkage model.  Growth speed is v+ = u_plus * c and the
/// rescue rate is omega * c; f_cat is the constant catastrophe rate.
struct ModelParams {
  double d = 0.1;       ///< tip-density diffusion
  double D = 1.0;       ///< free-tubulin diffusion
  double omega = 1.0;   ///< rescue rate constant (rescue rate = omega*c)
  double nu_minus = 1.0;///< shrinkage speed
  double f_cat = 1.0;   ///< catastrophe rate
  double u_plus = 1.0;  ///< growth speed constant (v+ = u_plus*c)
  double k = 1.0;       ///< nucleation rate constant

  void validate() const;

  /// Parameter set used throughout the numerical experiments.
  static ModelParams fig3() { return ModelParams{0.1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}; }
};

/// State (p+, p-, c) at one point.  Evolution may transiently produce
/// negative entries; nonnegativity is not enforced here.
struct StateVec {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double c = 0.0;

  Vec3 vec() const { return Vec3(p_plus, p_minus, c); }
  static StateVec from(const Vec3& v) { return StateVec{v[0], v[1], v[2]}; }
};

/// A point on the equilibrium curve, parameterized by the limiting
/// concentration c_plus.
struct Endstate {
  double c_plus = 0.0;
  double p_plus_inf = 0.0;
  double p_minus_inf = 0.0;

  StateVec state() const { return StateVec{p_plus_inf, p_minus_inf, c_plus}; }
  Vec6 first_order_state() const;  ///< (p+, 0, p-, 0, c, 0)
};

enum class BcKind { Dirichlet, Neumann };

/// Boundary data at x=0: Dirichlet on both densities, and on the
/// concentration either a Dirichlet value or a homogeneous flux condition.
struct BoundaryCondition {
  BcKind kind = BcKind::Dirichlet;
  double p_plus_0 = 0.0;
  double p_minus_0 = 0.0;
  double c_0 = 0.0;  // meaningful for Dirichlet only

  static BoundaryCondition dirichlet(double pp, double pm, double c) {
    return BoundaryCondition{BcKind::Dirichlet, pp, pm, c};
  }
  static BoundaryCondition neumann(double pp, double pm) {
    return BoundaryCondition{BcKind::Neumann, pp, pm, 0.0};
  }
};

/// nu_minus*f_cat - u_plus*omega*c^2, positive exactly when the endstate at
/// concentration c has finite nonnegative densities.
double physicality_margin(const ModelParams& p, double c);
bool physicality(const ModelParams& p, double c);

/// Largest admissible concentration sqrt(nu_minus*f_cat/(u_plus*omega)).
double physical_c_max(const ModelParams& p);

/// The unique equilibrium with limiting concentration c_plus.
/// Throws std::invalid_argument when the physicality condition fails.
Endstate endstate_from_c(const ModelParams& p, double c_plus);

/// Inverts the (monotone) total equilibrium density p+ + p- on the physical
/// interval; used by the endstate-selection experiments.
double c_plus_from_total_density(const ModelParams& p, double p_total);

/// Convection matrix of the quasilinear form.
Mat3 matrix_A(const ModelParams& p, const StateVec& U);
/// Reaction matrix; B(U)U is the model's zero-order term.
Mat3 matrix_B(const ModelParams& p, const StateVec& U);
/// Diffusion matrix diag(d, d, D).
Mat3 matrix_C(const ModelParams& p);

/// Jacobian of U -> B(U)U at an arbitrary state.
Mat3 b_jacobian(const ModelParams& p, const StateVec& U);
/// Jacobian of U -> B(U)U at an endstate (the constant-state linearization).
Mat3 matrix_B_tilde(const ModelParams& p, const Endstate& e);

/// Zero-order coefficient of the linearization about a (generally
/// nonconstant) state: b_jacobian plus the term contributed by the
/// U-dependence of the convection matrix against the profile slope Ux.
Mat3 linearized_zero_order(const ModelParams& p, const StateVec& U, const StateVec& Ux);

/// Steady-state vector field of the first-order system in
/// Y = (p+, p+_x, p-, p-_x, c, c_x).
Vec6 rhs_F(const ModelParams& p, const Vec6& Y);
/// Analytic Jacobian of rhs_F.
Mat6 rhs_jacobian(const ModelParams& p, const Vec6& Y);
/// rhs_jacobian evaluated at the rest point of an endstate.
Mat6 jacobian_at_infinity(const ModelParams& p, const Endstate& e);

}  // namespace mtstab
