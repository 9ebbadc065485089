#pragma once

#include <array>
#include <vector>

#include "mtstab/model.hpp"
#include "mtstab/profile.hpp"

namespace mtstab {

/// q(mu) with det(mu*A+ + B~+ + mu^2*C) = mu * q(mu); coefficients stored
/// degree 5 down to degree 0.  Derived from the matrices by polynomial
/// arithmetic, never from transcribed coefficient lists.
struct QuinticQ {
  std::array<double, 6> coeffs{};

  double leading() const { return coeffs[0]; }
  double at_zero() const { return coeffs[5]; }
  Complex eval(Complex mu) const;
  std::array<Complex, 5> roots() const;  // companion-matrix eigenvalues
};

QuinticQ quintic_q(const ModelParams& p, const Endstate& e);

struct ZeroRootCheck {
  bool no_extra_zero_root;
  double q_at_zero;
};
ZeroRootCheck zero_root_check(const ModelParams& p, const Endstate& e);

struct Quadratic {
  double a2 = 0.0, a1 = 0.0, a0 = 0.0;  // a2 x^2 + a1 x + a0
  double eval(double x) const { return (a2 * x + a1) * x + a0; }
};

/// Decision on pure imaginary roots of q: q(i xi) = i xi q1(xi^2) + q2(xi^2);
/// a root exists iff q1 and q2 share a real positive root.
struct ImaginaryRootCheck {
  bool common_positive_root = false;
  double root_x = 0.0;              // the shared root (when found), xi = +-sqrt(x)
  bool resultant_fallback = false;  // proportional quadratics, resultant used
  double resultant = 0.0;           // Sylvester resultant of q1, q2
  Quadratic q1, q2;
};
ImaginaryRootCheck imaginary_root_check(const ModelParams& p, const Endstate& e);

CMat3 dispersion_matrix(const ModelParams& p, const Endstate& e, double xi);

struct DispersionSample {
  double xi;
  std::array<Complex, 3> lambdas;
};

/// Eigenvalue curves of the constant-state symbol, ordered by continuity
/// along the grid (nearest-neighbor continuation).
std::vector<DispersionSample> dispersion_curves(const ModelParams& p, const Endstate& e,
                                                const std::vector<double>& xi_grid);

struct GooddispResult {
  bool holds = false;
  double violated_at = 0.0;  // meaningful when !holds
  double max_re = 0.0;
  double xi_max = 0.0;
  int n_samples = 0;
};

/// Samples Re lambda_j on [-xi_max, xi_max]; the constant state is linearly
/// stable when no sample exceeds the zero tolerance and the only neutral
/// samples sit at the origin.  xi_max <= 0 picks the module's own bound.
GooddispResult check_gooddisp(const ModelParams& p, const Endstate& e,
                              double xi_max = 0.0, int n_samples = 2001);

/// Limiting coefficient matrix of the first-order eigenvalue system.
CMat6 evans_matrix_at_infinity(const ModelParams& p, const Endstate& e, Complex lambda);

/// Spatial decay/growth rates at the endstate for spectral parameter lambda:
/// the roots of det(B~ + mu A + mu^2 C - lambda I) = 0.
std::array<Complex, 6> indicial_roots(const ModelParams& p, const Endstate& e,
                                      Complex lambda);

struct SplittingCount {
  Complex lambda;
  int n_stable = 0;
  int n_unstable = 0;
  int n_neutral = 0;
};
SplittingCount consistent_splitting(const ModelParams& p, const Endstate& e,
                                    Complex lambda);
/// Splitting of an already-built limit matrix (shared with the contour code).
SplittingCount splitting_of(const CMat6& a_plus, Complex lambda);

/// Mod-two index sgn q(0) q(+inf); +1 for physical endstates, 0 exactly at
/// the physicality boundary.
int stability_index(const ModelParams& p, const Endstate& e);
int stability_index_at_c(const ModelParams& p, double c_plus);

/// Transport coefficient of the neutral dispersion branch,
/// (nu- f_cat - omega c+^2 u+)/f_cat > 0.
double alpha_transport(const ModelParams& p, const Endstate& e);

struct HighFreqBound {
  double alpha_norm = 0.0;  // max Euclidean operator norm of A along the profile
  double beta_norm = 0.0;   // max spectral radius of the linearized zero-order term
  double beta_op_norm = 0.0;  // same sweep with the Euclidean operator norm
  double delta = 0.0;         // min(d, D)
  double r_hat = 0.0;         // alpha^2/delta + beta
};

/// Norm sweep over the profile mesh bounding the region that can carry
/// spectrum.  beta_norm uses the largest eigenvalue magnitude, which is what
/// the reference computations report; the operator-norm variant is kept as
/// a diagnostic.
HighFreqBound high_frequency_bound(const Profile& prof);
HighFreqBound high_frequency_bound_constant(const ModelParams& p, const Endstate& e);

// -- reduced-case cross-checks -------------------------------------------
// Quadratics assembled from the printed reduced coefficient lists (used as a
// documented cross-check against the determinant-derived path above).

struct ReducedSymbols {
  double d = 1.0, D = 1.0, k = 1.0, f_cat = 1.0, nu_minus = 1.0;
  double u_c = 0.0;           // u+ * c+
  double u_p_plus = 0.0;      // u+ * p+_+
  double omega_c = 0.0;       // omega * c+
  double omega_p_minus = 0.0; // omega * p-_+
};

struct ReducedQuadratics {
  Quadratic q1, q2;
};
ReducedQuadratics reduced_quadratics(const ReducedSymbols& s);

/// c+ = 0 reduction: q1, q2 and the eliminating combination
/// (1/d) q1 - (1/nu-) q2, whose quadratic and linear terms cancel leaving the
/// constant 2 f_cat k.
struct ReducedC0 {
  Quadratic q1, q2, combination;
};
ReducedC0 reduced_c0_combination(const ModelParams& p);

}  // namespace mtstab
