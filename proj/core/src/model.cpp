#include "mtstab/model.hpp"

#include <cmath>
#include <sstream>

namespace mtstab {

void ModelParams::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "model parameter " << name << " must be strictly positive, got " << v;
      throw std::invalid_argument(os.str());
    }
  };
  check(d, "d");
  check(D, "D");
  check(omega, "omega");
  check(nu_minus, "nu_minus");
  check(f_cat, "f_cat");
  check(u_plus, "u_plus");
  check(k, "k");
}

Vec6 Endstate::first_order_state() const {
  Vec6 y;
  y << p_plus_inf, 0.0, p_minus_inf, 0.0, c_plus, 0.0;
  return y;
}

double physicality_margin(const ModelParams& p, double c) {
  return p.nu_minus * p.f_cat - p.u_plus * p.omega * c * c;
}

bool physicality(const ModelParams& p, double c) {
  return physicality_margin(p, c) > 0.0;
}

double physical_c_max(const ModelParams& p) {
  return std::sqrt(p.nu_minus * p.f_cat / (p.u_plus * p.omega));
}

Endstate endstate_from_c(const ModelParams& p, double c_plus) {
  p.validate();
  if (c_plus < 0.0 || !std::isfinite(c_plus)) {
    throw std::invalid_argument("endstate concentration must be nonnegative");
  }
  const double den = physicality_margin(p, c_plus);
  if (!(den > 0.0)) {
    std::ostringstream os;
    os << "physicality violated: nu_minus*f_cat - u_plus*omega*c^2 = " << den
       << " <= 0 at c = " << c_plus;
    throw std::invalid_argument(os.str());
  }
  Endstate e;
  e.c_plus = c_plus;
  e.p_plus_inf = p.omega * p.k * c_plus * c_plus / den;
  e.p_minus_inf = p.k * c_plus * p.f_cat / den;
  return e;
}

double c_plus_from_total_density(const ModelParams& p, double p_total) {
  if (p_total < 0.0) throw std::invalid_argument("total density must be nonnegative");
  if (p_total == 0.0) return 0.0;
  auto total = [&](double c) {
    const Endstate e = endstate_from_c(p, c);
    return e.p_plus_inf + e.p_minus_inf;
  };
  // total density is increasing in c and blows up at the physicality boundary
  double lo = 0.0, hi = 0.5 * physical_c_max(p);
  while (total(hi) < p_total) hi = 0.5 * (hi + physical_c_max(p));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < p_total ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Mat3 matrix_A(const ModelParams& p, const StateVec& U) {
  Mat3 A = Mat3::Zero();
  A(0, 0) = -p.u_plus * U.c;
  A(0, 2) = -p.u_plus * U.p_plus;
  A(1, 1) = p.nu_minus;
  return A;
}

Mat3 matrix_B(const ModelParams& p, const StateVec& U) {
  Mat3 B = Mat3::Zero();
  B(0, 0) = -p.f_cat;
  B(0, 1) = p.omega * U.c;
  B(1, 0) = p.f_cat;
  B(1, 1) = -p.omega * U.c;
  B(2, 0) = -p.u_plus * U.c;
  B(2, 1) = p.nu_minus;
  B(2, 2) = -p.k;
  return B;
}

Mat3 matrix_C(const ModelParams& p) {
  Mat3 C = Mat3::Zero();
  C(0, 0) = p.d;
  C(1, 1) = p.d;
  C(2, 2) = p.D;
  return C;
}

Mat3 b_jacobian(const ModelParams& p, const StateVec& U) {
  Mat3 J = Mat3::Zero();
  J(0, 0) = -p.f_cat;
  J(0, 1) = p.omega * U.c;
  J(0, 2) = p.omega * U.p_minus;
  J(1, 0) = p.f_cat;
  J(1, 1) = -p.omega * U.c;
  J(1, 2) = -p.omega * U.p_minus;
  J(2, 0) = -p.u_plus * U.c;
  J(2, 1) = p.nu_minus;
  J(2, 2) = -p.k - p.u_plus * U.p_plus;
  return J;
}

Mat3 matrix_B_tilde(const ModelParams& p, const Endstate& e) {
  if (!physicality(p, e.c_plus)) {
    throw std::invalid_argument("matrix_B_tilde: endstate violates physicality");
  }
  return b_jacobian(p, e.state());
}

Mat3 linearized_zero_order(const ModelParams& p, const StateVec& U, const StateVec& Ux) {
  Mat3 Bz = b_jacobian(p, U);
  Bz(0, 0) += -p.u_plus * Ux.c;
  Bz(0, 2) += -p.u_plus * Ux.p_plus;
  return Bz;
}

Vec6 rhs_F(const ModelParams& p, const Vec6& Y) {
  const double y1 = Y[0], y2 = Y[1], y3 = Y[2], y4 = Y[3], y5 = Y[4], y6 = Y[5];
  Vec6 F;
  F[0] = y2;
  F[1] = (p.u_plus * y5 * y2 + p.u_plus * y1 * y6 + p.f_cat * y1 - p.omega * y5 * y3) / p.d;
  F[2] = y4;
  F[3] = (p.omega * y5 * y3 - p.nu_minus * y4 - p.f_cat * y1) / p.d;
  F[4] = y6;
  F[5] = (p.u_plus * y5 * y1 - p.nu_minus * y3 + p.k * y5) / p.D;
  return F;
}

Mat6 rhs_jacobian(const ModelParams& p, const Vec6& Y) {
  const double y1 = Y[0], y2 = Y[1], y3 = Y[2], y5 = Y[4], y6 = Y[5];
  Mat6 J = Mat6::Zero();
  J(0, 1) = 1.0;
  J(1, 0) = (p.u_plus * y6 + p.f_cat) / p.d;
  J(1, 1) = p.u_plus * y5 / p.d;
  J(1, 2) = -p.omega * y5 / p.d;
  J(1, 4) = (p.u_plus * y2 - p.omega * y3) / p.d;
  J(1, 5) = p.u_plus * y1 / p.d;
  J(2, 3) = 1.0;
  J(3, 0) = -p.f_cat / p.d;
  J(3, 2) = p.omega * y5 / p.d;
  J(3, 3) = -p.nu_minus / p.d;
  J(3, 4) = p.omega * y3 / p.d;
  J(4, 5) = 1.0;
  J(5, 0) = p.u_plus * y5 / p.D;
  J(5, 2) = -p.nu_minus / p.D;
  J(5, 4) = (p.u_plus * y1 + p.k) / p.D;
  return J;
}

Mat6 jacobian_at_infinity(const ModelParams& p, const Endstate& e) {
  if (!physicality(p, e.c_plus)) {
    throw std::invalid_argument("jacobian_at_infinity: endstate violates physicality");
  }
  return rhs_jacobian(p, e.first_order_state());
}

}  // namespace mtstab
