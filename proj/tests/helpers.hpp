#pragma once

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "mtstab/model.hpp"

namespace mtstab::test {

inline ModelParams random_params(std::mt19937& rng, double lo = 0.25, double hi = 4.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  ModelParams p;
  p.d = std::exp(u(rng));
  p.D = std::exp(u(rng));
  p.omega = std::exp(u(rng));
  p.nu_minus = std::exp(u(rng));
  p.f_cat = std::exp(u(rng));
  p.u_plus = std::exp(u(rng));
  p.k = std::exp(u(rng));
  return p;
}

inline double random_admissible_c(std::mt19937& rng, const ModelParams& p) {
  std::uniform_real_distribution<double> u(0.05, 0.9);
  return u(rng) * physical_c_max(p);
}

// central-difference Jacobian of U -> B(U)U
inline Mat3 fd_b_jacobian(const ModelParams& p, const StateVec& U, double h = 1e-7) {
  Mat3 J;
  for (int c = 0; c < 3; ++c) {
    Vec3 up = U.vec(), dn = U.vec();
    up[c] += h;
    dn[c] -= h;
    const StateVec Up = StateVec::from(up), Dn = StateVec::from(dn);
    const Vec3 col =
        (matrix_B(p, Up) * up - matrix_B(p, Dn) * dn) / (2.0 * h);
    J.col(c) = col;
  }
  return J;
}

// greedy min-distance matching between two complex multisets; returns the
// largest matched distance
inline double match_sets(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

// characteristic polynomial coefficients of a 6x6 matrix (descending, monic)
// by the Faddeev-LeVerrier recurrence
inline std::vector<double> char_poly(const Mat6& A) {
  std::vector<double> c(7, 0.0);
  c[0] = 1.0;
  Mat6 Mk = Mat6::Zero();
  for (int k = 1; k <= 6; ++k) {
    Mk = A * Mk + c[k - 1] * Mat6::Identity();
    c[k] = -(A * Mk).trace() / k;
  }
  return c;  // det(mu I - A) = sum c[i] mu^(6-i)
}

}  // namespace mtstab::test
