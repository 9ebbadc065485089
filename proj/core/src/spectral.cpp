#include "mtstab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace mtstab {

namespace {

// dense polynomial in one variable, ascending coefficients
struct Poly {
  std::vector<double> c;

  static Poly constant(double v) { return Poly{{v}}; }
  static Poly linear(double c0, double c1) { return Poly{{c0, c1}}; }
  static Poly quadratic(double c0, double c1, double c2) { return Poly{{c0, c1, c2}}; }

  Poly operator+(const Poly& o) const {
    Poly r;
    r.c.resize(std::max(c.size(), o.c.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r;
    r.c.resize(std::max(c.size(), o.c.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    }
    return r;
  }
};

Poly det3(const std::array<std::array<Poly, 3>, 3>& m) {
  auto minor2 = [&](int r0, int r1, int c0, int c1) {
    return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
  };
  return m[0][0] * minor2(1, 2, 1, 2) - m[0][1] * minor2(1, 2, 0, 2) +
         m[0][2] * minor2(1, 2, 0, 1);
}

SplittingCount count_roots(const Eigen::Matrix<Complex, 6, 1>& mus, Complex lambda) {
  constexpr double band = 1e-9;
  SplittingCount s;
  s.lambda = lambda;
  for (int i = 0; i < 6; ++i) {
    const double re = mus[i].real();
    if (re < -band) {
      ++s.n_stable;
    } else if (re > band) {
      ++s.n_unstable;
    } else {
      ++s.n_neutral;
    }
  }
  return s;
}

double spectral_radius(const Mat3& m) {
  return Eigen::EigenSolver<Mat3>(m, false).eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const Mat3& m) {
  return Eigen::JacobiSVD<Mat3>(m).singularValues()(0);
}

HighFreqBound bound_from_states(const ModelParams& p,
                                const std::vector<StateVec>& states,
                                const std::vector<StateVec>& slopes) {
  HighFreqBound hf;
  hf.delta = std::min(p.d, p.D);
  for (std::size_t i = 0; i < states.size(); ++i) {
    hf.alpha_norm = std::max(hf.alpha_norm, operator_norm(matrix_A(p, states[i])));
    const Mat3 Bz = linearized_zero_order(p, states[i], slopes[i]);
    hf.beta_norm = std::max(hf.beta_norm, spectral_radius(Bz));
    hf.beta_op_norm = std::max(hf.beta_op_norm, operator_norm(Bz));
  }
  hf.r_hat = hf.alpha_norm * hf.alpha_norm / hf.delta + hf.beta_norm;
  return hf;
}

}  // namespace

Complex QuinticQ::eval(Complex mu) const {
  Complex v = coeffs[0];
  for (int i = 1; i < 6; ++i) v = v * mu + coeffs[i];
  return v;
}

std::array<Complex, 5> QuinticQ::roots() const {
  Eigen::Matrix<double, 5, 5> comp = Eigen::Matrix<double, 5, 5>::Zero();
  for (int i = 0; i < 4; ++i) comp(i + 1, i) = 1.0;
  for (int i = 0; i < 5; ++i) comp(i, 4) = -coeffs[5 - i] / coeffs[0];
  const auto ev = Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>>(comp, false).eigenvalues();
  std::array<Complex, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = ev[i];
  return out;
}

QuinticQ quintic_q(const ModelParams& p, const Endstate& e) {
  const Mat3 A = matrix_A(p, e.state());
  const Mat3 Bt = matrix_B_tilde(p, e);
  const Mat3 C = matrix_C(p);
  std::array<std::array<Poly, 3>, 3> m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      m[r][c] = Poly::quadratic(Bt(r, c), A(r, c), C(r, c));
    }
  }
  Poly det = det3(m);
  det.c.resize(7, 0.0);
  double scale = 0.0;
  for (double v : det.c) scale = std::max(scale, std::abs(v));
  if (std::abs(det.c[0]) > 1e-10 * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "quintic_q: determinant constant term " << det.c[0]
       << " does not vanish; division by mu is inconsistent";
    throw std::runtime_error(os.str());
  }
  QuinticQ q;
  for (int i = 0; i < 6; ++i) q.coeffs[i] = det.c[6 - i];
  return q;
}

ZeroRootCheck zero_root_check(const ModelParams& p, const Endstate& e) {
  const double q0 = p.k * physicality_margin(p, e.c_plus);
  return ZeroRootCheck{q0 != 0.0, q0};
}

ImaginaryRootCheck imaginary_root_check(const ModelParams& p, const Endstate& e) {
  const QuinticQ q = quintic_q(p, e);
  // q(i xi) = i xi q1(xi^2) + q2(xi^2)
  ImaginaryRootCheck out;
  out.q1 = Quadratic{q.coeffs[0], -q.coeffs[2], q.coeffs[4]};
  out.q2 = Quadratic{q.coeffs[1], -q.coeffs[3], q.coeffs[5]};
  const Quadratic& q1 = out.q1;
  const Quadratic& q2 = out.q2;

  // Sylvester resultant of two quadratics
  out.resultant = std::pow(q1.a2 * q2.a0 - q2.a2 * q1.a0, 2) -
                  (q1.a2 * q2.a1 - q2.a2 * q1.a1) * (q1.a1 * q2.a0 - q2.a1 * q1.a0);

  double scale = 0.0;
  for (double v : {q1.a2, q1.a1, q1.a0, q2.a2, q2.a1, q2.a0}) {
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-12 * std::max(1.0, scale * scale);

  // eliminate the quadratic term: r(x) = a2' q1 - a2 q2 is (at most) linear
  const double rb = q2.a2 * q1.a1 - q1.a2 * q2.a1;
  const double rc = q2.a2 * q1.a0 - q1.a2 * q2.a0;
  if (std::abs(rb) <= tol && std::abs(rc) <= tol) {
    // proportional quadratics: common roots are the roots of q1
    out.resultant_fallback = true;
    const double disc = q1.a1 * q1.a1 - 4.0 * q1.a2 * q1.a0;
    if (disc >= 0.0 && q1.a2 != 0.0) {
      const double sq = std::sqrt(disc);
      for (double r : {(-q1.a1 + sq) / (2.0 * q1.a2), (-q1.a1 - sq) / (2.0 * q1.a2)}) {
        if (r > 0.0) {
          out.common_positive_root = true;
          out.root_x = r;
        }
      }
    }
    return out;
  }
  if (std::abs(rb) <= tol) return out;  // r is a nonzero constant: no common root
  const double x_star = -rc / rb;
  if (x_star > 0.0 && std::abs(q1.eval(x_star)) <= 1e-9 * std::max(1.0, scale * (1.0 + x_star * x_star))) {
    out.common_positive_root = true;
    out.root_x = x_star;
  }
  return out;
}

CMat3 dispersion_matrix(const ModelParams& p, const Endstate& e, double xi) {
  const Complex i_xi(0.0, xi);
  return matrix_B_tilde(p, e).cast<Complex>() +
         i_xi * matrix_A(p, e.state()).cast<Complex>() -
         (xi * xi) * matrix_C(p).cast<Complex>();
}

std::vector<DispersionSample> dispersion_curves(const ModelParams& p, const Endstate& e,
                                                const std::vector<double>& xi_grid) {
  std::vector<DispersionSample> out;
  out.reserve(xi_grid.size());
  std::array<Complex, 3> prev{};
  for (std::size_t n = 0; n < xi_grid.size(); ++n) {
    const double xi = xi_grid[n];
    Eigen::ComplexEigenSolver<CMat3> es(dispersion_matrix(p, e, xi), false);
    std::array<Complex, 3> lam{es.eigenvalues()[0], es.eigenvalues()[1],
                               es.eigenvalues()[2]};
    if (n == 0) {
      std::sort(lam.begin(), lam.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
    } else {
      // nearest-neighbor continuation: best of the six assignments
      std::array<int, 3> idx{0, 1, 2}, best{0, 1, 2};
      double best_cost = std::numeric_limits<double>::infinity();
      std::sort(idx.begin(), idx.end());
      do {
        double cost = 0.0;
        for (int j = 0; j < 3; ++j) cost += std::abs(lam[idx[j]] - prev[j]);
        if (cost < best_cost) {
          best_cost = cost;
          best = idx;
        }
      } while (std::next_permutation(idx.begin(), idx.end()));
      lam = {lam[best[0]], lam[best[1]], lam[best[2]]};
    }
    prev = lam;
    out.push_back(DispersionSample{xi, lam});
  }
  return out;
}

GooddispResult check_gooddisp(const ModelParams& p, const Endstate& e, double xi_max,
                              int n_samples) {
  p.validate();
  const HighFreqBound hf = high_frequency_bound_constant(p, e);
  const double xi_decay = std::sqrt(hf.r_hat / hf.delta);
  if (xi_max <= 0.0) {
    xi_max = std::max(10.0, 2.0 * xi_decay);
  } else if (xi_max < xi_decay) {
    std::ostringstream os;
    os << "check_gooddisp: xi_max " << xi_max << " below the decay bound " << xi_decay;
    throw std::invalid_argument(os.str());
  }
  if (n_samples < 3) throw std::invalid_argument("check_gooddisp: need >= 3 samples");

  constexpr double tol_zero = 1e-10;
  const double h = 2.0 * xi_max / (n_samples - 1);
  GooddispResult res;
  res.xi_max = xi_max;
  res.n_samples = n_samples;
  res.holds = true;
  res.max_re = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double xi = -xi_max + i * h;
    Eigen::ComplexEigenSolver<CMat3> es(dispersion_matrix(p, e, xi), false);
    for (int j = 0; j < 3; ++j) {
      const double re = es.eigenvalues()[j].real();
      res.max_re = std::max(res.max_re, re);
      const bool bad = re > tol_zero || (re > -tol_zero && std::abs(xi) > 1.5 * h);
      if (bad && res.holds) {
        res.holds = false;
        res.violated_at = xi;
      }
    }
  }
  return res;
}

CMat6 evans_matrix_at_infinity(const ModelParams& p, const Endstate& e, Complex lambda) {
  CMat6 A = jacobian_at_infinity(p, e).cast<Complex>();
  A(1, 0) += lambda / p.d;
  A(3, 2) += lambda / p.d;
  A(5, 4) += lambda / p.D;
  return A;
}

std::array<Complex, 6> indicial_roots(const ModelParams& p, const Endstate& e,
                                      Complex lambda) {
  Eigen::ComplexEigenSolver<CMat6> es(evans_matrix_at_infinity(p, e, lambda), false);
  std::array<Complex, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

SplittingCount splitting_of(const CMat6& a_plus, Complex lambda) {
  Eigen::ComplexEigenSolver<CMat6> es(a_plus, false);
  return count_roots(es.eigenvalues(), lambda);
}

SplittingCount consistent_splitting(const ModelParams& p, const Endstate& e,
                                    Complex lambda) {
  return splitting_of(evans_matrix_at_infinity(p, e, lambda), lambda);
}

int stability_index_at_c(const ModelParams& p, double c_plus) {
  p.validate();
  const double q0 = p.k * physicality_margin(p, c_plus);
  const double lead = p.D * p.d * p.d;
  const double prod = q0 * lead;
  return (prod > 0.0) - (prod < 0.0);
}

int stability_index(const ModelParams& p, const Endstate& e) {
  return stability_index_at_c(p, e.c_plus);
}

double alpha_transport(const ModelParams& p, const Endstate& e) {
  const double margin = physicality_margin(p, e.c_plus);
  if (!(margin > 0.0)) {
    throw std::invalid_argument("alpha_transport: endstate violates physicality");
  }
  return margin / p.f_cat;
}

HighFreqBound high_frequency_bound(const Profile& prof) {
  std::vector<StateVec> states(prof.size()), slopes(prof.size());
  for (std::size_t i = 0; i < prof.size(); ++i) {
    states[i] = prof.state_at_node(i);
    slopes[i] = prof.state_slope_at_node(i);
  }
  return bound_from_states(prof.params, states, slopes);
}

HighFreqBound high_frequency_bound_constant(const ModelParams& p, const Endstate& e) {
  return bound_from_states(p, {e.state()}, {StateVec{}});
}

ReducedQuadratics reduced_quadratics(const ReducedSymbols& s) {
  ReducedQuadratics r;
  r.q1.a2 = s.D * s.d * s.d;
  r.q1.a1 = s.d * s.d * s.u_p_plus + s.d * s.d * s.k + s.f_cat * s.d * s.D +
            s.u_c * s.nu_minus * s.D + s.d * s.omega_c * s.D;
  r.q1.a0 = s.d * s.omega_c * s.k - s.d * s.omega_p_minus * s.nu_minus +
            s.u_c * s.nu_minus * s.k + s.d * s.omega_c * s.u_p_plus +
            s.f_cat * s.d * s.k + s.f_cat * s.d * s.u_p_plus -
            s.u_c * s.d * s.omega_p_minus;
  r.q2.a2 = s.D * s.d * s.nu_minus - s.d * s.D * s.u_c;
  r.q2.a1 = -(-s.f_cat * s.nu_minus * s.D + s.u_c * s.omega_c * s.D +
              s.u_c * s.d * s.k - s.d * s.nu_minus * s.u_p_plus -
              s.d * s.nu_minus * s.k);
  r.q2.a0 = -s.f_cat * s.nu_minus * s.k - s.u_c * s.omega_c * s.k;
  return r;
}

ReducedC0 reduced_c0_combination(const ModelParams& p) {
  p.validate();
  ReducedSymbols s;
  s.d = p.d;
  s.D = p.D;
  s.k = p.k;
  s.f_cat = p.f_cat;
  s.nu_minus = p.nu_minus;
  const ReducedQuadratics rq = reduced_quadratics(s);
  ReducedC0 out;
  out.q1 = rq.q1;
  out.q2 = rq.q2;
  out.combination.a2 = rq.q1.a2 / p.d - rq.q2.a2 / p.nu_minus;
  out.combination.a1 = rq.q1.a1 / p.d - rq.q2.a1 / p.nu_minus;
  out.combination.a0 = rq.q1.a0 / p.d - rq.q2.a0 / p.nu_minus;
  return out;
}

}  // namespace mtstab
