#include "mtstab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtstab/ode.hpp"

namespace mtstab {

namespace {
constexpr double kLogFloor = -700.0;  // below this, z is identically zero
}

SlowSolution::SlowSolution(const ModelParams& p, const BoundaryCondition& bc,
                           SlowCase kind, double c_inf, double x_max)
    : params_(p), bc_(bc), kind_(kind), c_inf_(c_inf), x_max_(x_max) {
  p.validate();
  kappa_ = std::sqrt(p.k / p.D);

  if (kind_ == SlowCase::I) {
    c_inf_ = 0.0;
    alpha_ = 0.0;
    if (bc.kind == BcKind::Neumann) {
      throw TrivialSolutionError(
          "slow problem, case c(+inf)=0 with flux data: the bounded concentration "
          "solution is c == 0, which forces p- == 0 and then p+ == 0");
    }
    if (!(bc.c_0 > 0.0)) {
      throw std::invalid_argument("slow_solve: case I needs c(0) > 0");
    }
    c0_ = bc.c_0;
  } else {
    if (!(c_inf_ > 0.0)) {
      throw std::invalid_argument("slow_solve: case II needs c(+inf) > 0");
    }
    if (!physicality(p, c_inf_)) {
      std::ostringstream os;
      os << "slow_solve: physicality fails at c(+inf): margin = "
         << physicality_margin(p, c_inf_);
      throw std::invalid_argument(os.str());
    }
    alpha_ = -p.k * c_inf_;
    c0_ = (bc.kind == BcKind::Dirichlet) ? bc.c_0 : c_inf_;
    if (bc.kind == BcKind::Dirichlet && !(bc.c_0 > 0.0)) {
      throw std::invalid_argument("slow_solve: case II needs c(0) > 0");
    }
  }

  // z' = (omega c / nu - f/(u+ c)) z - omega c alpha / nu, integrated in the
  // stretched variable s where c is linear: c(s) = c_inf + (c0 - c_inf) s
  log_form_ = (kind_ == SlowCase::I);
  const int n = 4001;
  xs_.resize(n);
  w_.resize(n);
  const double z0 = p.u_plus * c0_ * bc.p_plus_0;
  double w = log_form_ ? (z0 > 0.0 ? std::log(z0) : kLogFloor) : z0;
  xs_[0] = 0.0;
  w_[0] = w;

  const auto c_of_s = [&](double s) { return c_inf_ + (c0_ - c_inf_) * s; };
  const auto growth = [&](double cc) {
    return p.omega * cc / p.nu_minus - p.f_cat / (p.u_plus * cc);
  };
  const auto norm = [](double v) { return std::abs(v); };

  // stretched-variable integration regularizes the layer-free superexponential
  // range; once s underflows toward the rounding floor the coefficient is
  // numerically frozen and the equation is integrated in x directly
  const double s_switch = 1e-6;
  for (int i = 1; i < n; ++i) {
    const double x0 = x_max_ * (i - 1) / (n - 1);
    const double x1 = x_max_ * i / (n - 1);
    const double s0 = std::exp(-kappa_ * x0);
    const double s1 = std::exp(-kappa_ * x1);
    if (log_form_) {
      if (w <= kLogFloor) {
        w = kLogFloor;
      } else if (s0 >= s_switch) {
        const auto rhs = [&](double s, double /*lw*/) {
          return -growth(c_of_s(s)) / (kappa_ * s);
        };
        w = integrate_rk45(rhs, w, s0, s1, 1e-10, 1e-12, norm);
        w = std::max(w, kLogFloor);
      } else {
        const auto rhs = [&](double x, double /*lw*/) {
          return growth(c_of_s(std::exp(-kappa_ * x)));
        };
        w = std::max(integrate_rk45(rhs, w, x0, x1, 1e-10, 1e-12, norm), kLogFloor);
      }
    } else {
      if (s0 >= s_switch) {
        const auto rhs = [&](double s, double z) {
          const double cc = c_of_s(s);
          return -(growth(cc) * z - p.omega * cc * alpha_ / p.nu_minus) /
                 (kappa_ * s);
        };
        w = integrate_rk45(rhs, w, s0, s1, 1e-10, 1e-12, norm);
      } else {
        const auto rhs = [&](double x, double z) {
          const double cc = c_of_s(std::exp(-kappa_ * x));
          return growth(cc) * z - p.omega * cc * alpha_ / p.nu_minus;
        };
        w = integrate_rk45(rhs, w, x0, x1, 1e-10, 1e-12, norm);
      }
    }
    xs_[i] = x1;
    w_[i] = w;
  }

  dw_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double cc = c(xs_[i]);
    if (log_form_) {
      dw_[i] = (w_[i] <= kLogFloor) ? 0.0 : growth(cc);
    } else {
      dw_[i] = growth(cc) * w_[i] - p.omega * cc * alpha_ / p.nu_minus;
    }
  }
}

double SlowSolution::c(double x) const {
  return c_inf_ + (c0_ - c_inf_) * std::exp(-kappa_ * x);
}

double SlowSolution::w_at(double x) const {
  if (x <= 0.0) return w_[0];
  if (x >= x_max_) return w_.back();
  const double h = x_max_ / static_cast<double>(xs_.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(x / h), xs_.size() - 2);
  if (log_form_ && (w_[i] <= kLogFloor || w_[i + 1] <= kLogFloor)) {
    return kLogFloor;
  }
  const double t = (x - xs_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * w_[i] + (t3 - 2 * t2 + t) * h * dw_[i] +
         (-2 * t3 + 3 * t2) * w_[i + 1] + (t3 - t2) * h * dw_[i + 1];
}

double SlowSolution::z_of_x(double x) const {
  const double w = w_at(x);
  if (log_form_) return w <= kLogFloor ? 0.0 : std::exp(w);
  return w;
}

double SlowSolution::p_plus(double x) const {
  const double cc = c(x);
  if (log_form_) {
    // evaluate z/(u+ c) in log form to survive the superexponential tail
    const double w = w_at(x);
    if (w <= kLogFloor) return 0.0;
    const double lp = w - std::log(params_.u_plus * cc);
    return lp <= kLogFloor ? 0.0 : std::exp(lp);
  }
  return z_of_x(x) / (params_.u_plus * cc);
}

double SlowSolution::p_minus(double x) const {
  return (z_of_x(x) - alpha_) / params_.nu_minus;
}

StateVec SlowSolution::state(double x) const {
  return StateVec{p_plus(x), p_minus(x), c(x)};
}

StateVec SlowSolution::limit_state() const {
  if (kind_ == SlowCase::I) return StateVec{0.0, 0.0, 0.0};
  return endstate_from_c(params_, c_inf_).state();
}

SlowSolution slow_solve(const ModelParams& p, const BoundaryCondition& bc,
                        SlowCase kind, double c_inf, double x_max) {
  return SlowSolution(p, bc, kind, c_inf, x_max);
}

StateVec FastLayer::at_stretched(double x_tilde) const {
  return StateVec{p_plus_const,
                  p_minus_outer + p_minus_jump * std::exp(-nu_minus * x_tilde),
                  c_const};
}

FastLayer fast_layer_solve(const ModelParams& p, const StateVec& outer_at_0,
                           const BoundaryCondition& bc) {
  FastLayer layer;
  layer.nu_minus = p.nu_minus;
  layer.d = p.d;
  layer.p_plus_const = outer_at_0.p_plus;
  layer.c_const = outer_at_0.c;
  layer.p_minus_outer = outer_at_0.p_minus;
  layer.p_minus_jump = bc.p_minus_0 - outer_at_0.p_minus;
  return layer;
}

StateVec CompositeSolution::at(double x) const {
  StateVec s = slow_.state(x);
  s.p_minus += fast_.p_minus_jump * std::exp(-fast_.nu_minus * x / fast_.d);
  return s;
}

CompositeSolution composite(const ModelParams& p, const BoundaryCondition& bc,
                            SlowCase kind, double c_inf, double x_max) {
  SlowSolution slow = slow_solve(p, bc, kind, c_inf, x_max);
  const FastLayer fast = fast_layer_solve(p, slow.state(0.0), bc);
  return CompositeSolution(std::move(slow), fast);
}

}  // namespace mtstab
