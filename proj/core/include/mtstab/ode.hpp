#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mtstab {

/// Adaptive Dormand-Prince 5(4) step control over a generic vector-space
/// state (anything with +, -, scalar multiply).  `norm` returns a max-abs
/// scalar for the error test.  Integrates from t0 to t1 in either direction.
template <class State, class Rhs, class Norm>
State integrate_rk45(Rhs&& f, State y, double t0, double t1, double rtol,
                     double atol, Norm&& norm, long max_steps = 4000000) {
  if (t0 == t1) return y;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(1e-2 * std::abs(t1 - t0), 1.0);

  State k1 = f(t, y);
  for (long step = 0; step < max_steps; ++step) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    const State k2 = f(t + h / 5.0, y + (h / 5.0) * k1);
    const State k3 = f(t + 3.0 * h / 10.0, y + (3.0 * h / 40.0) * k1 + (9.0 * h / 40.0) * k2);
    const State k4 = f(t + 4.0 * h / 5.0,
                       y + (44.0 * h / 45.0) * k1 - (56.0 * h / 15.0) * k2 + (32.0 * h / 9.0) * k3);
    const State k5 =
        f(t + 8.0 * h / 9.0, y + (19372.0 * h / 6561.0) * k1 - (25360.0 * h / 2187.0) * k2 +
                                 (64448.0 * h / 6561.0) * k3 - (212.0 * h / 729.0) * k4);
    const State k6 = f(t + h, y + (9017.0 * h / 3168.0) * k1 - (355.0 * h / 33.0) * k2 +
                                  (46732.0 * h / 5247.0) * k3 + (49.0 * h / 176.0) * k4 -
                                  (5103.0 * h / 18656.0) * k5);
    const State ynew = y + (35.0 * h / 384.0) * k1 + (500.0 * h / 1113.0) * k3 +
                       (125.0 * h / 192.0) * k4 - (2187.0 * h / 6784.0) * k5 +
                       (11.0 * h / 84.0) * k6;
    const State k7 = f(t + h, ynew);
    const State err = (71.0 * h / 57600.0) * k1 - (71.0 * h / 16695.0) * k3 +
                      (71.0 * h / 1920.0) * k4 - (17253.0 * h / 339200.0) * k5 +
                      (22.0 * h / 525.0) * k6 - (h / 40.0) * k7;

    const double scale = atol + rtol * std::max(norm(y), norm(ynew));
    const double e = norm(err) / scale;
    if (e <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // first-same-as-last
      if (t == t1) return y;
    }
    const double factor = std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.2, 5.0);
    h *= factor;
    if (std::abs(h) < 1e-14 * (1.0 + std::abs(t))) {
      throw std::runtime_error("integrate_rk45: step size underflow");
    }
  }
  throw std::runtime_error("integrate_rk45: step budget exhausted");
}

}  // namespace mtstab
