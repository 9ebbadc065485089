#include "mtstab/evolution.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace mtstab {

namespace {

// Thomas solve of (I - r*Lap) w = rhs with an optional Dirichlet row at the
// left and a reflecting (Neumann) row at the right.
struct Tridiag {
  std::vector<double> a, b, c;  // sub, diag, super

  void solve(std::vector<double>& rhs) const {
    const std::size_t n = b.size();
    std::vector<double> cp(n), dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / m;
      dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
    }
    rhs[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = dp[i] - cp[i] * rhs[i + 1];
  }
};

Tridiag diffusion_matrix(int n, double r, bool dirichlet_left) {
  // r = kappa*dt/dx^2
  Tridiag T;
  T.a.assign(n, -r);
  T.b.assign(n, 1.0 + 2.0 * r);
  T.c.assign(n, -r);
  if (dirichlet_left) {
    T.b[0] = 1.0;
    T.c[0] = 0.0;
  } else {
    // reflected ghost: u(-1) = u(1)
    T.b[0] = 1.0 + 2.0 * r;
    T.c[0] = -2.0 * r;
  }
  T.a[0] = 0.0;
  // far end reflected ghost: u(n) = u(n-2)
  T.a[n - 1] = -2.0 * r;
  T.b[n - 1] = 1.0 + 2.0 * r;
  T.c[n - 1] = 0.0;
  return T;
}

struct Fields {
  std::vector<double> pp, pm, c;
  explicit Fields(int n) : pp(n), pm(n), c(n) {}
};

// reaction + convection terms (everything except diffusion), second order.
// Centered flux averaging of d/dx(u+ c p+) telescopes to the plain central
// difference of the flux, which keeps the discretization conservative.
void explicit_rhs(const ModelParams& par, const Fields& u, double dx,
                  Fields& out) {
  const int n = static_cast<int>(u.pp.size());
  const auto mirror = [n](int j) { return j < 0 ? -j : (j > n - 1 ? 2 * (n - 1) - j : j); };
  const auto g = [&](int j) {
    j = mirror(j);
    return par.u_plus * u.c[j] * u.pp[j];
  };
  for (int j = 0; j < n; ++j) {
    const int jl = mirror(j - 1);
    const int jr = mirror(j + 1);
    const double conv_pp = -(g(j + 1) - g(j - 1)) / (2.0 * dx);
    const double conv_pm = par.nu_minus * (u.pm[jr] - u.pm[jl]) / (2.0 * dx);
    const double rescue = par.omega * u.c[j] * u.pm[j];
    const double cat = par.f_cat * u.pp[j];
    out.pp[j] = conv_pp - cat + rescue;
    out.pm[j] = conv_pm + cat - rescue;
    out.c[j] = -par.k * u.c[j] + par.nu_minus * u.pm[j] -
               par.u_plus * u.c[j] * u.pp[j];
  }
}

void apply_left_bc(const ModelParams&, const BoundaryCondition& bc, Fields& u) {
  u.pp[0] = bc.p_plus_0;
  u.pm[0] = bc.p_minus_0;
  if (bc.kind == BcKind::Dirichlet) u.c[0] = bc.c_0;
}

double max_abs(const Fields& u) {
  double m = 0.0;
  for (const auto* v : {&u.pp, &u.pm, &u.c}) {
    for (double x : *v) m = std::max(m, std::abs(x));
  }
  return m;
}

double min_val(const Fields& u) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* v : {&u.pp, &u.pm, &u.c}) {
    for (double x : *v) m = std::min(m, x);
  }
  return m;
}

void imex_step(const ModelParams& par, const BoundaryCondition& bc,
               const GridSpec& g, const Tridiag& Tp_dir, const Tridiag& Tc,
               Fields& u, Fields& scratch) {
  const int n = g.nx;
  const double dx = g.dx();
  explicit_rhs(par, u, dx, scratch);
  for (int j = 0; j < n; ++j) {
    scratch.pp[j] = u.pp[j] + g.dt * scratch.pp[j];
    scratch.pm[j] = u.pm[j] + g.dt * scratch.pm[j];
    scratch.c[j] = u.c[j] + g.dt * scratch.c[j];
  }
  // boundary rows of the implicit solves carry the boundary data
  scratch.pp[0] = bc.p_plus_0;
  scratch.pm[0] = bc.p_minus_0;
  if (bc.kind == BcKind::Dirichlet) scratch.c[0] = bc.c_0;
  Tp_dir.solve(scratch.pp);
  Tp_dir.solve(scratch.pm);
  Tc.solve(scratch.c);
  std::swap(u.pp, scratch.pp);
  std::swap(u.pm, scratch.pm);
  std::swap(u.c, scratch.c);
}

// backward-Euler step solved by Newton on the full 3n system
void implicit_step(const ModelParams& par, const BoundaryCondition& bc,
                   const GridSpec& g, Fields& u) {
  using SpMat = Eigen::SparseMatrix<double>;
  const int n = g.nx;
  const double dx = g.dx(), dt = g.dt;
  const double rp = par.d / (dx * dx), rc = par.D / (dx * dx);

  Eigen::VectorXd x(3 * n);
  for (int j = 0; j < n; ++j) {
    x[3 * j] = u.pp[j];
    x[3 * j + 1] = u.pm[j];
    x[3 * j + 2] = u.c[j];
  }
  const Eigen::VectorXd xn = x;

  auto unpack = [&](const Eigen::VectorXd& v, Fields& f) {
    for (int j = 0; j < n; ++j) {
      f.pp[j] = v[3 * j];
      f.pm[j] = v[3 * j + 1];
      f.c[j] = v[3 * j + 2];
    }
  };
  Fields f(n), rhs(n);

  auto residual = [&](const Eigen::VectorXd& v) {
    unpack(v, f);
    explicit_rhs(par, f, dx, rhs);
    Eigen::VectorXd G(3 * n);
    auto lap = [&](const std::vector<double>& w, int j, double r) {
      const double wl = (j == 0) ? w[1] : w[j - 1];
      const double wr = (j == n - 1) ? w[n - 2] : w[j + 1];
      return r * (wl - 2.0 * w[j] + wr);
    };
    for (int j = 0; j < n; ++j) {
      G[3 * j] = v[3 * j] - xn[3 * j] - dt * (rhs.pp[j] + lap(f.pp, j, rp));
      G[3 * j + 1] = v[3 * j + 1] - xn[3 * j + 1] - dt * (rhs.pm[j] + lap(f.pm, j, rp));
      G[3 * j + 2] = v[3 * j + 2] - xn[3 * j + 2] - dt * (rhs.c[j] + lap(f.c, j, rc));
    }
    G[0] = v[0] - bc.p_plus_0;
    G[1] = v[1] - bc.p_minus_0;
    if (bc.kind == BcKind::Dirichlet) {
      G[2] = v[2] - bc.c_0;
    }
    return G;
  };

  // Jacobian by structured finite differences would be slow; assemble
  // analytically instead.
  auto jacobian = [&](const Eigen::VectorXd& v) {
    unpack(v, f);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(27 * n));
    auto add = [&](int r, int c2, double val) {
      if (val != 0.0) trip.emplace_back(r, c2, val);
    };
    const double up = par.u_plus, om = par.omega, nu = par.nu_minus;
    for (int j = 0; j < n; ++j) {
      const int r0 = 3 * j;
      if (j == 0) {
        add(0, 0, 1.0);
        add(1, 1, 1.0);
        if (bc.kind == BcKind::Dirichlet) {
          add(2, 2, 1.0);
          continue;
        }
        // Neumann c-row handled with the generic stencil below (mirror)
      }
      const int jl = (j == 0) ? 1 : j - 1;
      const int jr = (j == n - 1) ? n - 2 : j + 1;
      // p+ equation (skip at j==0: Dirichlet)
      if (j > 0) {
        add(r0, r0, 1.0 + dt * (2.0 * rp + par.f_cat));
        add(r0, 3 * jl, -dt * rp);
        add(r0, 3 * jr, -dt * rp);
        // conservative convection d/dx(u+ c p+): centered flux average
        add(r0, 3 * jr, dt * 0.5 * up * f.c[jr] / dx);
        add(r0, 3 * jr + 2, dt * 0.5 * up * f.pp[jr] / dx);
        add(r0, 3 * jl, -dt * 0.5 * up * f.c[jl] / dx);
        add(r0, 3 * jl + 2, -dt * 0.5 * up * f.pp[jl] / dx);
        add(r0, r0 + 1, -dt * om * f.c[j]);
        add(r0, r0 + 2, -dt * om * f.pm[j]);
        // p- equation
        add(r0 + 1, r0 + 1, 1.0 + dt * (2.0 * rp + om * f.c[j]));
        add(r0 + 1, 3 * jl + 1, -dt * rp);
        add(r0 + 1, 3 * jr + 1, -dt * rp);
        add(r0 + 1, 3 * jr + 1, -dt * nu / (2.0 * dx));
        add(r0 + 1, 3 * jl + 1, dt * nu / (2.0 * dx));
        add(r0 + 1, r0, -dt * par.f_cat);
        add(r0 + 1, r0 + 2, dt * om * f.pm[j]);
      }
      // c equation (also at j==0 when Neumann)
      if (j > 0 || bc.kind == BcKind::Neumann) {
        add(r0 + 2, r0 + 2, 1.0 + dt * (2.0 * rc + par.k + up * f.pp[j]));
        add(r0 + 2, 3 * jl + 2, -dt * rc);
        add(r0 + 2, 3 * jr + 2, -dt * rc);
        add(r0 + 2, r0 + 1, -dt * nu);
        add(r0 + 2, r0, dt * up * f.c[j]);
      }
    }
    SpMat J(3 * n, 3 * n);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  };

  Eigen::SparseLU<SpMat> lu;
  for (int it = 0; it < 25; ++it) {
    const Eigen::VectorXd G = residual(x);
    if (G.lpNorm<Eigen::Infinity>() < 1e-11) break;
    lu.compute(jacobian(x));
    if (lu.info() != Eigen::Success) {
      throw std::runtime_error("implicit step: singular Jacobian");
    }
    x -= lu.solve(G);
  }
  unpack(x, u);
}

}  // namespace

void GridSpec::validate() const {
  if (!(x_far > 0.0)) throw std::invalid_argument("grid: x_far must be positive");
  if (nx < 50) throw std::invalid_argument("grid: nx must be at least 50");
  if (!(dt > 0.0)) throw std::invalid_argument("grid: dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("grid: t_end must be nonnegative");
}

Trajectory evolve(const ModelParams& par, const BoundaryCondition& bc,
                  const InitialData& initial, const GridSpec& grid,
                  std::vector<double> snapshot_times) {
  par.validate();
  grid.validate();
  const int n = grid.nx;
  const double dx = grid.dx();

  if (snapshot_times.empty()) {
    for (int i = 0; i <= 100; ++i) snapshot_times.push_back(grid.t_end * i / 100.0);
  }
  std::sort(snapshot_times.begin(), snapshot_times.end());

  Fields u(n), scratch(n);
  for (int j = 0; j < n; ++j) {
    const StateVec s = initial(j * dx);
    if (!std::isfinite(s.p_plus) || !std::isfinite(s.p_minus) || !std::isfinite(s.c)) {
      throw std::invalid_argument("evolve: initial data not finite");
    }
    u.pp[j] = s.p_plus;
    u.pm[j] = s.p_minus;
    u.c[j] = s.c;
  }

  Trajectory traj;
  traj.params = par;
  traj.bc = bc;
  traj.grid = grid;
  traj.min_component = min_val(u);

  auto snapshot = [&](double t) {
    std::vector<StateVec> snap(n);
    for (int j = 0; j < n; ++j) snap[j] = StateVec{u.pp[j], u.pm[j], u.c[j]};
    traj.states.push_back(std::move(snap));
    traj.times.push_back(t);
  };

  std::size_t next_snap = 0;
  while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= 0.0) {
    snapshot(0.0);
    ++next_snap;
  }

  const double rp = par.d * grid.dt / (dx * dx);
  const double rc = par.D * grid.dt / (dx * dx);
  const Tridiag Tp = diffusion_matrix(n, rp, true);
  const Tridiag Tc = diffusion_matrix(n, rc, bc.kind == BcKind::Dirichlet);

  const long n_steps = static_cast<long>(std::ceil(grid.t_end / grid.dt - 1e-12));
  for (long step = 0; step < n_steps; ++step) {
    if (grid.scheme == TimeScheme::IMEX) {
      imex_step(par, bc, grid, Tp, Tc, u, scratch);
    } else {
      implicit_step(par, bc, grid, u);
      apply_left_bc(par, bc, u);
    }
    const double t = (step + 1) * grid.dt;
    if (max_abs(u) > 1e6) {
      std::ostringstream os;
      os << "evolve: blow-up detected at t = " << t << "; retry with dt = "
         << grid.dt / 2;
      throw StepSizeError(os.str(), grid.dt / 2);
    }
    traj.min_component = std::min(traj.min_component, min_val(u));
    while (next_snap < snapshot_times.size() &&
           t + 1e-9 * grid.dt >= snapshot_times[next_snap]) {
      snapshot(t);
      ++next_snap;
    }
  }
  while (next_snap < snapshot_times.size()) {
    snapshot(grid.t_end);
    ++next_snap;
  }

  // stationarity: max-norm change below 1e-6 across a 10-snapshot window
  if (traj.states.size() >= 11) {
    bool stat = true;
    for (std::size_t s = traj.states.size() - 10; s < traj.states.size() && stat; ++s) {
      double diff = 0.0;
      for (int j = 0; j < n; ++j) {
        diff = std::max(diff, std::abs(traj.states[s][j].p_plus - traj.states[s - 1][j].p_plus));
        diff = std::max(diff, std::abs(traj.states[s][j].p_minus - traj.states[s - 1][j].p_minus));
        diff = std::max(diff, std::abs(traj.states[s][j].c - traj.states[s - 1][j].c));
      }
      if (diff >= 1e-6) stat = false;
    }
    traj.stationary = stat;
  }

  double mass = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    mass += w * (u.pp[j] + u.pm[j]) * dx;
  }
  traj.total_density_final = mass;
  return traj;
}

std::vector<double> distance_to_profile(const Trajectory& traj, const Profile& prof) {
  const auto& tp = traj.params;
  const auto& pp = prof.params;
  if (tp.d != pp.d || tp.D != pp.D || tp.omega != pp.omega ||
      tp.nu_minus != pp.nu_minus || tp.f_cat != pp.f_cat ||
      tp.u_plus != pp.u_plus || tp.k != pp.k) {
    throw std::invalid_argument("distance_to_profile: incompatible model parameters");
  }
  const double x_hi = std::min(prof.domain_length(), 0.8 * traj.grid.x_far);
  const ProfileInterpolant interp(prof);
  const double dx = traj.grid.dx();
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& snap : traj.states) {
    double dist = 0.0;
    for (int j = 0; j < traj.grid.nx; ++j) {
      const double x = j * dx;
      if (x > x_hi) break;
      const Vec6 y = interp(x);
      dist = std::max(dist, std::abs(snap[j].p_plus - y[0]));
      dist = std::max(dist, std::abs(snap[j].p_minus - y[2]));
      dist = std::max(dist, std::abs(snap[j].c - y[4]));
    }
    out.push_back(dist);
  }
  return out;
}

double limiting_total_density(const InitialData& initial, double x_far) {
  const StateVec s = initial(x_far);
  return s.p_plus + s.p_minus;
}

}  // namespace mtstab
