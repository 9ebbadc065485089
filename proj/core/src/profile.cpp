#include "mtstab/profile.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace mtstab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

Vec3 bc_residual(const BoundaryCondition& bc, const Vec6& y0) {
  Vec3 r;
  r[0] = y0[0] - bc.p_plus_0;
  r[1] = y0[2] - bc.p_minus_0;
  r[2] = (bc.kind == BcKind::Dirichlet) ? y0[4] - bc.c_0 : y0[5];
  return r;
}

// rows of d(bc_residual)/dY0
void bc_jacobian_triplets(const BoundaryCondition& bc, int row0, int col0,
                          std::vector<Triplet>& trip) {
  trip.emplace_back(row0 + 0, col0 + 0, 1.0);
  trip.emplace_back(row0 + 1, col0 + 2, 1.0);
  trip.emplace_back(row0 + 2, col0 + ((bc.kind == BcKind::Dirichlet) ? 4 : 5), 1.0);
}

struct CollocationSystem {
  const ModelParams& p;
  const BoundaryCondition& bc;
  const Endstate& e;
  const ProjectiveBC& proj;
  const std::vector<double>& mesh;

  std::size_t n() const { return mesh.size(); }
  std::size_t unknowns() const { return 6 * n(); }

  // residual vector: 3 left bc rows, 6 rows per interval (scaled by 1/h),
  // 3 projective rows at M
  Eigen::VectorXd residual(const std::vector<Vec6>& Y) const {
    const std::size_t N = n();
    Eigen::VectorXd G(unknowns());
    G.segment<3>(0) = bc_residual(bc, Y[0]);
    const Vec6 yplus = e.first_order_state();
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double h = mesh[i + 1] - mesh[i];
      const Vec6 fi = rhs_F(p, Y[i]);
      const Vec6 fj = rhs_F(p, Y[i + 1]);
      const Vec6 mid = 0.5 * (Y[i] + Y[i + 1]) + (h / 8.0) * (fi - fj);
      const Vec6 fm = rhs_F(p, mid);
      G.segment<6>(3 + 6 * i) = (Y[i + 1] - Y[i]) / h - (fi + 4.0 * fm + fj) / 6.0;
    }
    G.segment<3>(3 + 6 * (N - 1)) = proj.l_matrix * (Y[N - 1] - yplus);
    return G;
  }

  SpMat jacobian(const std::vector<Vec6>& Y) const {
    const std::size_t N = n();
    std::vector<Triplet> trip;
    trip.reserve(72 * N + 24);
    bc_jacobian_triplets(bc, 0, 0, trip);
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double h = mesh[i + 1] - mesh[i];
      const Vec6 fi = rhs_F(p, Y[i]);
      const Vec6 fj = rhs_F(p, Y[i + 1]);
      const Mat6 Ji = rhs_jacobian(p, Y[i]);
      const Mat6 Jj = rhs_jacobian(p, Y[i + 1]);
      const Vec6 mid = 0.5 * (Y[i] + Y[i + 1]) + (h / 8.0) * (fi - fj);
      const Mat6 Jm = rhs_jacobian(p, mid);
      const Mat6 I = Mat6::Identity();
      const Mat6 dGi =
          -I / h - (Ji + 4.0 * Jm * (0.5 * I + (h / 8.0) * Ji)) / 6.0;
      const Mat6 dGj =
          I / h - (Jj + 4.0 * Jm * (0.5 * I - (h / 8.0) * Jj)) / 6.0;
      const int r0 = static_cast<int>(3 + 6 * i);
      for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
          if (dGi(r, c) != 0.0) trip.emplace_back(r0 + r, 6 * i + c, dGi(r, c));
          if (dGj(r, c) != 0.0) trip.emplace_back(r0 + r, 6 * (i + 1) + c, dGj(r, c));
        }
      }
    }
    const int rb = static_cast<int>(3 + 6 * (N - 1));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 6; ++c) {
        trip.emplace_back(rb + r, static_cast<int>(6 * (N - 1)) + c,
                          proj.l_matrix(r, c));
      }
    }
    SpMat J(unknowns(), unknowns());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }
};

// damped Newton; returns final max-norm residual, throws SolverFailure on
// nonconvergence
double newton_solve(const CollocationSystem& sys, std::vector<Vec6>& Y,
                    const SolveOptions& opts) {
  const std::size_t N = sys.n();
  Eigen::VectorXd G = sys.residual(Y);
  double gnorm = G.lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<SpMat> lu;
  for (int it = 0; it < opts.max_newton; ++it) {
    SpMat J = sys.jacobian(Y);
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      throw SolverFailure("Newton: singular collocation Jacobian", gnorm);
    }
    Eigen::VectorXd delta = lu.solve(-G);
    double ynorm = 0.0;
    for (const auto& y : Y) ynorm = std::max(ynorm, y.lpNorm<Eigen::Infinity>());
    const double dnorm = delta.lpNorm<Eigen::Infinity>();

    double step = 1.0;
    std::vector<Vec6> Ytrial(N);
    Eigen::VectorXd Gtrial;
    double gtrial = 0.0;
    bool accepted = false;
    for (int half = 0; half < 8; ++half) {
      for (std::size_t i = 0; i < N; ++i) {
        Ytrial[i] = Y[i] + step * delta.segment<6>(6 * i);
      }
      Gtrial = sys.residual(Ytrial);
      gtrial = Gtrial.lpNorm<Eigen::Infinity>();
      if (gtrial < gnorm * (1.0 - 0.25 * step) || gtrial < opts.newton_tol) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw SolverFailure("Newton: line search stalled", gnorm);
    Y.swap(Ytrial);
    G.swap(Gtrial);
    gnorm = gtrial;
    if (step == 1.0 && dnorm <= opts.newton_tol * (1.0 + ynorm)) return gnorm;
    if (gnorm <= 1e-14 * (1.0 + ynorm)) return gnorm;
  }
  if (gnorm < 1e-9) return gnorm;  // converged in residual if not in step
  throw SolverFailure("Newton: no convergence", gnorm);
}

Vec6 hermite_eval(double x, double x0, double x1, const Vec6& y0, const Vec6& f0,
                  const Vec6& y1, const Vec6& f1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

Vec6 hermite_deriv(double x, double x0, double x1, const Vec6& y0, const Vec6& f0,
                   const Vec6& y1, const Vec6& f1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double g00 = (6 * t2 - 6 * t) / h;
  const double g10 = 3 * t2 - 4 * t + 1;
  const double g01 = (-6 * t2 + 6 * t) / h;
  const double g11 = 3 * t2 - 2 * t;
  return g00 * y0 + g10 * f0 + g01 * y1 + g11 * f1;
}

// max collocation defect |S' - F(S)| sampled inside one interval
double interval_defect(const ModelParams& p, double x0, double x1, const Vec6& y0,
                       const Vec6& f0, const Vec6& y1, const Vec6& f1) {
  double worst = 0.0;
  for (double t : {0.25, 0.75}) {
    const double x = x0 + t * (x1 - x0);
    const Vec6 s = hermite_eval(x, x0, x1, y0, f0, y1, f1);
    const Vec6 sp = hermite_deriv(x, x0, x1, y0, f0, y1, f1);
    worst = std::max(worst, (sp - rhs_F(p, s)).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

std::vector<double> graded_mesh(double M, std::size_t n, double gamma) {
  std::vector<double> xs(n);
  const double den = std::expm1(gamma);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    xs[i] = M * std::expm1(gamma * s) / den;
  }
  xs.front() = 0.0;
  xs.back() = M;
  return xs;
}

std::vector<Vec6> initial_guess(const BoundaryCondition& bc, const Endstate& e,
                                const std::vector<double>& mesh) {
  const double M = mesh.back();
  Vec6 y0;
  const double c0 = (bc.kind == BcKind::Dirichlet) ? bc.c_0 : e.c_plus;
  y0 << bc.p_plus_0, (e.p_plus_inf - bc.p_plus_0) / M, bc.p_minus_0,
      (e.p_minus_inf - bc.p_minus_0) / M, c0, (e.c_plus - c0) / M;
  const Vec6 yp = e.first_order_state();
  std::vector<Vec6> Y(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double t = mesh[i] / M;
    Y[i] = (1.0 - t) * y0 + t * yp;
  }
  return Y;
}

double truncation_error_of(const Endstate& e, const Vec6& yM) {
  const Vec3 u(yM[0], yM[2], yM[4]);
  return (u - e.state().vec()).lpNorm<Eigen::Infinity>();
}

struct MeshSolveResult {
  std::vector<double> mesh;
  std::vector<Vec6> values;
  double defect;
};

// Newton with homotopy fallback in the boundary data
void solve_on_mesh(const ModelParams& p, const BoundaryCondition& bc,
                   const Endstate& e, const ProjectiveBC& proj,
                   const std::vector<double>& mesh, std::vector<Vec6>& Y,
                   const SolveOptions& opts) {
  CollocationSystem sys{p, bc, e, proj, mesh};
  try {
    newton_solve(sys, Y, opts);
    return;
  } catch (const SolverFailure&) {
    // continuation from the rest state
  }
  const StateVec rest = e.state();
  Y = std::vector<Vec6>(mesh.size(), e.first_order_state());
  for (int s = 1; s <= opts.continuation_steps; ++s) {
    const double th = static_cast<double>(s) / opts.continuation_steps;
    BoundaryCondition bcs = bc;
    bcs.p_plus_0 = rest.p_plus + th * (bc.p_plus_0 - rest.p_plus);
    bcs.p_minus_0 = rest.p_minus + th * (bc.p_minus_0 - rest.p_minus);
    if (bc.kind == BcKind::Dirichlet) bcs.c_0 = rest.c + th * (bc.c_0 - rest.c);
    CollocationSystem sys_s{p, bcs, e, proj, mesh};
    newton_solve(sys_s, Y, opts);
  }
}

MeshSolveResult solve_adaptive(const ModelParams& p, const BoundaryCondition& bc,
                               const Endstate& e, const ProjectiveBC& proj,
                               std::vector<double> mesh, std::vector<Vec6> Y,
                               const SolveOptions& opts) {
  double defect = 0.0;
  for (int round = 0;; ++round) {
    solve_on_mesh(p, bc, e, proj, mesh, Y, opts);

    std::vector<Vec6> F(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) F[i] = rhs_F(p, Y[i]);
    std::vector<double> defects(mesh.size() - 1);
    defect = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      defects[i] = interval_defect(p, mesh[i], mesh[i + 1], Y[i], F[i], Y[i + 1], F[i + 1]);
      defect = std::max(defect, defects[i]);
    }
    if (defect <= opts.res_tol) break;
    if (round >= opts.max_mesh_rounds || mesh.size() > opts.max_nodes) {
      throw SolverFailure("mesh adaptation exhausted", defect);
    }
    std::vector<double> nmesh;
    std::vector<Vec6> nY;
    nmesh.reserve(2 * mesh.size());
    nY.reserve(2 * mesh.size());
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      nmesh.push_back(mesh[i]);
      nY.push_back(Y[i]);
      if (defects[i] > 0.5 * opts.res_tol) {
        const double xm = 0.5 * (mesh[i] + mesh[i + 1]);
        nmesh.push_back(xm);
        nY.push_back(hermite_eval(xm, mesh[i], mesh[i + 1], Y[i], F[i], Y[i + 1], F[i + 1]));
      }
    }
    nmesh.push_back(mesh.back());
    nY.push_back(Y.back());
    mesh.swap(nmesh);
    Y.swap(nY);
  }
  return MeshSolveResult{std::move(mesh), std::move(Y), defect};
}

Profile assemble_profile(const ModelParams& p, const BoundaryCondition& bc,
                         const Endstate& e, MeshSolveResult&& r) {
  Profile prof;
  prof.params = p;
  prof.bc = bc;
  prof.endstate = e;
  prof.mesh = std::move(r.mesh);
  prof.values = std::move(r.values);
  prof.collocation_residual = r.defect;
  prof.truncation_error = truncation_error_of(e, prof.values.back());
  return prof;
}

}  // namespace

ProjectiveBC projective_matrix(const ModelParams& p, const Endstate& e) {
  const Mat6 J = jacobian_at_infinity(p, e);
  Eigen::EigenSolver<Mat6> es(J.transpose());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("projective_matrix: eigensolver failed");
  }
  const auto& ev = es.eigenvalues();
  const auto& vecs = es.eigenvectors();

  std::vector<Eigen::Matrix<double, 6, 1>> rows;
  std::vector<bool> used(6, false);
  int n_stable = 0;
  for (int i = 0; i < 6; ++i) {
    if (ev[i].real() < -1e-9) {
      ++n_stable;
      continue;
    }
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(ev[i].imag()) < 1e-12 * (1.0 + std::abs(ev[i].real()))) {
      rows.push_back(vecs.col(i).real());
    } else {
      // conjugate pair: real and imaginary parts span the invariant plane
      rows.push_back(vecs.col(i).real());
      rows.push_back(vecs.col(i).imag());
      for (int j = i + 1; j < 6; ++j) {
        if (!used[j] && std::abs(ev[j] - std::conj(ev[i])) < 1e-8 * (1.0 + std::abs(ev[i]))) {
          used[j] = true;
          break;
        }
      }
    }
  }
  if (rows.size() != 3 || n_stable != 3) {
    std::ostringstream os;
    os << "projective_matrix: center-unstable dimension " << rows.size()
       << " (stable " << n_stable << "), expected 3";
    throw NongenericEndstateError(os.str());
  }
  Eigen::Matrix<double, 6, 3> span;
  for (int i = 0; i < 3; ++i) span.col(i) = rows[i];
  Eigen::HouseholderQR<Eigen::Matrix<double, 6, 3>> qr(span);
  Eigen::Matrix<double, 6, 3> Q =
      qr.householderQ() * Eigen::Matrix<double, 6, 3>::Identity();
  const Eigen::MatrixXd span_dyn = span;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span_dyn);
  if (svd.singularValues().minCoeff() < 1e-10) {
    throw NongenericEndstateError("projective_matrix: degenerate eigenvector span");
  }
  ProjectiveBC out;
  out.l_matrix = Q.transpose();
  return out;
}

ProfileInterpolant::ProfileInterpolant(const Profile& prof)
    : xs_(prof.mesh), ys_(prof.values), y_plus_(prof.endstate.first_order_state()) {
  fs_.resize(ys_.size());
  for (std::size_t i = 0; i < ys_.size(); ++i) fs_[i] = rhs_F(prof.params, ys_[i]);
}

Vec6 ProfileInterpolant::operator()(double x) const {
  if (x >= xs_.back()) return y_plus_;
  if (x <= xs_.front()) return ys_.front();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  return hermite_eval(x, xs_[i], xs_[i + 1], ys_[i], fs_[i], ys_[i + 1], fs_[i + 1]);
}

Profile solve_profile(const ModelParams& p, const BoundaryCondition& bc,
                      const Endstate& e, double M, double tol,
                      const SolveOptions& opts) {
  p.validate();
  if (!(M > 0.0)) throw std::invalid_argument("solve_profile: M must be positive");
  if (!physicality(p, e.c_plus)) {
    throw std::invalid_argument("solve_profile: endstate violates physicality");
  }
  const ProjectiveBC proj = projective_matrix(p, e);

  double Mcur = M;
  for (int doubling = 0;; ++doubling) {
    std::vector<double> mesh = graded_mesh(Mcur, opts.initial_nodes, opts.grading);
    std::vector<Vec6> Y = initial_guess(bc, e, mesh);
    MeshSolveResult r = solve_adaptive(p, bc, e, proj, std::move(mesh), std::move(Y), opts);
    Profile prof = assemble_profile(p, bc, e, std::move(r));

    // uniform refinement until the finite-difference residual target is met
    for (int extra = 0; extra < 3 && residual(prof) > opts.fd_residual_target &&
                        prof.size() * 2 < opts.max_nodes;
         ++extra) {
      prof = refine(prof, opts);
    }

    if (prof.truncation_error <= tol) return prof;
    if (doubling >= opts.max_domain_doublings) {
      std::ostringstream os;
      os << "solve_profile: truncation error " << prof.truncation_error
         << " above tolerance " << tol << " at M = " << Mcur;
      throw DomainSizeError(os.str());
    }
    Mcur *= 2.0;
  }
}

double residual(const Profile& prof) {
  const std::size_t N = prof.size();
  if (N < 5) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < N; ++i) {
    // five-point Lagrange differentiation on the nonuniform mesh
    Vec6 deriv = Vec6::Zero();
    for (int a = -2; a <= 2; ++a) {
      double w = 0.0;
      // derivative of the Lagrange basis for node i+a at x_i
      for (int b = -2; b <= 2; ++b) {
        if (b == a) continue;
        double term = 1.0 / (prof.mesh[i + a] - prof.mesh[i + b]);
        for (int cidx = -2; cidx <= 2; ++cidx) {
          if (cidx == a || cidx == b) continue;
          term *= (prof.mesh[i] - prof.mesh[i + cidx]) /
                  (prof.mesh[i + a] - prof.mesh[i + cidx]);
        }
        w += term;
      }
      deriv += w * prof.values[i + a];
    }
    const Vec6 f = rhs_F(prof.params, prof.values[i]);
    worst = std::max(worst, (deriv - f).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

Profile refine(const Profile& prof, const SolveOptions& opts) {
  const std::size_t N = prof.size();
  std::vector<Vec6> F(N);
  for (std::size_t i = 0; i < N; ++i) F[i] = rhs_F(prof.params, prof.values[i]);
  std::vector<double> mesh;
  std::vector<Vec6> Y;
  mesh.reserve(2 * N - 1);
  Y.reserve(2 * N - 1);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    mesh.push_back(prof.mesh[i]);
    Y.push_back(prof.values[i]);
    const double xm = 0.5 * (prof.mesh[i] + prof.mesh[i + 1]);
    mesh.push_back(xm);
    Y.push_back(hermite_eval(xm, prof.mesh[i], prof.mesh[i + 1], prof.values[i],
                             F[i], prof.values[i + 1], F[i + 1]));
  }
  mesh.push_back(prof.mesh.back());
  Y.push_back(prof.values.back());

  const ProjectiveBC proj = projective_matrix(prof.params, prof.endstate);
  CollocationSystem sys{prof.params, prof.bc, prof.endstate, proj, mesh};
  newton_solve(sys, Y, opts);

  double defect = 0.0;
  F.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) F[i] = rhs_F(prof.params, Y[i]);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    defect = std::max(defect, interval_defect(prof.params, mesh[i], mesh[i + 1],
                                              Y[i], F[i], Y[i + 1], F[i + 1]));
  }
  Profile out = prof;
  out.mesh = std::move(mesh);
  out.values = std::move(Y);
  out.collocation_residual = defect;
  out.truncation_error = truncation_error_of(prof.endstate, out.values.back());
  return out;
}

Profile make_constant_profile(const ModelParams& p, const Endstate& e, double M,
                              std::size_t n) {
  p.validate();
  Profile prof;
  prof.params = p;
  prof.endstate = e;
  prof.bc = BoundaryCondition::dirichlet(e.p_plus_inf, e.p_minus_inf, e.c_plus);
  prof.mesh.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.mesh[i] = M * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  prof.values.assign(n, e.first_order_state());
  prof.truncation_error = 0.0;
  prof.collocation_residual = 0.0;
  return prof;
}

}  // namespace mtstab
