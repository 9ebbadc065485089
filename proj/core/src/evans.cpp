#include "mtstab/evans.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mtstab/ode.hpp"
#include "mtstab/parallel.hpp"

namespace mtstab {

namespace {

using Basis63 = Eigen::Matrix<Complex, 6, 3>;

// QR with the R diagonal rotated positive; returns Q and det(R) (> 0).
std::pair<Basis63, double> qr_positive(const Basis63& W) {
  Eigen::HouseholderQR<Basis63> qr(W);
  Basis63 Q = qr.householderQ() * Basis63::Identity();
  const Eigen::Matrix3cd R =
      qr.matrixQR().topRows<3>().template triangularView<Eigen::Upper>();
  double det = 1.0;
  for (int i = 0; i < 3; ++i) {
    const Complex rii = R(i, i);
    const double a = std::abs(rii);
    if (a > 0.0) Q.col(i) *= rii / a;
    det *= a;
  }
  return {Q, det};
}

struct StableDecomposition {
  std::array<int, 3> stable_idx;
  Eigen::Matrix<Complex, 6, 1> mu;
  CMat6 vectors;
  SplittingCount split;
};

StableDecomposition decompose(const ModelParams& p, const Endstate& e, Complex lambda) {
  const CMat6 A = evans_matrix_at_infinity(p, e, lambda);
  Eigen::ComplexEigenSolver<CMat6> es(A, true);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("stable basis: eigensolver failed");
  }
  StableDecomposition d;
  d.mu = es.eigenvalues();
  d.vectors = es.eigenvectors();
  d.split = SplittingCount{lambda, 0, 0, 0};
  std::array<int, 6> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return d.mu[a].real() < d.mu[b].real(); });
  for (int i = 0; i < 6; ++i) {
    const double re = d.mu[i].real();
    if (re < -1e-9) {
      ++d.split.n_stable;
    } else if (re > 1e-9) {
      ++d.split.n_unstable;
    } else {
      ++d.split.n_neutral;
    }
  }
  if (d.split.n_stable != 3 || d.split.n_unstable != 3) {
    std::ostringstream os;
    os << "consistent splitting (" << d.split.n_stable << "," << d.split.n_unstable
       << "," << d.split.n_neutral << ") != (3,3,0) at lambda = (" << lambda.real()
       << ", " << lambda.imag() << ")";
    throw SplittingFailure(os.str(), lambda, d.split);
  }
  d.stable_idx = {order[0], order[1], order[2]};
  return d;
}

CMat6 stable_projector(const StableDecomposition& d) {
  Eigen::Matrix<Complex, 6, 1> sel = Eigen::Matrix<Complex, 6, 1>::Zero();
  for (int i : d.stable_idx) sel[i] = 1.0;
  return d.vectors * sel.asDiagonal() * d.vectors.inverse();
}

}  // namespace

EvansSystem::EvansSystem(const Profile& prof)
    : params_(prof.params),
      endstate_(prof.endstate),
      bc_kind_(prof.bc.kind),
      M_(prof.domain_length()),
      interp_(prof),
      hf_(high_frequency_bound(prof)) {}

CMat6 EvansSystem::matrix(double x, Complex lambda) const {
  if (x >= M_) return evans_matrix_at_infinity(params_, endstate_, lambda);
  const Vec6 Y = interp_(x);
  const ModelParams& p = params_;
  const double pp = Y[0], ppx = Y[1], pm = Y[2], c = Y[4], cx = Y[5];
  CMat6 A = CMat6::Zero();
  A(0, 1) = 1.0;
  A(1, 0) = (lambda + p.u_plus * cx + p.f_cat) / p.d;
  A(1, 1) = p.u_plus * c / p.d;
  A(1, 2) = -p.omega * c / p.d;
  A(1, 4) = (p.u_plus * ppx - p.omega * pm) / p.d;
  A(1, 5) = p.u_plus * pp / p.d;
  A(2, 3) = 1.0;
  A(3, 0) = -p.f_cat / p.d;
  A(3, 2) = (lambda + p.omega * c) / p.d;
  A(3, 3) = -p.nu_minus / p.d;
  A(3, 4) = p.omega * pm / p.d;
  A(4, 5) = 1.0;
  A(5, 0) = p.u_plus * c / p.D;
  A(5, 2) = -p.nu_minus / p.D;
  A(5, 4) = (lambda + p.u_plus * pp + p.k) / p.D;
  return A;
}

Eigen::Matrix<double, 6, 3> boundary_basis(BcKind kind) {
  Eigen::Matrix<double, 6, 3> B = Eigen::Matrix<double, 6, 3>::Zero();
  B(1, 0) = 1.0;
  B(3, 1) = 1.0;
  B(kind == BcKind::Dirichlet ? 5 : 4, 2) = 1.0;
  return B;
}

StableBasis stable_basis_at_infinity(const ModelParams& p, const Endstate& e,
                                     Complex lambda) {
  const StableDecomposition d = decompose(p, e, lambda);
  StableBasis out;
  out.lambda = lambda;
  out.split = d.split;
  out.mu_sum = d.mu[d.stable_idx[0]] + d.mu[d.stable_idx[1]] + d.mu[d.stable_idx[2]];
  Basis63 V;
  for (int j = 0; j < 3; ++j) V.col(j) = d.vectors.col(d.stable_idx[j]);
  if (lambda.imag() == 0.0) {
    // realify so that conjugate mirroring of a contour is exact
    Eigen::Matrix<double, 6, Eigen::Dynamic> R(6, 6);
    int cols = 0;
    for (int j = 0; j < 3; ++j) {
      const auto re = V.col(j).real();
      const auto im = V.col(j).imag();
      if (re.norm() > 1e-12) R.col(cols++) = re;
      if (im.norm() > 1e-12) R.col(cols++) = im;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(R.leftCols(cols));
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(6, 3);
    out.basis = Q.cast<Complex>();
  } else {
    out.basis = qr_positive(V).first;
  }
  return out;
}

StableBasis stable_basis_advance(const ModelParams& p, const Endstate& e,
                                 const StableBasis& prev, Complex lambda) {
  const StableDecomposition d = decompose(p, e, lambda);
  StableBasis out;
  out.lambda = lambda;
  out.split = d.split;
  out.mu_sum = d.mu[d.stable_idx[0]] + d.mu[d.stable_idx[1]] + d.mu[d.stable_idx[2]];
  const CMat6 P = stable_projector(d);
  auto [Q, det] = qr_positive(P * prev.basis);
  if (det < 1e-8) {
    throw std::runtime_error("stable basis transport became degenerate; contour step too large");
  }
  out.basis = Q;
  out.cum_align = prev.cum_align * det;
  return out;
}

EvansEval evans_eval(const EvansSystem& sys, const StableBasis& basis, double rtol,
                     double atol) {
  using State = Eigen::Matrix<Complex, 19, 1>;
  const double M = sys.domain_length();
  const Complex lambda = basis.lambda;

  const auto rhs = [&](double t, const State& z) -> State {
    Basis63 Q;
    for (int j = 0; j < 3; ++j) Q.col(j) = z.segment<6>(6 * j);
    const CMat6 A = sys.matrix(M - t, lambda);
    const Eigen::Matrix3cd S = Q.adjoint() * (A * Q);
    const Basis63 dQ = -(A * Q - Q * S);
    State out;
    for (int j = 0; j < 3; ++j) out.segment<6>(6 * j) = dQ.col(j);
    out[18] = -S.trace();
    return out;
  };
  const auto norm = [](const State& z) { return z.cwiseAbs().maxCoeff(); };

  State z0;
  for (int j = 0; j < 3; ++j) z0.segment<6>(6 * j) = basis.basis.col(j);
  z0[18] = Complex(0.0, 0.0);
  const State zf = integrate_rk45(rhs, z0, 0.0, M, rtol, atol, norm);

  Basis63 Q0;
  for (int j = 0; j < 3; ++j) Q0.col(j) = zf.segment<6>(6 * j);
  const Complex phi = zf[18];

  CMat6 full;
  full.leftCols<3>() = boundary_basis(sys.bc_kind()).cast<Complex>();
  full.rightCols<3>() = Q0;
  const Complex det = full.determinant();
  const Complex expo = phi + M * basis.mu_sum;  // growth compensation
  EvansEval ev;
  ev.split = basis.split;
  ev.log_magnitude = std::log(std::max(std::abs(det), 1e-300)) + expo.real();
  ev.value = det * std::exp(expo) * basis.cum_align;
  return ev;
}

Complex evans_eval(const EvansSystem& sys, Complex lambda) {
  const StableBasis b = stable_basis_at_infinity(sys.params(), sys.endstate(), lambda);
  return evans_eval(sys, b).value;
}

namespace {

struct ContourNode {
  double t;  // parameter on the upper half-path, 0 = radius on the real axis,
             // 0.5 = +iR corner, 1 = the offset real-axis crossing
  StableBasis basis;
  Complex E{0.0, 0.0};
  bool evaluated = false;
};

Complex lambda_of(double t, double radius, double offset) {
  if (t <= 0.5) {
    const double theta = M_PI * t;
    return radius * std::exp(Complex(0.0, theta));
  }
  const double s = radius * 2.0 * (1.0 - t);
  return Complex(offset, s);
}

double rel_step(Complex a, Complex b) {
  const double den = std::min(std::abs(a), std::abs(b));
  return den > 0.0 ? std::abs(a - b) / den : std::numeric_limits<double>::infinity();
}

}  // namespace

EvansResult winding_number(const EvansSystem& sys, const ContourSpec& contour) {
  EvansResult res;
  res.radius = contour.radius;
  if (contour.radius <= sys.hf_bound().r_hat) {
    std::ostringstream os;
    os << "winding_number: contour radius " << contour.radius
       << " must exceed the high-frequency bound " << sys.hf_bound().r_hat;
    throw std::invalid_argument(os.str());
  }

  const ModelParams& p = sys.params();
  const Endstate& e = sys.endstate();
  std::vector<ContourNode> nodes;
  const int m = std::max(8, contour.n_points / 2);

  try {
    for (int i = 0; i <= m; ++i) {
      ContourNode nd;
      nd.t = static_cast<double>(i) / m;
      const Complex lam = lambda_of(nd.t, contour.radius, contour.re_offset);
      nd.basis = (i == 0) ? stable_basis_at_infinity(p, e, lam)
                          : stable_basis_advance(p, e, nodes.back().basis, lam);
      nodes.push_back(std::move(nd));
    }
  } catch (const SplittingFailure& sf) {
    res.gooddisp_verdict = false;
    res.conclusive = false;
    res.message = sf.what();
    return res;
  }

  const auto evaluate_pending = [&]() {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i].evaluated) pending.push_back(i);
    }
    parallel_for(pending.size(), [&](std::size_t j) {
      ContourNode& nd = nodes[pending[j]];
      nd.E = evans_eval(sys, nd.basis).value;
      nd.evaluated = true;
    });
  };
  evaluate_pending();

  bool budget_exhausted = false;
  for (int round = 0; round < 40; ++round) {
    std::vector<std::size_t> split_after;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (rel_step(nodes[i].E, nodes[i + 1].E) > contour.max_rel_step) {
        split_after.push_back(i);
      }
    }
    if (split_after.empty()) break;
    if (nodes.size() + split_after.size() > static_cast<std::size_t>(contour.max_points)) {
      budget_exhausted = true;
      break;
    }
    try {
      std::size_t shift = 0;
      for (std::size_t i : split_after) {
        const std::size_t at = i + shift;
        ContourNode nd;
        nd.t = 0.5 * (nodes[at].t + nodes[at + 1].t);
        const Complex lam = lambda_of(nd.t, contour.radius, contour.re_offset);
        nd.basis = stable_basis_advance(p, e, nodes[at].basis, lam);
        nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(at) + 1, std::move(nd));
        ++shift;
      }
    } catch (const SplittingFailure& sf) {
      res.gooddisp_verdict = false;
      res.conclusive = false;
      res.message = sf.what();
      return res;
    }
    evaluate_pending();
  }

  // unwind the residual gauge drift so the real-axis crossing at t=1 is
  // exactly real, as conjugate mirroring requires
  const std::size_t n = nodes.size();
  const Complex Eend = nodes.back().E;
  double delta = std::arg(Eend);
  delta -= std::round(delta / M_PI) * M_PI;
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].E *= std::exp(Complex(0.0, -delta * nodes[i].t));
  }

  // assemble the closed contour counterclockwise starting at -iR
  std::size_t corner = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].t <= 0.5) corner = i;
  }
  std::vector<bool> on_arc;
  const auto push = [&](Complex lam, Complex E, const SplittingCount& s, bool arc) {
    res.lambdas.push_back(lam);
    res.values.push_back(E);
    res.splittings.push_back(s);
    on_arc.push_back(arc);
  };
  for (std::size_t i = corner; i >= 1; --i) {
    push(std::conj(nodes[i].basis.lambda), std::conj(nodes[i].E), nodes[i].basis.split,
         true);
  }
  for (std::size_t i = 0; i < n; ++i) {
    push(nodes[i].basis.lambda, nodes[i].E, nodes[i].basis.split, nodes[i].t <= 0.5);
  }
  for (std::size_t i = n - 2; i > corner; --i) {
    push(std::conj(nodes[i].basis.lambda), std::conj(nodes[i].E), nodes[i].basis.split,
         false);
  }

  const std::size_t N = res.values.size();
  double total = 0.0;
  double max_step = 0.0;
  res.min_abs = std::numeric_limits<double>::infinity();
  res.max_abs = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const Complex a = res.values[i];
    const Complex b = res.values[(i + 1) % N];
    const double darg = std::arg(b / a);
    total += darg;
    max_step = std::max(max_step, rel_step(a, b));
    const bool arc_seg = on_arc[i] && on_arc[(i + 1) % N];
    (arc_seg ? res.arc_argument : res.diameter_argument) += darg;
    res.min_abs = std::min(res.min_abs, std::abs(a));
    res.max_abs = std::max(res.max_abs, std::abs(a));
  }
  const double w = total / (2.0 * M_PI);
  res.winding_number = static_cast<int>(std::lround(w));
  res.winding_residual = std::abs(w - res.winding_number);
  res.n_points_final = static_cast<int>(N);
  res.gooddisp_verdict = true;

  res.conclusive = true;
  std::ostringstream msg;
  if (budget_exhausted) {
    res.conclusive = false;
    msg << "refinement budget exhausted (max rel step " << max_step << "); ";
  }
  if (res.winding_residual > 0.05) {
    res.conclusive = false;
    msg << "winding residual " << res.winding_residual << " above 0.05; ";
  }
  if (!(res.min_abs > 1e-12 * res.max_abs)) {
    res.conclusive = false;
    msg << "contour passes within 1e-12*max|E| of zero (possible eigenvalue on it); ";
  }
  if (std::abs(delta) > 0.3) {
    res.conclusive = false;
    msg << "gauge drift " << delta << " too large; ";
  }
  res.message = msg.str();
  return res;
}

}  // namespace mtstab
