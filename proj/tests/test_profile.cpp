#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "mtstab/profile.hpp"

using namespace mtstab;
using namespace mtstab::test;

namespace {

const ModelParams kFig3 = ModelParams::fig3();
const BoundaryCondition kFig3Bc = BoundaryCondition::dirichlet(0.2, 0.2, 0.2);

const Profile& fig3_profile() {
  static const Profile prof =
      solve_profile(kFig3, kFig3Bc, endstate_from_c(kFig3, 0.0));
  return prof;
}

}  // namespace

TEST_CASE("projective boundary matrix") {
  std::mt19937 rng(77);
  for (int it = 0; it < 20; ++it) {
    const ModelParams p = (it == 0) ? kFig3 : random_params(rng);
    const Endstate e = endstate_from_c(p, it == 0 ? 0.0 : random_admissible_c(rng, p));
    const ProjectiveBC proj = projective_matrix(p, e);

    // rank 3 through singular values
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        Eigen::MatrixXd(proj.l_matrix.transpose()));
    CHECK(svd.singularValues().minCoeff() > 1e-10);

    // annihilates every numerically computed stable eigenvector
    Eigen::ComplexEigenSolver<CMat6> es(jacobian_at_infinity(p, e).cast<Complex>(),
                                        true);
    for (int i = 0; i < 6; ++i) {
      if (es.eigenvalues()[i].real() < -1e-9) {
        const CVec6 v = es.eigenvectors().col(i);
        CHECK((proj.l_matrix.cast<Complex>() * v).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
}

TEST_CASE("rest-point boundary data gives the constant profile") {
  const Endstate e = endstate_from_c(kFig3, 0.4);
  const BoundaryCondition bc =
      BoundaryCondition::dirichlet(e.p_plus_inf, e.p_minus_inf, e.c_plus);
  SolveOptions opts;
  opts.initial_nodes = 101;
  const Profile prof = solve_profile(kFig3, bc, e, 20.0, 1e-3, opts);
  const Vec6 yp = e.first_order_state();
  for (const Vec6& y : prof.values) {
    CHECK((y - yp).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("sample boundary-layer profile") {
  const Profile& prof = fig3_profile();
  CHECK(prof.truncation_error < 1e-3);
  CHECK(prof.collocation_residual <= 1e-8);
  CHECK(residual(prof) < 1e-6);

  // boundary rows
  CHECK(prof.values.front()[0] == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(prof.values.front()[2] == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(prof.values.front()[4] == doctest::Approx(0.2).epsilon(1e-10));

  // nonconstant and decaying
  CHECK(prof.values.back().lpNorm<Eigen::Infinity>() < 1e-3);

  // exponential tail: log|U| decreasing and asymptotically linear on the
  // last quarter, slope near the slowest stable rate of the rest point
  Eigen::ComplexEigenSolver<CMat6> es(
      jacobian_at_infinity(kFig3, prof.endstate).cast<Complex>(), false);
  double slowest = -1e9;
  for (int i = 0; i < 6; ++i) {
    const double re = es.eigenvalues()[i].real();
    if (re < -1e-9) slowest = std::max(slowest, re);
  }
  REQUIRE(slowest != -1e9);

  std::vector<double> xs, ls;
  const double M = prof.domain_length();
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (prof.mesh[i] < 0.75 * M) continue;
    const Vec3 u(prof.values[i][0], prof.values[i][2], prof.values[i][4]);
    const double dist = (u - prof.endstate.state().vec()).lpNorm<Eigen::Infinity>();
    if (dist < 1e-13) break;
    CHECK(dist < prev);
    prev = dist;
    xs.push_back(prof.mesh[i]);
    ls.push_back(std::log(dist));
  }
  REQUIRE(xs.size() >= 6);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ls[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ls[i];
  }
  const double n = static_cast<double>(xs.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope - slowest) < 0.25 * std::abs(slowest));
}

TEST_CASE("mesh self-consistency") {
  SolveOptions coarse;
  coarse.initial_nodes = 201;
  coarse.res_tol = 1e-7;
  coarse.fd_residual_target = 1e-4;
  SolveOptions fine = coarse;
  fine.initial_nodes = 401;
  const Endstate e = endstate_from_c(kFig3, 0.0);
  const Profile a = solve_profile(kFig3, kFig3Bc, e, 30.0, 1e-3, coarse);
  const Profile b = solve_profile(kFig3, kFig3Bc, e, 30.0, 1e-3, fine);
  const ProfileInterpolant ia(a), ib(b);
  double worst = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double x = 30.0 * i / 300.0;
    worst = std::max(worst, (ia(x) - ib(x)).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("refinement") {
  const Endstate e = endstate_from_c(kFig3, 0.0);
  SolveOptions opts;
  opts.initial_nodes = 161;
  opts.res_tol = 1e-5;           // deliberately loose start
  opts.fd_residual_target = 1.0;  // no extra refinement inside the solve
  const Profile p0 = solve_profile(kFig3, kFig3Bc, e, 30.0, 1e-3, opts);

  const Profile p1 = refine(p0);
  CHECK(p1.size() == 2 * p0.size() - 1);
  CHECK(p1.collocation_residual <= p0.collocation_residual);

  const Profile p2 = refine(p1);
  // order >= 2: successive corrections shrink by at least ~4x
  const ProfileInterpolant i0(p0), i1(p1), i2(p2);
  double d01 = 0.0, d12 = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 30.0 * i / 200.0;
    d01 = std::max(d01, (i1(x) - i0(x)).lpNorm<Eigen::Infinity>());
    d12 = std::max(d12, (i2(x) - i1(x)).lpNorm<Eigen::Infinity>());
  }
  CHECK(d12 <= 0.3 * d01);

  // the rest-point profile is a fixed point of refinement
  const Endstate er = endstate_from_c(kFig3, 0.3);
  const Profile rest = make_constant_profile(kFig3, er, 10.0, 41);
  const Profile rest2 = refine(rest);
  const Vec6 yp = er.first_order_state();
  for (const Vec6& y : rest2.values) {
    CHECK((y - yp).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("residual measures defects") {
  const Endstate e = endstate_from_c(kFig3, 0.25);
  const Profile rest = make_constant_profile(kFig3, e, 10.0, 101);
  CHECK(residual(rest) < 1e-12);

  Profile bent = fig3_profile();
  bent.values[bent.size() / 2][0] += 1e-3;
  CHECK(residual(bent) > 1e-5);
}

TEST_CASE("extending the domain does not move the profile") {
  const Endstate e = endstate_from_c(kFig3, 0.0);
  const Profile a = solve_profile(kFig3, kFig3Bc, e, 30.0, 1e-3);
  const Profile b = solve_profile(kFig3, kFig3Bc, e, 45.0, 1e-3);
  const ProfileInterpolant ia(a), ib(b);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = 24.0 * i / 400.0;  // 0.8 * original M
    worst = std::max(worst, (ia(x) - ib(x)).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("flux and value data reproduce each other") {
  const Endstate e = endstate_from_c(kFig3, 0.0);
  const BoundaryCondition nbc = BoundaryCondition::neumann(0.2, 0.2);
  const Profile pn = solve_profile(kFig3, nbc, e, 30.0, 1e-3);
  CHECK(std::abs(pn.values.front()[5]) < 1e-9);  // c_x(0) = 0

  const double c_star = pn.values.front()[4];
  const Profile pd = solve_profile(
      kFig3, BoundaryCondition::dirichlet(0.2, 0.2, c_star), e, 30.0, 1e-3);
  const ProfileInterpolant in(pn), id(pd);
  double worst = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double x = 30.0 * i / 300.0;
    worst = std::max(worst, (in(x) - id(x)).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("solver error paths") {
  const Endstate e = endstate_from_c(kFig3, 0.0);
  CHECK_THROWS_AS(solve_profile(kFig3, kFig3Bc, e, -1.0, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_profile(kFig3, kFig3Bc, endstate_from_c(kFig3, 0.0), 30.0,
                                0.0,
                                [] {
                                  SolveOptions o;
                                  o.max_domain_doublings = 0;
                                  return o;
                                }()),
                  DomainSizeError);
  ModelParams bad = kFig3;
  Endstate beyond;
  beyond.c_plus = 2.0;  // violates physicality for fig3 parameters
  CHECK_THROWS_AS(solve_profile(bad, kFig3Bc, beyond, 30.0, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("interpolant reproduces node values") {
  const Profile& prof = fig3_profile();
  const ProfileInterpolant interp(prof);
  for (std::size_t i = 0; i < prof.size(); i += 97) {
    CHECK((interp(prof.mesh[i]) - prof.values[i]).lpNorm<Eigen::Infinity>() <
          1e-12);
  }
  // beyond the domain, the rest state
  CHECK((interp(prof.domain_length() + 5.0) -
         prof.endstate.first_order_state())
            .lpNorm<Eigen::Infinity>() == 0.0);
}
