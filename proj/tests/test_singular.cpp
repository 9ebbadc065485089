#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "mtstab/singular.hpp"

using namespace mtstab;
using namespace mtstab::test;

namespace {
const ModelParams kOnes{1, 1, 1, 1, 1, 1, 1};
const BoundaryCondition kBc = BoundaryCondition::dirichlet(0.2, 0.2, 0.2);

// closed form for the vanishing-concentration case: with kappa = sqrt(k/D),
// log p+(x) = log p+(0) + kappa x + (omega c0 /(nu kappa))(1 - e^{-kappa x})
//           - (f/(u+ c0 kappa))(e^{kappa x} - 1)
double case1_p_plus_exact(const ModelParams& p, double c0, double pp0, double x) {
  const double kap = std::sqrt(p.k / p.D);
  const double lp = std::log(pp0) + kap * x +
                    p.omega * c0 / (p.nu_minus * kap) * (1.0 - std::exp(-kap * x)) -
                    p.f_cat / (p.u_plus * c0 * kap) * (std::exp(kap * x) - 1.0);
  return lp < -700.0 ? 0.0 : std::exp(lp);
}

}  // namespace

TEST_CASE("slow solution, vanishing limiting concentration") {
  const SlowSolution slow = slow_solve(kOnes, kBc, SlowCase::I);
  CHECK(slow.alpha_cons() == 0.0);

  for (double x : {0.0, 0.4, 1.0, 2.5}) {
    CHECK(slow.c(x) == doctest::Approx(0.2 * std::exp(-x)).epsilon(1e-13));
  }

  // numerical integration against the closed form
  for (double x : {0.0, 0.3, 1.0, 2.0, 3.5}) {
    const double exact = case1_p_plus_exact(kOnes, 0.2, 0.2, x);
    CHECK(slow.p_plus(x) == doctest::Approx(exact).epsilon(1e-7));
  }

  // superexponential structure: log p+ fits a + b x + g e^{kappa x}; the
  // stiff coefficient must come out as -f/(u+ c0 kappa) = -5
  std::vector<double> xs;
  for (double x = 0.5; x <= 4.5; x += 0.125) xs.push_back(x);
  Eigen::MatrixXd Afit(xs.size(), 3);
  Eigen::VectorXd bfit(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Afit(i, 0) = 1.0;
    Afit(i, 1) = xs[i];
    Afit(i, 2) = std::exp(xs[i]);
    bfit(i) = std::log(slow.p_plus(xs[i]));
  }
  const Eigen::Vector3d coef = Afit.colPivHouseholderQr().solve(bfit);
  CHECK(coef[2] == doctest::Approx(-5.0).epsilon(1e-3));
  const double fit_residual =
      (Afit * coef - bfit).lpNorm<Eigen::Infinity>() / bfit.lpNorm<Eigen::Infinity>();
  CHECK(fit_residual < 1e-3);

  // far out the whole density pair is numerically zero while c is not
  CHECK(slow.p_plus(8.0) == 0.0);
  CHECK(slow.p_minus(8.0) == 0.0);
  CHECK(slow.c(8.0) > 0.0);
}

TEST_CASE("conserved combination along slow solutions") {
  std::mt19937 rng(91);
  for (int it = 0; it < 10; ++it) {
    const ModelParams p = random_params(rng, 0.5, 2.0);
    const double c_inf = 0.4 * physical_c_max(p);
    const BoundaryCondition bc = BoundaryCondition::dirichlet(0.3, 0.1, 1.2 * c_inf);
    const SlowSolution slow = slow_solve(p, bc, SlowCase::II, c_inf);
    CHECK(slow.alpha_cons() == doctest::Approx(-p.k * c_inf).epsilon(1e-14));
    for (double x : {0.0, 0.5, 1.5, 4.0, 9.0}) {
      const StateVec s = slow.state(x);
      const double combo = p.u_plus * s.c * s.p_plus - p.nu_minus * s.p_minus;
      CHECK(std::abs(combo - slow.alpha_cons()) < 1e-10);
    }
  }
}

TEST_CASE("slow solution satisfies the outer equations") {
  const SlowSolution slow = slow_solve(kOnes, kBc, SlowCase::II, 0.5, 30.0);
  const double h = 1e-5;
  for (double x : {0.2, 1.0, 3.0, 7.0}) {
    // first outer equation: (v+ p+)' = (omega c/nu - f/(u+ c)) v+ p+ - omega c alpha/nu
    const auto z = [&](double xx) {
      return kOnes.u_plus * slow.c(xx) * slow.p_plus(xx);
    };
    const double dz = (z(x + h) - z(x - h)) / (2.0 * h);
    const double cc = slow.c(x);
    const double rhs = (kOnes.omega * cc / kOnes.nu_minus -
                        kOnes.f_cat / (kOnes.u_plus * cc)) *
                           z(x) -
                       kOnes.omega * cc * slow.alpha_cons() / kOnes.nu_minus;
    CHECK(dz == doctest::Approx(rhs).epsilon(1e-5));
  }
}

TEST_CASE("slow limits land on the equilibrium curve") {
  const double c_inf = 0.5;
  const SlowSolution slow = slow_solve(kOnes, kBc, SlowCase::II, c_inf, 60.0);
  const Endstate e = endstate_from_c(kOnes, c_inf);
  CHECK(slow.p_plus(60.0) == doctest::Approx(e.p_plus_inf).epsilon(1e-9));
  CHECK(slow.p_minus(60.0) == doctest::Approx(e.p_minus_inf).epsilon(1e-9));
  const StateVec lim = slow.state(60.0);
  const Vec3 res = matrix_B(kOnes, lim) * lim.vec();
  CHECK(res.lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(slow.limit_state().p_plus == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("flux data") {
  // vanishing limiting concentration admits only the trivial solution
  CHECK_THROWS_AS(slow_solve(kOnes, BoundaryCondition::neumann(0.2, 0.2), SlowCase::I),
                  TrivialSolutionError);

  // positive limiting concentration: c is constant and the limits are on
  // the equilibrium curve
  const SlowSolution slow =
      slow_solve(kOnes, BoundaryCondition::neumann(0.2, 0.2), SlowCase::II, 0.5, 50.0);
  for (double x : {0.0, 1.0, 10.0}) {
    CHECK(slow.c(x) == doctest::Approx(0.5));
  }
  CHECK(slow.p_plus(50.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("fast layer") {
  ModelParams p = kOnes;
  p.d = 0.05;
  const StateVec outer{0.04, 0.1, 0.2};

  // no mismatch: identically constant layer
  const BoundaryCondition match = BoundaryCondition::dirichlet(0.04, 0.1, 0.2);
  const FastLayer flat = fast_layer_solve(p, outer, match);
  CHECK(flat.p_minus_jump == doctest::Approx(0.0));
  for (double xt : {0.0, 1.0, 10.0}) {
    CHECK(flat.at_stretched(xt).p_minus == doctest::Approx(0.1));
  }

  const BoundaryCondition bc = BoundaryCondition::dirichlet(0.04, 0.2, 0.2);
  const FastLayer layer = fast_layer_solve(p, outer, bc);
  CHECK(layer.p_minus_jump == doctest::Approx(0.1));
  // densities and concentration frozen across the layer
  CHECK(layer.at_stretched(3.0).p_plus == doctest::Approx(0.04));
  CHECK(layer.at_stretched(3.0).c == doctest::Approx(0.2));
  // exponential relaxation at the shrinkage rate
  CHECK(layer.at_stretched(5.0).p_minus - outer.p_minus ==
        doctest::Approx(0.1 * std::exp(-5.0)).epsilon(1e-12));
  // half-width ln2/nu in the stretched variable
  const double half = std::log(2.0) / p.nu_minus;
  CHECK(layer.at_stretched(half).p_minus - outer.p_minus ==
        doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("composite approximation") {
  ModelParams p = kOnes;
  p.d = 1e-8;
  const CompositeSolution comp = composite(p, kBc, SlowCase::I);
  // with a collapsed layer the composite equals the slow part away from 0
  for (double x : {0.5, 1.0, 2.0}) {
    const StateVec a = comp.at(x);
    const StateVec s = comp.slow().state(x);
    CHECK(a.p_minus == doctest::Approx(s.p_minus));
    CHECK(a.p_plus == doctest::Approx(s.p_plus));
  }
  // at the boundary the composite honors the boundary density
  CHECK(comp.at(0.0).p_minus == doctest::Approx(0.2));

  // constant concentration through the composite for flux data
  const CompositeSolution compN =
      composite(p, BoundaryCondition::neumann(0.2, 0.2), SlowCase::II, 0.5);
  for (double x : {0.0, 0.3, 2.0}) {
    CHECK(compN.at(x).c == doctest::Approx(0.5));
  }
}
