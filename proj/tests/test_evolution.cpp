#include <doctest.h>

#include "helpers.hpp"
#include "mtstab/evolution.hpp"

using namespace mtstab;
using namespace mtstab::test;

namespace {
const ModelParams kFig3 = ModelParams::fig3();
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.nx = 10;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = GridSpec{};
  g.dt = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("rest points stay put under both schemes") {
  std::mt19937 rng(83);
  for (int trial = 0; trial < 2; ++trial) {
    const ModelParams p = (trial == 0) ? kFig3 : random_params(rng, 0.5, 2.0);
    const Endstate e = endstate_from_c(p, 0.4 * physical_c_max(p));
    const StateVec rest = e.state();
    const BoundaryCondition bc =
        BoundaryCondition::dirichlet(rest.p_plus, rest.p_minus, rest.c);
    for (TimeScheme scheme : {TimeScheme::IMEX, TimeScheme::FullyImplicit}) {
      GridSpec g;
      g.x_far = 25.0;
      g.nx = 120;
      g.dt = 0.02;
      g.t_end = (scheme == TimeScheme::IMEX) ? 100.0 : 10.0;
      g.scheme = scheme;
      const Trajectory traj = evolve(p, bc, [&](double) { return rest; }, g);
      for (const auto& snap : traj.states) {
        for (const StateVec& s : snap) {
          CHECK(std::abs(s.p_plus - rest.p_plus) < 1e-8);
          CHECK(std::abs(s.p_minus - rest.p_minus) < 1e-8);
          CHECK(std::abs(s.c - rest.c) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("first snapshot is the supplied data and boundary rows follow bc") {
  const BoundaryCondition bc = BoundaryCondition::dirichlet(0.2, 0.2, 0.2);
  const StepData init{StateVec{0.2, 0.2, 0.2}, StateVec{}, 3.0};
  GridSpec g;
  g.nx = 200;
  g.x_far = 20.0;
  g.t_end = 1.0;
  const Trajectory traj = evolve(kFig3, bc, init, g, {0.0, 0.5, 1.0});
  REQUIRE(traj.states.size() == 3);
  for (int j = 0; j < g.nx; ++j) {
    const StateVec want = init(j * g.dx());
    CHECK(traj.states[0][j].p_plus == want.p_plus);
    CHECK(traj.states[0][j].p_minus == want.p_minus);
    CHECK(traj.states[0][j].c == want.c);
  }
  for (std::size_t s = 1; s < traj.states.size(); ++s) {
    CHECK(traj.states[s][0].p_plus == doctest::Approx(0.2));
    CHECK(traj.states[s][0].p_minus == doctest::Approx(0.2));
    CHECK(traj.states[s][0].c == doctest::Approx(0.2));
  }
}

TEST_CASE("step data relaxes toward the boundary-layer profile") {
  const BoundaryCondition bc = BoundaryCondition::dirichlet(0.2, 0.2, 0.2);
  const StepData init{StateVec{0.2, 0.2, 0.2}, StateVec{}, 3.0};
  GridSpec g;
  g.nx = 500;
  g.x_far = 50.0;
  g.dt = 0.02;
  g.t_end = 60.0;
  const Trajectory traj = evolve(kFig3, bc, init, g);
  CHECK(traj.min_component > -1e-8);  // discrete positivity

  const Profile prof = solve_profile(kFig3, bc, endstate_from_c(kFig3, 0.0));
  const auto dist = distance_to_profile(traj, prof);
  CHECK(dist.back() < dist.front());
  CHECK(dist.back() < 0.05);  // full convergence is checked at larger t_end
  // monotone decline over the last quarter of snapshots
  for (std::size_t i = dist.size() - dist.size() / 4; i + 1 < dist.size(); ++i) {
    CHECK(dist[i + 1] <= dist[i] + 1e-9);
  }
}

TEST_CASE("distance to profile") {
  const Endstate e = endstate_from_c(kFig3, 0.3);
  const StateVec rest = e.state();
  const BoundaryCondition bc =
      BoundaryCondition::dirichlet(rest.p_plus, rest.p_minus, rest.c);
  GridSpec g;
  g.nx = 100;
  g.x_far = 20.0;
  g.t_end = 1.0;
  const Trajectory traj = evolve(kFig3, bc, [&](double) { return rest; }, g);
  const Profile rest_prof = make_constant_profile(kFig3, e, 20.0, 51);
  for (double d : distance_to_profile(traj, rest_prof)) {
    CHECK(d < 1e-9);
  }

  ModelParams other = kFig3;
  other.k = 2.0;
  const Profile mismatched = make_constant_profile(other, endstate_from_c(other, 0.1), 20.0, 11);
  CHECK_THROWS_AS(distance_to_profile(traj, mismatched), std::invalid_argument);
}

TEST_CASE("limiting total density") {
  const StepData zero_tail{StateVec{0.2, 0.2, 0.02}, StateVec{}, 3.0};
  CHECK(limiting_total_density(zero_tail, 50.0) == 0.0);

  // opposite-sign densities cancel in the total
  const StepData cancel{StateVec{0.2, 0.2, 0.02}, StateVec{0.1, -0.1, 0.02}, 3.0};
  CHECK(limiting_total_density(cancel, 50.0) == doctest::Approx(0.0));

  const StepData tail{StateVec{0.2, 0.2, 0.02}, StateVec{0.06, 0.04, 0.02}, 3.0};
  CHECK(limiting_total_density(tail, 50.0) == doctest::Approx(0.1));
}

TEST_CASE("time-step blow-up is reported with a suggestion") {
  const BoundaryCondition bc = BoundaryCondition::dirichlet(0.2, 0.2, 0.2);
  GridSpec g;
  g.nx = 200;
  g.x_far = 20.0;
  g.dt = 5.0;  // wildly unstable for the explicit part
  g.t_end = 500.0;
  bool threw = false;
  try {
    evolve(kFig3, bc, [](double) { return StateVec{0.2, 0.2, 0.2}; }, g);
  } catch (const StepSizeError& err) {
    threw = true;
    CHECK(err.suggested_dt == doctest::Approx(2.5));
  }
  CHECK(threw);
}
