#pragma once

#include <functional>
#include <vector>

#include "mtstab/model.hpp"
#include "mtstab/profile.hpp"

namespace mtstab {

struct StepSizeError : std::runtime_error {
  StepSizeError(const std::string& what, double suggested)
      : std::runtime_error(what), suggested_dt(suggested) {}
  double suggested_dt;
};

enum class TimeScheme { IMEX, FullyImplicit };

struct GridSpec {
  double x_far = 50.0;
  int nx = 1000;
  double dt = 0.01;
  double t_end = 200.0;
  TimeScheme scheme = TimeScheme::IMEX;

  void validate() const;
  double dx() const { return x_far / (nx - 1); }
};

using InitialData = std::function<StateVec(double)>;

struct Trajectory {
  ModelParams params;
  BoundaryCondition bc;
  GridSpec grid;
  std::vector<double> times;
  std::vector<std::vector<StateVec>> states;  // [snapshot][node]
  bool stationary = false;   // successive-snapshot criterion met at the end
  double min_component = 0.0;  // most negative value seen (positivity diagnostic)
  double total_density_final = 0.0;  // integral of p+ + p- at t_end
};

/// Time integration of the model on [0, x_far]: boundary data at x = 0,
/// homogeneous Neumann on all components at the far end.  Convection of p+
/// is differenced in conservative flux form; diffusion is implicit.
/// Snapshot times default to 101 evenly spaced instants.
Trajectory evolve(const ModelParams& p, const BoundaryCondition& bc,
                  const InitialData& initial, const GridSpec& grid,
                  std::vector<double> snapshot_times = {});

/// Per-snapshot max-norm distance to a steady-state profile on
/// [0, min(M, 0.8 x_far)].
std::vector<double> distance_to_profile(const Trajectory& traj, const Profile& prof);

/// p+ + p- of the initial data at the far end of the domain.
double limiting_total_density(const InitialData& initial, double x_far);

/// Piecewise-constant initial data: `inside` up to `edge`, `tail` beyond.
struct StepData {
  StateVec inside;
  StateVec tail;
  double edge = 3.0;

  StateVec operator()(double x) const { return x <= edge ? inside : tail; }
};

}  // namespace mtstab
