#pragma once

#include <cstddef>
#include <vector>

#include "mtstab/model.hpp"

namespace mtstab {

struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what, double last_residual = -1.0)
      : std::runtime_error(what), residual(last_residual) {}
  double residual;
};

struct DomainSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when the center-unstable subspace at the endstate does not have
/// the expected dimension three.
struct NongenericEndstateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rows spanning the left center-unstable eigenspace of the rest-point
/// Jacobian; annihilates every stable eigenvector.
struct ProjectiveBC {
  Eigen::Matrix<double, 3, 6> l_matrix;
};

ProjectiveBC projective_matrix(const ModelParams& p, const Endstate& e);

/// A computed steady-state solution on [0, M].
struct Profile {
  ModelParams params;
  BoundaryCondition bc;
  Endstate endstate;
  std::vector<double> mesh;    // strictly increasing, mesh.front() == 0
  std::vector<Vec6> values;    // six-vector (p+, p+_x, p-, p-_x, c, c_x) per node
  double truncation_error = 0.0;  // |U(M) - U+| over the three state components
  double collocation_residual = 0.0;

  double domain_length() const { return mesh.back(); }
  std::size_t size() const { return mesh.size(); }
  StateVec state_at_node(std::size_t i) const {
    return StateVec{values[i][0], values[i][2], values[i][4]};
  }
  StateVec state_slope_at_node(std::size_t i) const {
    return StateVec{values[i][1], values[i][3], values[i][5]};
  }
};

/// C1 cubic-Hermite evaluator of a profile, with slopes taken from the
/// steady-state vector field at the nodes.  Beyond the last node the
/// endstate rest point is returned.
class ProfileInterpolant {
 public:
  explicit ProfileInterpolant(const Profile& prof);
  Vec6 operator()(double x) const;

 private:
  std::vector<double> xs_;
  std::vector<Vec6> ys_;
  std::vector<Vec6> fs_;
  Vec6 y_plus_;
};

struct SolveOptions {
  double res_tol = 1e-8;        // collocation residual target
  double newton_tol = 1e-10;    // Newton step tolerance
  int max_newton = 40;
  int max_mesh_rounds = 12;
  std::size_t max_nodes = 60000;
  int continuation_steps = 8;   // homotopy from the rest state on Newton failure
  int max_domain_doublings = 4;
  double fd_residual_target = 1e-6;  // post-hoc finite-difference residual target
  std::size_t initial_nodes = 481;
  double grading = 4.0;         // exponential clustering of the initial mesh near 0
};

/// Solves the steady-state two-point boundary value problem on [0, M] with
/// the given boundary data at 0 and projective conditions at M.  M is
/// doubled (up to a few times) when the truncation error exceeds tol.
Profile solve_profile(const ModelParams& p, const BoundaryCondition& bc,
                      const Endstate& e, double M = 30.0, double tol = 1e-3,
                      const SolveOptions& opts = {});

/// Max-norm defect of the stored values against the vector field, using a
/// five-point finite-difference derivative at interior nodes.
double residual(const Profile& prof);

/// Re-solves on the dyadically refined mesh, warm-started from the
/// interpolated values.
Profile refine(const Profile& prof, const SolveOptions& opts = {});

/// The rest-point solution as a Profile (uniform mesh).
Profile make_constant_profile(const ModelParams& p, const Endstate& e,
                              double M = 30.0, std::size_t n = 201);

}  // namespace mtstab
