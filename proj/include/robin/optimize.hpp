#pragma once

#include <string>
#include <vector>

#include "robin/adjoint.hpp"
#include "robin/pde.hpp"
#include "robin/problem.hpp"

namespace robin {

struct SolveOptions {
  double inner_tolerance = 1e-10;  ///< on the projected-gradient L2(Gamma) norm
  double outer_tolerance = 1e-8;   ///< on the largest KKT residual
  double penalty_initial = 10.0;
  double penalty_growth = 10.0;
  double penalty_max = 1e10;
  int max_outer = 40;
  int max_inner = 5000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  /// Below this projected-gradient norm value differences approach roundoff;
  /// the inner loop then accepts steps that reduce the projected gradient.
  double polish_threshold = 1e-7;
  double control_bound = 1e3;  ///< box |u| <= bound
  NewtonOptions newton{1e-12, 100, 1.0, 1};
  std::vector<int> seeds{0, 1, 2, 3, 4, 5, 6, 7};
  double cluster_radius = 1e-3;  ///< L2(Gamma) distance of controls
  double value_rel_tolerance = 1e-6;
  double value_abs_tolerance = 1e-9;

  void validate() const;
};

struct OuterRecord {
  double penalty = 0.0;
  double violation = 0.0;  ///< max(G, 0) of the accepted iterate
  int inner_iterations = 0;
  bool inner_converged = false;
  /// Augmented Lagrangian value before and after each Armijo-accepted step.
  std::vector<double> armijo_values;
  int polish_steps = 0;
};

struct SolveTrace {
  std::vector<OuterRecord> outer;  ///< accepted outer iterations
  int rejected = 0;                ///< outer iterates rejected for increased violation
  int state_solves = 0;
  int adjoint_solves = 0;
};

/// Starting control for a multistart seed: 0, 0.5, -0.5, 1, -1, cos, sin,
/// cos 2 (of the boundary angle) for seeds 0..7, uniform [-1, 1] noise from
/// a seeded generator beyond.
BoundaryFunction seed_control(const DiskMesh& mesh, int seed);

/// KKT point of P(mu, lambda) from `start` by an augmented Lagrangian method
/// on G <= 0 with projected-gradient inner solves. Throws ConvergenceError
/// (carrying the largest KKT residual) when the outer loop does not reach the
/// outer tolerance.
KktPoint solve_pmu(const DiskMesh& mesh, const Instance& instance, const ParamVector& mu, const ParamVector& lambda,
                   const BoundaryFunction& start, const SolveOptions& opts = {}, SolveTrace* trace = nullptr);

struct SeedOutcome {
  int seed = 0;
  bool converged = false;
  std::string message;  ///< error text when not converged
  double cost = 0.0;
};

struct SolutionSet {
  std::vector<KktPoint> points;        ///< clusters at the optimal value, sorted by cost
  std::vector<int> point_seeds;        ///< seed that produced each point
  std::vector<KktPoint> local_points;  ///< KKT clusters above the optimal value
  std::vector<SeedOutcome> seeds;      ///< per-seed outcome, in seed order
  double clustering_radius = 0.0;
  double value = 0.0;  ///< min cost, the optimal value V(mu, lambda)
};

/// Multistart approximation of S(mu, lambda). Seeds run concurrently; the
/// result depends only on the seed list. Throws ParameterError for an empty
/// seed list and EmptySetError when no seed converges.
SolutionSet approximate_solution_set(const DiskMesh& mesh, const Instance& instance, const ParamVector& mu,
                                     const ParamVector& lambda, const SolveOptions& opts = {});

}  // namespace robin
