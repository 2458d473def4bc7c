#pragma once

#include "robin/geometry.hpp"
#include "robin/pde.hpp"
#include "robin/problem.hpp"

namespace robin {

struct Membership {
  bool member = false;
  double state_residual = 0.0;        ///< Euclidean norm of the assembled state-equation residual
  double constraint_violation = 0.0;  ///< max(G, 0) in the max norm
};

/// Is (y, u) in K(lambda): state equation and mixed constraint, both to `tolerance`.
Membership is_member(const DiskMesh& mesh, const Instance& instance, const Field& y, const BoundaryFunction& u,
                     const ParamVector& lambda, double tolerance = kFeasibilityTolerance);

struct FeasiblePair {
  Field y;
  BoundaryFunction u;
};

/// Point of K(lambda) with the constraint active everywhere: y solves
/// A y + f(y) = 0, d_nA y + g(y) = lambda1 - lambda2, and u = -g(y) - lambda2.
FeasiblePair construct_feasible(const DiskMesh& mesh, const Instance& instance, const ParamVector& lambda,
                                const NewtonOptions& opts = {});

/// As construct_feasible, but with G = -slack (slack >= 0 pointwise).
FeasiblePair construct_feasible_with_slack(const DiskMesh& mesh, const Instance& instance, const ParamVector& lambda,
                                           const BoundaryFunction& slack, const NewtonOptions& opts = {});

/// Moves a member (y_hat, u_hat) of K(lambda_hat) to a member of K(lambda_n)
/// with the same constraint values G. Throws ValidationError when the input
/// pair is not a member.
FeasiblePair track_feasible(const DiskMesh& mesh, const Instance& instance, const Field& y_hat,
                            const BoundaryFunction& u_hat, const ParamVector& lambda_hat, const ParamVector& lambda_n,
                            const NewtonOptions& opts = {});

}  // namespace robin
