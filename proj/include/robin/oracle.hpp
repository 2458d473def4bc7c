#pragma once

#include <functional>
#include <vector>

#include "robin/optimize.hpp"
#include "robin/problem.hpp"

namespace robin {

/// Rotationally symmetric problem on the unit disk:
///   -alpha (y'' + y'/r) + a0 y + f(y) = 0,   alpha y'(1) + k(y(1)) = c.
struct RadialOde {
  double alpha = 1.0;
  double a0 = 1.0;
  std::function<double(double)> f;    ///< empty means 0
  std::function<double(double)> f_y;
  std::function<double(double)> k;    ///< boundary nonlinearity, empty means 0
  std::function<double(double)> k_y;
};

/// Radial data of an instance with constant isotropic coefficients and
/// x-independent f. With `with_constraint_term` the boundary term k = g is
/// included (the auxiliary problem of the feasible-point construction).
/// Throws ParameterError when the instance is not rotation-invariant.
RadialOde radial_ode_from_instance(const Instance& instance, bool with_constraint_term = false);

struct RadialProfile {
  std::vector<double> nodes;   ///< Chebyshev points on [-1, 1] (signed radius)
  std::vector<double> values;
  double residual = 0.0;       ///< max-norm collocation residual
  int iterations = 0;

  /// Barycentric interpolant at radius r in [0, 1].
  double operator()(double r) const;
};

/// Chebyshev collocation on the diameter [-1, 1] with an odd number of
/// intervals (no node at the centre), solved by Newton with dense LU.
/// Throws ConvergenceError when the residual does not reach 1e-10.
RadialProfile radial_solve(const RadialOde& ode, double neumann_value, int grid_size = 41);

struct BruteForceResult {
  BoundaryFunction u;
  double cost = 0.0;       ///< J at u, without penalty
  double violation = 0.0;  ///< max(G, 0)
  long evaluations = 0;
};

/// Derivative-free reference minimizer of u -> J(S(u), u) + w ||max(G, 0)||^2
/// over [-5, 5]^dim: pattern search on the coordinate and diagonal directions, step halved down to 1e-6,
/// penalty w = 1e2, 1e4, 1e6, 1e8, best of a few starts. Requires at most
/// 8 boundary nodes.
BruteForceResult brute_force_solve(const DiskMesh& mesh, const Instance& instance, const ParamVector& mu,
                                   const ParamVector& lambda);

}  // namespace robin
