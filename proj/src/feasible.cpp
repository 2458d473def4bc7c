#include "robin/feasible.hpp"

#include <string>

namespace robin {

namespace {

BoundaryFunction g_trace(const DiskMesh& mesh, const Instance& inst, const Field& y) {
  BoundaryFunction out = constant_boundary(mesh, 0.0);
  const auto bn = mesh.boundary_nodes();
  for (Eigen::Index j = 0; j < out.size(); ++j)
    out[j] = inst.g_value(mesh.boundary_point(j), y[bn[static_cast<std::size_t>(j)]]);
  return out;
}

// Solves A y + f(y) = 0, d_nA y + g(y) = psi.
Field auxiliary_state(const DiskMesh& mesh, const Instance& inst, const BoundaryFunction& psi,
                      const NewtonOptions& opts, const Field* initial) {
  if (!psi.all_finite()) throw InputError("feasible: non-finite boundary data");
  const RobinOperator op(mesh, inst.coefficients());
  return op.solve_semilinear(inst.state_nonlinearity(), inst.constraint_nonlinearity(), op.boundary_load(psi), opts,
                             initial);
}

}  // namespace

Membership is_member(const DiskMesh& mesh, const Instance& inst, const Field& y, const BoundaryFunction& u,
                     const ParamVector& lambda, double tolerance) {
  check_shape(mesh, y, "is_member y");
  check_shape(mesh, u, "is_member u");
  check_shape(mesh, lambda, "is_member lambda");
  const RobinOperator op(mesh, inst.coefficients());
  Membership m;
  m.state_residual =
      op.semilinear_residual(y.values, inst.state_nonlinearity(), NonlinearTerm{}, op.boundary_load(u + lambda.lambda1))
          .norm();
  m.constraint_violation = constraint_violation(constraint_residual(mesh, inst, y, u, lambda.lambda2));
  m.member = m.state_residual <= tolerance && m.constraint_violation <= tolerance;
  return m;
}

FeasiblePair construct_feasible(const DiskMesh& mesh, const Instance& inst, const ParamVector& lambda,
                                const NewtonOptions& opts) {
  return construct_feasible_with_slack(mesh, inst, lambda, constant_boundary(mesh, 0.0), opts);
}

FeasiblePair construct_feasible_with_slack(const DiskMesh& mesh, const Instance& inst, const ParamVector& lambda,
                                           const BoundaryFunction& slack, const NewtonOptions& opts) {
  check_shape(mesh, lambda, "construct_feasible lambda");
  check_shape(mesh, slack, "construct_feasible slack");
  if (slack.size() > 0 && slack.values.minCoeff() < 0.0)
    throw InputError("construct_feasible: slack must be nonnegative");
  Field y = auxiliary_state(mesh, inst, lambda.lambda1 - lambda.lambda2 - slack, opts, nullptr);
  BoundaryFunction u = -1.0 * (g_trace(mesh, inst, y) + lambda.lambda2 + slack);
  return {std::move(y), std::move(u)};
}

FeasiblePair track_feasible(const DiskMesh& mesh, const Instance& inst, const Field& y_hat,
                            const BoundaryFunction& u_hat, const ParamVector& lambda_hat, const ParamVector& lambda_n,
                            const NewtonOptions& opts) {
  check_shape(mesh, lambda_n, "track_feasible lambda_n");
  const Membership m = is_member(mesh, inst, y_hat, u_hat, lambda_hat);
  if (!m.member)
    throw ValidationError("track_feasible: (y_hat, u_hat) is not in K(lambda_hat): state residual " +
                          std::to_string(m.state_residual) + ", violation " +
                          std::to_string(m.constraint_violation));
  // Constraint value carried over from the reference pair.
  const BoundaryFunction carried = u_hat + lambda_hat.lambda2 + g_trace(mesh, inst, y_hat);
  Field y = auxiliary_state(mesh, inst, carried + lambda_n.lambda1 - lambda_n.lambda2, opts, &y_hat);
  BoundaryFunction u = carried - g_trace(mesh, inst, y) - lambda_n.lambda2;
  return {std::move(y), std::move(u)};
}

}  // namespace robin
