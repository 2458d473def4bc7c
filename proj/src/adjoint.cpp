#include "robin/adjoint.hpp"

#include <algorithm>
#include <cmath>

namespace robin {

namespace {

BoundaryFunction boundary_map(const DiskMesh& mesh, const Field& y,
                              const std::function<double(const Point&, double)>& fn) {
  BoundaryFunction out = constant_boundary(mesh, 0.0);
  const auto bn = mesh.boundary_nodes();
  for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = fn(mesh.boundary_point(j), y[bn[static_cast<std::size_t>(j)]]);
  return out;
}

Eigen::VectorXd nodal_f_y(const DiskMesh& mesh, const Instance& inst, const Field& y) {
  Eigen::VectorXd c(mesh.node_count());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = inst.f_deriv(mesh.node(i), y[i]);
  return c;
}

BoundaryFunction two_phi_u(const Instance& inst, const BoundaryFunction& u, const ParamVector& mu) {
  BoundaryFunction out = u;
  for (Eigen::Index j = 0; j < u.size(); ++j) out[j] = 2.0 * inst.control_weight(mu.mu2[j]) * u[j];
  return out;
}

}  // namespace

double KktResiduals::max() const { return std::max({stationarity, primal_feasibility, dual_sign, complementarity}); }

Field solve_adjoint_kkt(const DiskMesh& mesh, const Instance& inst, const Field& y, const BoundaryFunction& u,
                        const ParamVector& mu) {
  check_shape(mesh, y, "solve_adjoint_kkt y");
  check_shape(mesh, u, "solve_adjoint_kkt u");
  check_shape(mesh, mu, "solve_adjoint_kkt mu");
  const RobinOperator op(mesh, inst.coefficients());
  const BoundaryFunction gy = boundary_map(mesh, y, [&](const Point& x, double v) { return inst.g_deriv(x, v); });
  BoundaryFunction psi = two_phi_u(inst, u, mu);
  for (Eigen::Index j = 0; j < psi.size(); ++j) psi[j] = -psi[j] * gy[j];
  const Eigen::VectorXd rhs = cost_state_gradient(mesh, inst, y, mu) + op.boundary_load(psi);
  return Field(op.solve(nodal_f_y(mesh, inst, y), gy.values, rhs));
}

PenalizedGradient penalized_gradient(const DiskMesh& mesh, const RobinOperator& op, const Instance& inst,
                                     const Field& y, const BoundaryFunction& u, const ParamVector& mu,
                                     const BoundaryFunction& weight) {
  BoundaryFunction psi = boundary_map(mesh, y, [&](const Point& x, double v) { return inst.g_deriv(x, v); });
  for (Eigen::Index j = 0; j < psi.size(); ++j) psi[j] *= weight[j];
  const Eigen::VectorXd rhs = cost_state_gradient(mesh, inst, y, mu) + op.boundary_load(psi);
  Field p(op.solve(nodal_f_y(mesh, inst, y), Eigen::VectorXd::Zero(mesh.boundary_count()), rhs));
  BoundaryFunction grad = two_phi_u(inst, u, mu) + weight + trace(mesh, p);
  return {std::move(p), std::move(grad)};
}

BoundaryFunction reduced_gradient(const DiskMesh& mesh, const Instance& inst, const BoundaryFunction& u,
                                  const BoundaryFunction& lambda1, const ParamVector& mu, const NewtonOptions& opts) {
  check_shape(mesh, mu, "reduced_gradient mu");
  const Field y = solve_state(mesh, inst, u, lambda1, opts);
  const RobinOperator op(mesh, inst.coefficients());
  return penalized_gradient(mesh, op, inst, y, u, mu, constant_boundary(mesh, 0.0)).gradient;
}

BoundaryFunction recover_multiplier(const DiskMesh& mesh, const Instance& inst, const Field& adjoint,
                                    const BoundaryFunction& u, const ParamVector& mu) {
  check_shape(mesh, adjoint, "recover_multiplier adjoint");
  check_shape(mesh, u, "recover_multiplier u");
  return -1.0 * (trace(mesh, adjoint) + two_phi_u(inst, u, mu));
}

KktResiduals kkt_residuals(const DiskMesh& mesh, const Instance& inst, const KktPoint& pt, const ParamVector& mu,
                           const ParamVector& lambda) {
  check_shape(mesh, pt.e, "kkt_residuals e");
  KktResiduals r;
  r.stationarity = l2_boundary(mesh, two_phi_u(inst, pt.u, mu) + trace(mesh, pt.adjoint) + pt.e);
  const BoundaryFunction G = constraint_residual(mesh, inst, pt.y, pt.u, lambda.lambda2);
  r.primal_feasibility = constraint_violation(G);
  const auto& b = mesh.boundary_mass();
  for (Eigen::Index j = 0; j < G.size(); ++j) {
    r.dual_sign = std::max(r.dual_sign, -pt.e[j]);
    r.complementarity += b[j] * std::abs(pt.e[j] * G[j]);
  }
  return r;
}

void complete_kkt_point(const DiskMesh& mesh, const Instance& inst, KktPoint& pt, const ParamVector& mu,
                        const ParamVector& lambda) {
  pt.adjoint = solve_adjoint_kkt(mesh, inst, pt.y, pt.u, mu);
  pt.e = recover_multiplier(mesh, inst, pt.adjoint, pt.u, mu);
  pt.residuals = kkt_residuals(mesh, inst, pt, mu, lambda);
  pt.cost = eval_cost(mesh, inst, pt.y, pt.u, mu);
}

double vi_check(const DiskMesh& mesh, const Instance& inst, const KktPoint& a, const FeasiblePair& b,
                const ParamVector& lambda_b, const ParamVector& mu_a, const ParamVector& lambda_a) {
  const BoundaryFunction w = trace(mesh, a.adjoint) + two_phi_u(inst, a.u, mu_a);
  const BoundaryFunction ga = constraint_residual(mesh, inst, a.y, a.u, lambda_a.lambda2);
  const BoundaryFunction gb = constraint_residual(mesh, inst, b.y, b.u, lambda_b.lambda2);
  return boundary_inner(mesh, w, ga - gb);
}

}  // namespace robin
