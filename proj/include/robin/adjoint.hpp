#pragma once

#include "robin/feasible.hpp"
#include "robin/geometry.hpp"
#include "robin/pde.hpp"
#include "robin/problem.hpp"

namespace robin {

// Sign convention: the constraint is G <= 0 with multiplier e >= 0 and
// Lagrangian J + <e, G>. Eliminating e from the boundary condition of the
// adjoint gives the system solved by solve_adjoint_kkt.

struct KktResiduals {
  double stationarity = 0.0;        ///< ||2 phi u + trace(adjoint) + e||_{L2(Gamma)}
  double primal_feasibility = 0.0;  ///< max(G, 0), max norm
  double dual_sign = 0.0;           ///< max(-e, 0), max norm
  double complementarity = 0.0;     ///< ||e G||_{L1(Gamma)}

  double max() const;
};

struct KktPoint {
  Field y;
  BoundaryFunction u;
  Field adjoint;
  BoundaryFunction e;
  KktResiduals residuals;
  double cost = 0.0;
};

/// Adjoint with the multiplier eliminated:
///   A p + f_y(y) p = L_y,   d_nA p + g_y(y) p = l_y - 2 phi(mu2) u g_y(y).
/// The right-hand side is the exact derivative of the discrete cost.
Field solve_adjoint_kkt(const DiskMesh& mesh, const Instance& instance, const Field& y, const BoundaryFunction& u,
                        const ParamVector& mu);

struct PenalizedGradient {
  Field adjoint;
  BoundaryFunction gradient;  ///< L2(Gamma) Riesz representative
};

/// Gradient of u -> J(S(u), u) + <w, g(y) + u> at the state y = S(u) (weight
/// w per boundary node; pass a zero function for the plain reduced gradient).
/// The adjoint solves A p + f_y p = L_y + ..., d_nA p = l_y + w g_y(y).
PenalizedGradient penalized_gradient(const DiskMesh& mesh, const RobinOperator& op, const Instance& instance,
                                     const Field& y, const BoundaryFunction& u, const ParamVector& mu,
                                     const BoundaryFunction& weight);

/// Reduced gradient 2 phi(mu2) u + trace(p) of u -> J(S(u), u, mu).
BoundaryFunction reduced_gradient(const DiskMesh& mesh, const Instance& instance, const BoundaryFunction& u,
                                  const BoundaryFunction& lambda1, const ParamVector& mu,
                                  const NewtonOptions& opts = {});

/// e = -(trace(adjoint) + 2 phi(mu2) u). No sign enforcement.
BoundaryFunction recover_multiplier(const DiskMesh& mesh, const Instance& instance, const Field& adjoint,
                                    const BoundaryFunction& u, const ParamVector& mu);

KktResiduals kkt_residuals(const DiskMesh& mesh, const Instance& instance, const KktPoint& point,
                           const ParamVector& mu, const ParamVector& lambda);

/// Fills adjoint, e, residuals and cost of a point whose y and u are set.
void complete_kkt_point(const DiskMesh& mesh, const Instance& instance, KktPoint& point, const ParamVector& mu,
                        const ParamVector& lambda);

/// < trace(adjoint_a) + 2 phi(mu2_a) u_a, G_a - G_b >_{L2(Gamma)}; nonpositive
/// (up to solver slack) when a is a solution and b is feasible.
double vi_check(const DiskMesh& mesh, const Instance& instance, const KktPoint& point_a, const FeasiblePair& pair_b,
                const ParamVector& lambda_b, const ParamVector& mu_a, const ParamVector& lambda_a);

}  // namespace robin
