#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <random>

#include "robin/adjoint.hpp"
#include "robin/feasible.hpp"
#include "robin/pde.hpp"

using namespace robin;

namespace {

Instance with(const Instance& base, const std::string& key, const std::string& value) {
  auto j = nlohmann::json::parse(base.to_json());
  j[key] = value;
  return parse_instance(j.dump());
}

BoundaryFunction random_control(const DiskMesh& m, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-scale, scale);
  BoundaryFunction u = constant_boundary(m, 0.0);
  for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = U(rng);
  return u;
}

double reduced_cost(const DiskMesh& m, const Instance& inst, const BoundaryFunction& u, const ParamVector& mu) {
  const Field y = solve_state(m, inst, u, mu.lambda1, {1e-13, 100, 1.0, 1});
  return eval_cost(m, inst, y, u, mu);
}

// Largest normwise relative error between the central difference quotient
// and the nodal derivative b_j g_j of the discrete reduced cost.
double fd_error(const DiskMesh& m, const Instance& inst, const BoundaryFunction& u, const ParamVector& mu, double h) {
  const BoundaryFunction g = reduced_gradient(m, inst, u, mu.lambda1, mu, {1e-13, 100, 1.0, 1});
  Eigen::VectorXd fd(u.size()), an(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    BoundaryFunction up = u, dn = u;
    up[j] += h;
    dn[j] -= h;
    fd[j] = (reduced_cost(m, inst, up, mu) - reduced_cost(m, inst, dn, mu)) / (2 * h);
    an[j] = m.boundary_mass()[j] * g[j];
  }
  return (fd - an).norm() / an.norm();
}

}  // namespace

TEST(Adjoint, ConvexInstanceHasZeroAdjointAndGradientTwoU) {
  const auto m = DiskMesh::build(4, 16);
  const auto c = builtin_instance("convex");
  const ParamVector mu = ParamVector::zeros(m);
  const BoundaryFunction u = random_control(m, 3, 1.0);
  const BoundaryFunction g = reduced_gradient(m, c, u, mu.lambda1, mu);
  EXPECT_LT(cmax(g - 2.0 * u), 1e-15);
  const Field y = solve_state(m, c, u, mu.lambda1);
  EXPECT_EQ(cmax(solve_adjoint_kkt(m, c, y, u, mu)), 0.0);
}

TEST(Adjoint, LinearRunningCostGivesTheConstantAdjoint) {
  // L = y: the adjoint solves -laplace p + p = 1 with d_n p = 0, so p = 1.
  const auto m = DiskMesh::build(6, 48);
  const auto inst = with(builtin_instance("convex"), "L", "y");
  const ParamVector mu = ParamVector::zeros(m);
  const BoundaryFunction u = constant_boundary(m, 0.3);
  const Field y = solve_state(m, inst, u, mu.lambda1);
  const Field p = solve_adjoint_kkt(m, inst, y, u, mu);
  EXPECT_LT(cmax(p - Field::constant(m.node_count(), 1.0)), 1e-12);
  const BoundaryFunction g = reduced_gradient(m, inst, u, mu.lambda1, mu);
  EXPECT_LT(cmax(g - constant_boundary(m, 1.6)), 1e-12);
}

TEST(Adjoint, GradientMatchesCentralDifferences) {
  const auto m = DiskMesh::build(4, 16);
  const auto q = builtin_example_quartic();
  ParamVector mu = ParamVector::zeros(m);
  mu.mu2 = constant_boundary(m, 0.3);
  mu.lambda1 = constant_boundary(m, 0.2);
  for (unsigned s = 0; s < 5; ++s) EXPECT_LT(fd_error(m, q, random_control(m, 11 + s, 1.0), mu, 1e-5), 1e-6);
}

TEST(Adjoint, DifferenceQuotientErrorIsSecondOrder) {
  const auto m = DiskMesh::build(3, 12);
  const auto q = builtin_example_quartic();
  const ParamVector mu = ParamVector::zeros(m);
  const BoundaryFunction u = random_control(m, 5, 1.5);
  const double e1 = fd_error(m, q, u, mu, 4e-2), e2 = fd_error(m, q, u, mu, 2e-2), e3 = fd_error(m, q, u, mu, 1e-2);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
  EXPECT_NEAR(e2 / e3, 4.0, 0.6);
}

TEST(Adjoint, EliminationMatchesThePenalizedForm) {
  // With weight e = -(trace(p) + 2 phi u) the two adjoint systems coincide.
  const auto m = DiskMesh::build(6, 48);
  const auto q = with(builtin_example_quartic(), "g", "y + y^3");
  ParamVector mu = ParamVector::zeros(m);
  mu.mu1 = Field::constant(m.node_count(), 0.2);
  const BoundaryFunction u = random_control(m, 9, 0.7);
  const Field y = solve_state(m, q, u, mu.lambda1, {1e-13, 100, 1.0, 1});
  const Field p = solve_adjoint_kkt(m, q, y, u, mu);
  const BoundaryFunction e = recover_multiplier(m, q, p, u, mu);
  const RobinOperator op(m, q.coefficients());
  const PenalizedGradient pg = penalized_gradient(m, op, q, y, u, mu, e);
  EXPECT_LT(cmax(pg.adjoint - p) / std::max(1.0, cmax(p)), 1e-12);
  EXPECT_LT(cmax(pg.gradient), 1e-11);
}

TEST(Multiplier, RecoveryExamples) {
  const auto m = DiskMesh::build(4, 16);
  const auto q = builtin_example_quartic();
  const ParamVector mu = ParamVector::zeros(m);
  const BoundaryFunction e0 = recover_multiplier(m, q, zero_field(m), constant_boundary(m, 0.0), mu);
  EXPECT_EQ(cmax(e0), 0.0);
  // phi(0) = 1, trace 1, u = 1: e = -(1 + 2) = -3.
  const BoundaryFunction e1 =
      recover_multiplier(m, q, Field::constant(m.node_count(), 1.0), constant_boundary(m, 1.0), mu);
  EXPECT_NEAR(e1.values.maxCoeff(), -3.0, 1e-15);
  EXPECT_NEAR(e1.values.minCoeff(), -3.0, 1e-15);
}

TEST(Kkt, ResidualExamples) {
  const auto m = DiskMesh::build(4, 16);
  const auto q = builtin_example_quartic();
  const ParamVector zero = ParamVector::zeros(m);
  KktPoint pt;
  pt.y = zero_field(m);
  pt.u = constant_boundary(m, 0.0);
  complete_kkt_point(m, q, pt, zero, zero);
  EXPECT_EQ(pt.residuals.max(), 0.0);
  EXPECT_EQ(pt.cost, 0.0);

  // A made-up point: u = 1, e = -1 violates everything in a known way.
  pt.y = zero_field(m);
  pt.u = constant_boundary(m, 1.0);
  pt.adjoint = zero_field(m);
  pt.e = constant_boundary(m, -1.0);
  const KktResiduals r = kkt_residuals(m, q, pt, zero, zero);
  const double perim = m.boundary_measure();
  EXPECT_NEAR(r.stationarity, std::sqrt(perim), 1e-13);
  EXPECT_DOUBLE_EQ(r.primal_feasibility, 1.0);
  EXPECT_DOUBLE_EQ(r.dual_sign, 1.0);
  EXPECT_NEAR(r.complementarity, perim, 1e-13);
  EXPECT_DOUBLE_EQ(r.max(), perim);
}

TEST(Kkt, ActiveConstraintOnTheConvexInstance) {
  // lambda2 = 1 forces u <= -1; the minimizer is u = -1 with e = 2.
  const auto m = DiskMesh::build(4, 16);
  const auto c = builtin_instance("convex");
  const ParamVector mu = ParamVector::zeros(m);
  ParamVector lam = ParamVector::zeros(m);
  lam.lambda2 = constant_boundary(m, 1.0);
  KktPoint pt;
  pt.u = constant_boundary(m, -1.0);
  pt.y = solve_state(m, c, pt.u, lam.lambda1);
  complete_kkt_point(m, c, pt, mu, lam);
  EXPECT_LT(cmax(pt.e - constant_boundary(m, 2.0)), 1e-14);
  EXPECT_LT(pt.residuals.max(), 1e-13);
  EXPECT_NEAR(pt.cost, m.boundary_measure(), 1e-13);
}

TEST(VariationalInequality, SelfComparisonIsZeroAndCompetitorsAreNonpositive) {
  const auto m = DiskMesh::build(4, 16);
  const auto c = builtin_instance("convex");
  const ParamVector mu = ParamVector::zeros(m);
  ParamVector lam = ParamVector::zeros(m);
  lam.lambda2 = constant_boundary(m, 1.0);
  KktPoint pt;
  pt.u = constant_boundary(m, -1.0);
  pt.y = solve_state(m, c, pt.u, lam.lambda1);
  complete_kkt_point(m, c, pt, mu, lam);
  EXPECT_EQ(vi_check(m, c, pt, {pt.y, pt.u}, lam, mu, lam), 0.0);
  for (unsigned s = 0; s < 10; ++s) {
    BoundaryFunction slack = random_control(m, 100 + s, 1.0);
    slack.values = slack.values.cwiseAbs();
    const FeasiblePair b = construct_feasible_with_slack(m, c, lam, slack, {});
    EXPECT_LE(vi_check(m, c, pt, b, lam, mu, lam), 1e-12);
  }
  // A non-optimal point fails the audit against some competitor.
  KktPoint bad;
  bad.u = constant_boundary(m, -2.0);
  bad.y = solve_state(m, c, bad.u, lam.lambda1);
  complete_kkt_point(m, c, bad, mu, lam);
  EXPECT_GT(vi_check(m, c, bad, construct_feasible(m, c, lam), lam, mu, lam), 0.0);
}
