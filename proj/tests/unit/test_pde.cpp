#include <gtest/gtest.h>

#include <cmath>

#include "robin/pde.hpp"
#include "robin/problem.hpp"

using namespace robin;

namespace {

// y = r^2 solves -laplace y + y = r^2 - 4 with d_n y = 2 on the unit circle.
double manufactured_error(int rings) {
  const auto m = DiskMesh::build(rings, 8 * rings);
  const Field theta = make_field(m, [](const Point& x) { return x.x1 * x.x1 + x.x2 * x.x2 - 4.0; });
  const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(1.0), zero_field(m), constant_boundary(m, 0.0),
                                     theta, constant_boundary(m, 2.0));
  return l2_error(m, y, [](const Point& x) { return x.x1 * x.x1 + x.x2 * x.x2; });
}

NonlinearTerm cubic() {
  return {[](const Point&, double y) { return y * y * y; }, [](const Point&, double y) { return 3 * y * y; }};
}

}  // namespace

TEST(LinearRobin, ZeroDataGivesZero) {
  const auto m = DiskMesh::build(4, 16);
  const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(), zero_field(m), constant_boundary(m, 0.0),
                                     zero_field(m), constant_boundary(m, 0.0));
  EXPECT_EQ(cmax(y), 0.0);
}

TEST(LinearRobin, ConstantSolvesConstantLoad) {
  // -laplace y + y = 3 with d_n y = 0 has y = 3.
  const auto m = DiskMesh::build(4, 16);
  const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(), zero_field(m), constant_boundary(m, 0.0),
                                     Field::constant(m.node_count(), 3.0), constant_boundary(m, 0.0));
  for (Eigen::Index i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], 3.0, 1e-12);
}

TEST(LinearRobin, ManufacturedSolutionConvergesAtSecondOrder) {
  const double e1 = manufactured_error(4), e2 = manufactured_error(8), e3 = manufactured_error(16);
  EXPECT_GT(e1 / e2, 3.4);
  EXPECT_LT(e1 / e2, 4.6);
  EXPECT_GT(e2 / e3, 3.4);
  EXPECT_LT(e2 / e3, 4.6);
}

TEST(LinearRobin, BesselProfileAtTheCentre) {
  // -laplace y + y = 0, d_n y = 1: y(r) = I0(r) / I1(1); 1 / I1(1) from the series.
  const auto m = DiskMesh::build(16, 128);
  const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(), zero_field(m), constant_boundary(m, 0.0),
                                     zero_field(m), constant_boundary(m, 1.0));
  EXPECT_NEAR(y[0], 1.7694132376805826, 5e-3);
  EXPECT_NEAR(trace(m, y)[0], 2.2401937238700897, 5e-3);
}

TEST(LinearRobin, RobinTermShiftsTheSolution) {
  // d_n y + y = 1 with -laplace y + y = 1: y = 1.
  const auto m = DiskMesh::build(4, 16);
  const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(), zero_field(m), constant_boundary(m, 1.0),
                                     Field::constant(m.node_count(), 1.0), constant_boundary(m, 1.0));
  EXPECT_NEAR(cmax(y - Field::constant(m.node_count(), 1.0)), 0.0, 1e-12);
}

TEST(LinearRobin, PureNeumannWithoutReactionIsSingular) {
  const auto m = DiskMesh::build(3, 12);
  EXPECT_THROW(solve_linear_robin(m, EllipticCoefficients::laplacian(0.0), zero_field(m), constant_boundary(m, 0.0),
                                  zero_field(m), constant_boundary(m, 1.0)),
               SingularSystemError);
}

TEST(LinearRobin, RejectsBadInput) {
  const auto m = DiskMesh::build(3, 12);
  BoundaryFunction psi = constant_boundary(m, 1.0);
  EXPECT_THROW(solve_linear_robin(m, EllipticCoefficients::laplacian(), Field::constant(m.node_count(), -1.0),
                                  constant_boundary(m, 0.0), zero_field(m), psi),
               InputError);
  EXPECT_THROW(solve_linear_robin(m, EllipticCoefficients::laplacian(), zero_field(m), constant_boundary(m, 0.0),
                                  Field::zero(4), psi),
               InputError);
  psi[0] = std::nan("");
  EXPECT_THROW(solve_linear_robin(m, EllipticCoefficients::laplacian(), zero_field(m), constant_boundary(m, 0.0),
                                  zero_field(m), psi),
               InputError);
}

TEST(Newton, ConvergesQuadratically) {
  const auto m = DiskMesh::build(8, 64);
  NewtonTrace trace;
  const Field y = solve_semilinear_robin(m, EllipticCoefficients::laplacian(), cubic(), NonlinearTerm{}, zero_field(m),
                                         constant_boundary(m, 1.0), {}, &trace);
  ASSERT_GE(trace.residuals.size(), 3u);
  EXPECT_LT(trace.residuals.back(), 1e-10);
  for (std::size_t k = 0; k + 1 < trace.residuals.size(); ++k)
    if (trace.residuals[k] < 1e-2 && trace.residuals[k + 1] > 1e-14)
      EXPECT_LE(trace.residuals[k + 1] / (trace.residuals[k] * trace.residuals[k]), 10.0);
  EXPECT_GT(y[0], 0.0);
}

TEST(Newton, ResidualOfTheReturnedStateIsBelowTolerance) {
  const auto m = DiskMesh::build(6, 48);
  const RobinOperator op(m, EllipticCoefficients::laplacian());
  const Eigen::VectorXd rhs = op.load(zero_field(m), constant_boundary(m, -2.0));
  const Field y = op.solve_semilinear(cubic(), cubic(), rhs, {});
  EXPECT_LT(op.semilinear_residual(y.values, cubic(), cubic(), rhs).norm(), 1e-10);
}

TEST(Newton, ReportsNonConvergence) {
  const auto m = DiskMesh::build(6, 48);
  NewtonOptions opts;
  opts.max_iterations = 1;
  try {
    solve_semilinear_robin(m, EllipticCoefficients::laplacian(), cubic(), NonlinearTerm{}, zero_field(m),
                           constant_boundary(m, 5.0), opts);
    FAIL() << "expected a convergence error";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.last_residual(), opts.tolerance);
  }
}

TEST(Newton, OptionValidation) {
  EXPECT_THROW((NewtonOptions{0.0, 10, 1.0}).validate(), ParameterError);
  EXPECT_THROW((NewtonOptions{1e-10, 0, 1.0}).validate(), ParameterError);
  EXPECT_THROW((NewtonOptions{1e-10, 10, 1.5}).validate(), ParameterError);
  EXPECT_THROW((NewtonOptions{1e-10, 10, 1.0, -1}).validate(), ParameterError);
}

TEST(SolveState, QuarticStateWithUnitControl) {
  const auto m = DiskMesh::build(8, 64);
  const auto inst = builtin_example_quartic();
  NewtonTrace nt;
  const Field y = solve_state(m, inst, constant_boundary(m, 1.0), constant_boundary(m, 0.0), {}, &nt);
  EXPECT_LT(nt.residuals.back(), 1e-10);
  // Rotational symmetry: all boundary values agree.
  const BoundaryFunction t = trace(m, y);
  EXPECT_NEAR(t.values.maxCoeff() - t.values.minCoeff(), 0.0, 1e-10);
}

TEST(SolveState, RejectsNonFiniteControl) {
  const auto m = DiskMesh::build(2, 8);
  BoundaryFunction u = constant_boundary(m, 0.0);
  u[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_state(m, builtin_example_quartic(), u, constant_boundary(m, 0.0)), InputError);
}

TEST(WeakLimit, ErrorsDecreaseWithFrequency) {
  const auto m = DiskMesh::build(16, 128);
  const auto table = weak_limit_experiment(m, EllipticCoefficients::laplacian(), cubic(), NonlinearTerm{},
                                           constant_boundary(m, 0.5), {2, 4, 8, 16});
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_FALSE(table.aliasing_warning);
  for (std::size_t i = 1; i < table.rows.size(); ++i) EXPECT_LT(table.rows[i].error, table.rows[i - 1].error);
}

TEST(WeakLimit, EdgeCases) {
  const auto m = DiskMesh::build(3, 12);
  const auto lap = EllipticCoefficients::laplacian();
  EXPECT_TRUE(weak_limit_experiment(m, lap, cubic(), NonlinearTerm{}, constant_boundary(m, 0.0), {}).rows.empty());
  EXPECT_THROW(weak_limit_experiment(m, lap, cubic(), NonlinearTerm{}, constant_boundary(m, 0.0), {4, 2}),
               ParameterError);
  EXPECT_TRUE(weak_limit_experiment(m, lap, cubic(), NonlinearTerm{}, constant_boundary(m, 0.0), {1, 7})
                  .aliasing_warning);
}
