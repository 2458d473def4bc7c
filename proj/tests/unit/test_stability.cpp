#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "robin/stability.hpp"

using namespace robin;

namespace {

KktPoint point_with(const DiskMesh& m, double u, double y) {
  KktPoint p;
  p.u = constant_boundary(m, u);
  p.y = Field::constant(m.node_count(), y);
  return p;
}

SolutionSet set_of(std::vector<KktPoint> pts) {
  SolutionSet s;
  s.points = std::move(pts);
  return s;
}

}  // namespace

TEST(Excess, Examples) {
  const auto m = DiskMesh::build(8, 64);
  const SolutionSet a = set_of({point_with(m, 0.0, 0.0)});
  const SolutionSet b = set_of({point_with(m, 1.0, 0.0)});
  EXPECT_EQ(excess(m, a, a), 0.0);
  // ||1||_{L2(Gamma)} = sqrt of the perimeter.
  EXPECT_NEAR(excess(m, a, b), 2.5061249597554998, 1e-13);
  // One-sided: a subset has no excess over its superset.
  const SolutionSet ab = set_of({point_with(m, 0.0, 0.0), point_with(m, 1.0, 0.0)});
  EXPECT_EQ(excess(m, a, ab), 0.0);
  EXPECT_NEAR(excess(m, ab, a), 2.5061249597554998, 1e-13);
  EXPECT_THROW(excess(m, SolutionSet{}, a), EmptySetError);
  EXPECT_THROW(excess(m, a, SolutionSet{}), EmptySetError);
}

TEST(Excess, ConstantStateDistanceUsesTheStateNorm) {
  const auto m = DiskMesh::build(8, 64);
  const SolutionSet a = set_of({point_with(m, 0.0, 1.0)});
  const SolutionSet b = set_of({point_with(m, 0.0, 0.0)});
  // ||1||_{H1} + ||1||_C = sqrt(area) + 1.
  EXPECT_NEAR(excess(m, a, b), std::sqrt(m.area()) + 1.0, 1e-12);
}

TEST(Schedule, ShapesAndFactors) {
  const auto m = DiskMesh::build(4, 16);
  const auto q = builtin_example_quartic();
  const SweepSchedule s = make_schedule(m, q, ScheduleKind::lambda1_bump, 0.5, 3);
  ASSERT_EQ(s.factors.size(), 4u);
  EXPECT_DOUBLE_EQ(s.factors.back(), 0.125);
  EXPECT_DOUBLE_EQ(s.direction.lambda1[0], 0.5);
  EXPECT_NEAR(s.direction.lambda1[4], 0.0, 1e-16);
  EXPECT_EQ(s.direction.lambda1[8], 0.0);
  EXPECT_EQ(cmax(s.direction.lambda2), 0.0);
  const SweepSchedule mu = make_schedule(m, q, ScheduleKind::mu1_shift, 0.25, 0);
  EXPECT_DOUBLE_EQ(mu.direction.mu1[7], 0.25);
  EXPECT_TRUE(make_schedule(m, q, ScheduleKind::mu2_shift, 0.25, -1).factors.empty());
  for (auto k : {ScheduleKind::lambda1_bump, ScheduleKind::lambda2_bump, ScheduleKind::mu1_shift,
                 ScheduleKind::mu2_shift})
    EXPECT_EQ(parse_schedule_kind(to_string(k)), k);
  EXPECT_THROW(parse_schedule_kind("bump"), ParameterError);
  SweepSchedule bad = s;
  bad.factors = {0.5, 1.0};
  EXPECT_THROW(bad.validate(m), ParameterError);
  bad.factors = {1.0, -0.5};
  EXPECT_THROW(bad.validate(m), ParameterError);
}

TEST(Sweep, EmptyFactorsGiveTheBaseRowOnly) {
  const auto m = DiskMesh::build(3, 12);
  const auto q = builtin_example_quartic();
  SolveOptions o;
  o.seeds = {1, 4};
  const SweepResult r = sweep(m, q, make_schedule(m, q, ScheduleKind::lambda1_bump, 0.5, -1), o);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].n, 0);
  EXPECT_EQ(r.records[0].param_distance, 0.0);
  EXPECT_LT(r.records[0].excess, 1e-9);
  EXPECT_EQ(r.records[0].flags(), "");
}

TEST(Sweep, RadiusFlagAndGapsShrink) {
  const auto m = DiskMesh::build(3, 12);
  const auto q = builtin_example_quartic();
  SolveOptions o;
  o.seeds = {1, 4};
  const SweepResult r = sweep(m, q, make_schedule(m, q, ScheduleKind::lambda1_bump, 2.0, 3), o);
  ASSERT_EQ(r.records.size(), 5u);
  for (const auto& rec : r.records) EXPECT_FALSE(rec.failed) << rec.message;
  EXPECT_TRUE(r.records[1].outside_radius);
  EXPECT_FALSE(r.records[4].outside_radius);
  EXPECT_LT(r.records[4].excess, r.records[1].excess);
  EXPECT_LT(r.records[4].value_gap, r.records[1].value_gap);
}

TEST(Sweep, CsvLayout) {
  SweepRecord a;
  a.n = 1;
  a.param_distance = 0.5;
  a.outside_radius = true;
  a.failed = true;
  std::ostringstream os;
  write_sweep_csv(os, {a});
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "n,param_distance,excess,value_gap,control_gap,state_gap,flags");
  EXPECT_NE(s.find("1,0.5,0,0,0,0,outside_radius;failed"), std::string::npos);
}

TEST(Unbounded, ControlsGrowWhileStayingFeasible) {
  const auto m = DiskMesh::build(8, 64);
  const auto inst = builtin_example_unbounded();
  const auto rows = demo_unbounded(m, inst, 10);
  ASSERT_EQ(rows.size(), 10u);
  const double root = std::sqrt(128.0 * std::sin(std::numbers::pi / 64));
  for (const auto& r : rows) {
    EXPECT_TRUE(r.feasible) << "n = " << r.n;
    EXPECT_NEAR(r.control_norm, r.n * root, 1e-12 * r.n);
    EXPECT_NEAR(r.control_norm / (r.n * std::sqrt(2 * std::numbers::pi)), 1.0, 1e-2);
  }
  EXPECT_TRUE(demo_unbounded(m, inst, 0).empty());
  EXPECT_EQ(demo_unbounded(m, inst, 1).size(), 1u);
  EXPECT_THROW(demo_unbounded(m, inst, -1), ParameterError);
  EXPECT_THROW(demo_unbounded(m, builtin_example_quartic(), 3), ParameterError);
  std::ostringstream os;
  write_unbounded_csv(os, {rows[0]});
  EXPECT_EQ(os.str().substr(0, 23), "n,feasible,control_norm");
  EXPECT_NE(os.str().find("1,true,"), std::string::npos);
}
