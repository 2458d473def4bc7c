#include "robin/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>

#include "robin/feasible.hpp"

namespace robin {

namespace {

struct Gaps {
  double combined = 0.0;
  double state = 0.0;
  double control = 0.0;
};

// max over a of min over b, for the combined distance and each component.
Gaps directed_gaps(const DiskMesh& mesh, const SolutionSet& a, const SolutionSet& b) {
  if (a.points.empty() || b.points.empty()) throw EmptySetError("excess: solution sets must be nonempty");
  Gaps g;
  for (const auto& p : a.points) {
    Gaps best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    for (const auto& q : b.points) {
      const double s = state_norm(mesh, p.y - q.y);
      const double c = l2_boundary(mesh, p.u - q.u);
      best.combined = std::min(best.combined, s + c);
      best.state = std::min(best.state, s);
      best.control = std::min(best.control, c);
    }
    g.combined = std::max(g.combined, best.combined);
    g.state = std::max(g.state, best.state);
    g.control = std::max(g.control, best.control);
  }
  return g;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double excess(const DiskMesh& mesh, const SolutionSet& a, const SolutionSet& b) {
  return directed_gaps(mesh, a, b).combined;
}

void SweepSchedule::validate(const DiskMesh& mesh) const {
  check_shape(mesh, base, "sweep base");
  check_shape(mesh, direction, "sweep direction");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i] > 0.0) || !std::isfinite(factors[i]))
      throw ParameterError("sweep: decay factors must be positive and finite");
    if (i > 0 && !(factors[i] < factors[i - 1]))
      throw ParameterError("sweep: decay factors must be strictly decreasing");
  }
}

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "lambda1-bump") return ScheduleKind::lambda1_bump;
  if (name == "lambda2-bump") return ScheduleKind::lambda2_bump;
  if (name == "mu1-shift") return ScheduleKind::mu1_shift;
  if (name == "mu2-shift") return ScheduleKind::mu2_shift;
  throw ParameterError("unknown schedule '" + name + "' (expected lambda1-bump, lambda2-bump, mu1-shift, mu2-shift)");
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::lambda1_bump: return "lambda1-bump";
    case ScheduleKind::lambda2_bump: return "lambda2-bump";
    case ScheduleKind::mu1_shift: return "mu1-shift";
    case ScheduleKind::mu2_shift: return "mu2-shift";
  }
  return "unknown";
}

SweepSchedule make_schedule(const DiskMesh& mesh, const Instance& inst, ScheduleKind kind, double amplitude,
                            int k_max) {
  if (!std::isfinite(amplitude)) throw ParameterError("schedule: amplitude must be finite");
  if (k_max < -1) throw ParameterError("schedule: k_max must be >= -1");
  SweepSchedule s;
  s.base = reference_params(mesh, inst);
  s.direction = ParamVector::zeros(mesh);
  BoundaryFunction bump = constant_boundary(mesh, 0.0);
  for (Eigen::Index j = 0; j < bump.size(); ++j) {
    const double c = std::max(std::cos(mesh.boundary_angle(j)), 0.0);
    bump[j] = amplitude * c * c;
  }
  switch (kind) {
    case ScheduleKind::lambda1_bump: s.direction.lambda1 = bump; break;
    case ScheduleKind::lambda2_bump: s.direction.lambda2 = bump; break;
    case ScheduleKind::mu1_shift: s.direction.mu1 = Field::constant(mesh.node_count(), amplitude); break;
    case ScheduleKind::mu2_shift: s.direction.mu2 = constant_boundary(mesh, amplitude); break;
  }
  for (int k = 0; k <= k_max; ++k) s.factors.push_back(std::ldexp(1.0, -k));
  return s;
}

std::string SweepRecord::flags() const {
  std::string f;
  if (outside_radius) f = "outside_radius";
  if (failed) f += f.empty() ? "failed" : ";failed";
  return f;
}

SweepResult sweep(const DiskMesh& mesh, const Instance& inst, const SweepSchedule& schedule,
                  const SolveOptions& opts) {
  schedule.validate(mesh);
  opts.validate();
  SweepResult result;
  result.base = approximate_solution_set(mesh, inst, schedule.base, schedule.base, opts);

  const int rows = static_cast<int>(schedule.factors.size()) + 1;
  result.records.resize(static_cast<std::size_t>(rows));
  const ParamVector reference = reference_params(mesh, inst);

#pragma omp parallel for schedule(dynamic)
  for (int n = 0; n < rows; ++n) {
    SweepRecord& rec = result.records[static_cast<std::size_t>(n)];
    rec.n = n;
    const double factor = n == 0 ? 0.0 : schedule.factors[static_cast<std::size_t>(n - 1)];
    const ParamVector p = schedule.base + factor * schedule.direction;
    rec.param_distance = param_distance(mesh, p, schedule.base);
    rec.outside_radius = param_distance(mesh, p, reference) > inst.eps0 * (1.0 + 1e-12);
    try {
      const SolutionSet set = approximate_solution_set(mesh, inst, p, p, opts);
      const Gaps g = directed_gaps(mesh, set, result.base);
      rec.excess = g.combined;
      rec.state_gap = g.state;
      rec.control_gap = g.control;
      rec.value = set.value;
      rec.value_gap = std::abs(set.value - result.base.value);
    } catch (const std::exception& ex) {
      rec.failed = true;
      rec.message = ex.what();
      rec.excess = rec.value_gap = rec.control_gap = rec.state_gap = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "n,param_distance,excess,value_gap,control_gap,state_gap,flags\n";
  for (const auto& r : records)
    out << r.n << ',' << num(r.param_distance) << ',' << num(r.excess) << ',' << num(r.value_gap) << ','
        << num(r.control_gap) << ',' << num(r.state_gap) << ',' << r.flags() << '\n';
}

std::vector<UnboundedRow> demo_unbounded(const DiskMesh& mesh, const Instance& inst, int n_max,
                                         const NewtonOptions& opts) {
  if (n_max < 0) throw ParameterError("demo_unbounded: n_max must be >= 0");
  for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j)
    for (double y : {-1.0, 0.5, 2.0})
      if (inst.g_value(mesh.boundary_point(j), y) != 0.0)
        throw ParameterError("demo_unbounded: the instance must have g = 0");
  std::vector<UnboundedRow> rows;
  const ParamVector lambda = ParamVector::zeros(mesh);
  for (int n = 1; n <= n_max; ++n) {
    const BoundaryFunction u = constant_boundary(mesh, -static_cast<double>(n));
    const Field y = solve_state(mesh, inst, u, lambda.lambda1, opts);
    const Membership m = is_member(mesh, inst, y, u, lambda);
    rows.push_back({n, m.member, l2_boundary(mesh, u)});
  }
  return rows;
}

void write_unbounded_csv(std::ostream& out, const std::vector<UnboundedRow>& rows) {
  out << "n,feasible,control_norm\n";
  for (const auto& r : rows) out << r.n << ',' << (r.feasible ? "true" : "false") << ',' << num(r.control_norm) << '\n';
}

}  // namespace robin
