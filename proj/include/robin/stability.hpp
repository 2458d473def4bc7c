#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "robin/optimize.hpp"

namespace robin {

/// One-sided Hausdorff excess of a beyond b: the largest distance from a point
/// of a to the set b, measured in ||y||_Y + ||u||_{L2(Gamma)}. Throws
/// EmptySetError when either set is empty.
double excess(const DiskMesh& mesh, const SolutionSet& a, const SolutionSet& b);

/// Perturbations base + factor * direction for each decay factor. The
/// direction carries both the mu increment (mu1, mu2) and the lambda
/// increment (lambda1, lambda2).
struct SweepSchedule {
  ParamVector base;
  ParamVector direction;
  std::vector<double> factors;  ///< strictly decreasing, positive

  void validate(const DiskMesh& mesh) const;
};

enum class ScheduleKind { lambda1_bump, lambda2_bump, mu1_shift, mu2_shift };

ScheduleKind parse_schedule_kind(const std::string& name);
std::string to_string(ScheduleKind kind);

/// Boundary bump max(cos(angle), 0)^2 for the lambda schedules, constants for
/// the mu shifts; factors 2^-k for k = 0..k_max.
SweepSchedule make_schedule(const DiskMesh& mesh, const Instance& instance, ScheduleKind kind, double amplitude,
                            int k_max);

struct SweepRecord {
  int n = 0;  ///< 0 is the base point, n >= 1 the n-th factor
  double param_distance = 0.0;
  double excess = 0.0;
  double value_gap = 0.0;
  double control_gap = 0.0;
  double state_gap = 0.0;
  double value = 0.0;
  bool outside_radius = false;
  bool failed = false;
  std::string message;

  std::string flags() const;
};

struct SweepResult {
  SolutionSet base;
  std::vector<SweepRecord> records;  ///< ordered by n
};

/// Solves the base point and every perturbed point, comparing each solution
/// set with the base one. Row 0 is an independent re-solve at the base point.
/// Rows run concurrently; failed rows are marked, not thrown.
SweepResult sweep(const DiskMesh& mesh, const Instance& instance, const SweepSchedule& schedule,
                  const SolveOptions& opts = {});

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

struct UnboundedRow {
  int n = 0;
  bool feasible = false;
  double control_norm = 0.0;  ///< ||u_n||_{L2(Gamma)}
};

/// Controls u_n = -n with lambda = 0 for n = 1..n_max: each pair (S(u_n), u_n)
/// is admissible while ||u_n|| grows without bound. Requires g = 0.
std::vector<UnboundedRow> demo_unbounded(const DiskMesh& mesh, const Instance& instance, int n_max,
                                         const NewtonOptions& opts = {});

void write_unbounded_csv(std::ostream& out, const std::vector<UnboundedRow>& rows);

}  // namespace robin
