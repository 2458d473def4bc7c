#include "robin/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace robin {

void SolveOptions::validate() const {
  if (!(inner_tolerance > 0.0) || !(outer_tolerance > 0.0)) throw ParameterError("solve: tolerances must be positive");
  if (!(penalty_growth > 1.0)) throw ParameterError("solve: penalty growth factor must exceed 1");
  if (!(penalty_initial > 0.0) || !(penalty_max >= penalty_initial))
    throw ParameterError("solve: penalty must be positive and below its cap");
  if (max_outer < 1 || max_inner < 1 || max_backtracks < 1) throw ParameterError("solve: iteration limits must be >= 1");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ParameterError("solve: Armijo constant must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ParameterError("solve: backtracking factor must lie in (0, 1)");
  if (!(control_bound > 0.0)) throw ParameterError("solve: control bound must be positive");
  if (!(cluster_radius > 0.0)) throw ParameterError("solve: clustering radius must be positive");
  newton.validate();
}

BoundaryFunction seed_control(const DiskMesh& mesh, int seed) {
  if (seed < 0) throw ParameterError("seed_control: seeds must be nonnegative");
  BoundaryFunction u = constant_boundary(mesh, 0.0);
  static constexpr double kConstants[] = {0.0, 0.5, -0.5, 1.0, -1.0};
  if (seed < 5) return constant_boundary(mesh, kConstants[seed]);
  if (seed < 8) {
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      const double a = mesh.boundary_angle(j);
      u[j] = seed == 5 ? std::cos(a) : seed == 6 ? std::sin(a) : std::cos(2.0 * a);
    }
    return u;
  }
  std::mt19937_64 gen(static_cast<std::uint64_t>(seed));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = dist(gen);
  return u;
}

namespace {

struct Iterate {
  BoundaryFunction u;
  Field y;
  BoundaryFunction G;
  double value = 0.0;
  BoundaryFunction grad;
  BoundaryFunction pg;  // projected gradient step P(u - grad) - u
  double pg_norm = std::numeric_limits<double>::infinity();
};

class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const DiskMesh& mesh, const Instance& inst, const ParamVector& mu, const ParamVector& lambda,
                      const SolveOptions& opts, SolveTrace& trace)
      : mesh_(mesh), inst_(inst), mu_(mu), lambda_(lambda), opts_(opts), trace_(trace),
        op_(mesh, inst.coefficients()), f_(inst.state_nonlinearity()) {}

  BoundaryFunction project(BoundaryFunction u) const {
    u.values = u.values.cwiseMax(-opts_.control_bound).cwiseMin(opts_.control_bound);
    return u;
  }

  // Value of J + (1/(2 rho)) sum b (max(e + rho G, 0)^2 - e^2). Empty on a
  // failed state solve.
  std::optional<Iterate> evaluate(const BoundaryFunction& u, const BoundaryFunction& e, double rho,
                                  const Field* guess) {
    Iterate it;
    it.u = u;
    try {
      ++trace_.state_solves;
      it.y = op_.solve_semilinear(f_, NonlinearTerm{}, op_.boundary_load(u + lambda_.lambda1), opts_.newton, guess);
      it.value = eval_cost(mesh_, inst_, it.y, u, mu_);
    } catch (const ConvergenceError&) {
      return std::nullopt;
    } catch (const EvaluationError&) {
      return std::nullopt;
    }
    it.G = constraint_residual(mesh_, inst_, it.y, u, lambda_.lambda2);
    const auto& b = mesh_.boundary_mass();
    double pen = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      const double m = std::max(e[j] + rho * it.G[j], 0.0);
      pen += b[j] * (m * m - e[j] * e[j]);
    }
    it.value += pen / (2.0 * rho);
    if (!std::isfinite(it.value)) return std::nullopt;
    return it;
  }

  BoundaryFunction multiplier(const Iterate& it, const BoundaryFunction& e, double rho) const {
    BoundaryFunction m = e;
    for (Eigen::Index j = 0; j < m.size(); ++j) m[j] = std::max(e[j] + rho * it.G[j], 0.0);
    return m;
  }

  void gradient(Iterate& it, const BoundaryFunction& e, double rho) {
    ++trace_.adjoint_solves;
    it.grad = penalized_gradient(mesh_, op_, inst_, it.y, it.u, mu_, multiplier(it, e, rho)).gradient;
    it.pg = project(it.u - it.grad) - it.u;
    it.pg_norm = l2_boundary(mesh_, it.pg);
  }

  // Projected gradient with Barzilai-Borwein steps and Armijo backtracking;
  // in the roundoff regime, steps must reduce the projected gradient instead.
  Iterate inner(Iterate cur, const BoundaryFunction& e, double rho, OuterRecord& rec) {
    gradient(cur, e, rho);
    double alpha = 1.0;
    bool polish = false;
    for (int k = 0; k < opts_.max_inner; ++k) {
      if (cur.pg_norm <= opts_.inner_tolerance) {
        rec.inner_converged = true;
        return cur;
      }
      rec.inner_iterations = k + 1;
      polish = polish || cur.pg_norm <= opts_.polish_threshold;
      const BoundaryFunction d = project(cur.u - alpha * cur.grad) - cur.u;
      const double slope = boundary_inner(mesh_, cur.grad, d);
      std::optional<Iterate> next;
      double t = 1.0;
      for (int bt = 0; bt < opts_.max_backtracks; ++bt, t *= opts_.backtrack) {
        auto trial = evaluate(cur.u + t * d, e, rho, &cur.y);
        if (!trial) continue;
        if (!polish) {
          if (trial->value <= cur.value + opts_.armijo_c * t * slope) {
            gradient(*trial, e, rho);
            next = std::move(trial);
            break;
          }
        } else {
          gradient(*trial, e, rho);
          if (trial->pg_norm < cur.pg_norm) {
            next = std::move(trial);
            break;
          }
        }
      }
      if (!next) {
        if (polish) return cur;  // stagnated at roundoff
        polish = true;
        continue;
      }
      if (polish) {
        ++rec.polish_steps;
      } else {
        rec.armijo_values.push_back(cur.value);
        rec.armijo_values.push_back(next->value);
        // A tiny accepted step means the value test is resolving roundoff.
        if (t < 1e-6) polish = true;
      }
      const BoundaryFunction s = next->u - cur.u;
      const BoundaryFunction yv = next->grad - cur.grad;
      const double sy = boundary_inner(mesh_, s, yv);
      const double ss = boundary_inner(mesh_, s, s);
      alpha = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : 1.0;
      cur = std::move(*next);
    }
    return cur;
  }

  KktPoint kkt(const Iterate& it) const {
    KktPoint p;
    p.y = it.y;
    p.u = it.u;
    complete_kkt_point(mesh_, inst_, p, mu_, lambda_);
    return p;
  }

 private:
  const DiskMesh& mesh_;
  const Instance& inst_;
  const ParamVector& mu_;
  const ParamVector& lambda_;
  const SolveOptions& opts_;
  SolveTrace& trace_;
  RobinOperator op_;
  NonlinearTerm f_;
};

}  // namespace

KktPoint solve_pmu(const DiskMesh& mesh, const Instance& inst, const ParamVector& mu, const ParamVector& lambda,
                   const BoundaryFunction& start, const SolveOptions& opts, SolveTrace* trace_out) {
  opts.validate();
  check_shape(mesh, mu, "solve_pmu mu");
  check_shape(mesh, lambda, "solve_pmu lambda");
  check_shape(mesh, start, "solve_pmu start");
  if (!start.all_finite()) throw InputError("solve_pmu: start control has non-finite entries");

  SolveTrace local;
  SolveTrace& trace = trace_out ? *trace_out : local;
  trace = SolveTrace{};
  AugmentedLagrangian al(mesh, inst, mu, lambda, opts, trace);

  BoundaryFunction e = constant_boundary(mesh, 0.0);
  double rho = opts.penalty_initial;
  auto first = al.evaluate(al.project(start), e, rho, nullptr);
  if (!first) throw ConvergenceError("solve_pmu: state equation failed at the start control", 0.0);
  Iterate accepted = std::move(*first);
  double accepted_violation = std::numeric_limits<double>::infinity();
  double last_residual = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    OuterRecord rec;
    rec.penalty = rho;
    // Re-evaluate the accepted point under the current (e, rho).
    auto base = al.evaluate(accepted.u, e, rho, &accepted.y);
    if (!base) throw ConvergenceError("solve_pmu: state equation failed at an accepted iterate", last_residual);
    Iterate cand = al.inner(std::move(*base), e, rho, rec);
    const double violation = constraint_violation(cand.G);
    if (violation > accepted_violation + 1e-12) {
      ++trace.rejected;
      if (rho >= opts.penalty_max) break;
      rho = std::min(rho * opts.penalty_growth, opts.penalty_max);
      continue;
    }
    rec.violation = violation;
    trace.outer.push_back(rec);

    const BoundaryFunction e_next = al.multiplier(cand, e, rho);
    const double previous_violation = accepted_violation;
    accepted = std::move(cand);
    accepted_violation = violation;

    KktPoint point = al.kkt(accepted);
    last_residual = point.residuals.max();
    if (last_residual <= opts.outer_tolerance && rec.inner_converged) return point;

    e = e_next;
    if (violation > opts.outer_tolerance && violation > 0.25 * previous_violation && rho < opts.penalty_max)
      rho = std::min(rho * opts.penalty_growth, opts.penalty_max);
  }
  throw ConvergenceError("solve_pmu: no KKT point within " + std::to_string(opts.max_outer) +
                             " outer iterations, largest residual " + std::to_string(last_residual),
                         last_residual);
}

SolutionSet approximate_solution_set(const DiskMesh& mesh, const Instance& inst, const ParamVector& mu,
                                     const ParamVector& lambda, const SolveOptions& opts) {
  opts.validate();
  if (opts.seeds.empty()) throw ParameterError("approximate_solution_set: at least one seed is required");
  const auto n = static_cast<int>(opts.seeds.size());
  std::vector<std::optional<KktPoint>> results(static_cast<std::size_t>(n));
  std::vector<SeedOutcome> outcomes(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    outcomes[k].seed = opts.seeds[k];
    try {
      results[k] = solve_pmu(mesh, inst, mu, lambda, seed_control(mesh, opts.seeds[k]), opts);
      outcomes[k].converged = true;
      outcomes[k].cost = results[k]->cost;
    } catch (const std::exception& ex) {
      outcomes[k].message = ex.what();
    }
  }

  SolutionSet set;
  set.seeds = outcomes;
  set.clustering_radius = opts.cluster_radius;
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (results[static_cast<std::size_t>(i)]) order.push_back(i);
  if (order.empty()) throw EmptySetError("approximate_solution_set: no seed converged");
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return results[static_cast<std::size_t>(a)]->cost < results[static_cast<std::size_t>(b)]->cost;
  });

  set.value = results[static_cast<std::size_t>(order.front())]->cost;
  const double cut = set.value + std::max(opts.value_abs_tolerance, opts.value_rel_tolerance * std::abs(set.value));
  auto near = [&](const std::vector<KktPoint>& pts, const KktPoint& p) {
    return std::any_of(pts.begin(), pts.end(),
                       [&](const KktPoint& q) { return l2_boundary(mesh, p.u - q.u) <= opts.cluster_radius; });
  };
  for (int i : order) {
    KktPoint& p = *results[static_cast<std::size_t>(i)];
    if (p.cost <= cut) {
      if (!near(set.points, p)) {
        set.points.push_back(std::move(p));
        set.point_seeds.push_back(opts.seeds[static_cast<std::size_t>(i)]);
      }
    } else if (!near(set.local_points, p)) {
      set.local_points.push_back(std::move(p));
    }
  }
  return set;
}

}  // namespace robin
