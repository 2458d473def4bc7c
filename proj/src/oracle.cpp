#include "robin/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>

namespace robin {

RadialOde radial_ode_from_instance(const Instance& inst, bool with_constraint_term) {
  for (const Expr* e : {&inst.a11, &inst.a12, &inst.a22, &inst.a0})
    if (!e->is_constant()) throw ParameterError("radial oracle: coefficients must be constant");
  const double a11 = inst.a11({0.0, 0.0}), a12 = inst.a12({0.0, 0.0}), a22 = inst.a22({0.0, 0.0});
  if (a12 != 0.0 || a11 != a22) throw ParameterError("radial oracle: diffusion must be isotropic");
  if (inst.f.depends_on(0) || inst.f.depends_on(1) || inst.g.depends_on(0) || inst.g.depends_on(1))
    throw ParameterError("radial oracle: f and g must not depend on x");
  RadialOde ode;
  ode.alpha = a11;
  ode.a0 = inst.a0({0.0, 0.0});
  const Expr f = inst.f, fy = inst.f_y;
  ode.f = [f](double y) { return f({0.0, 0.0, y}); };
  ode.f_y = [fy](double y) { return fy({0.0, 0.0, y}); };
  if (with_constraint_term) {
    const Expr g = inst.g, gy = inst.g_y;
    ode.k = [g](double y) { return g({0.0, 0.0, y}); };
    ode.k_y = [gy](double y) { return gy({0.0, 0.0, y}); };
  }
  return ode;
}

double RadialProfile::operator()(double r) const {
  const auto n = nodes.size() - 1;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double diff = r - nodes[j];
    if (diff == 0.0) return values[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    num += w * values[j] / diff;
    den += w / diff;
  }
  return num / den;
}

RadialProfile radial_solve(const RadialOde& ode, double c, int grid_size) {
  if (grid_size < 3) throw ParameterError("radial_solve: grid_size must be >= 3");
  if (!std::isfinite(c)) throw ParameterError("radial_solve: boundary value must be finite");
  const int n = grid_size % 2 == 1 ? grid_size : grid_size + 1;  // odd: no node at r = 0
  const int m = n + 1;

  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x[i] = std::cos(std::numbers::pi * i / n);
  // Chebyshev differentiation matrix.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
  auto cw = [&](int i) { return (i == 0 || i == n ? 2.0 : 1.0) * (i % 2 == 0 ? 1.0 : -1.0); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) D(i, j) = cw(i) / cw(j) / (x[i] - x[j]);
  for (int i = 0; i < m; ++i) D(i, i) = -D.row(i).sum();
  const Eigen::MatrixXd D2 = D * D;

  auto residual = [&](const Eigen::VectorXd& y, Eigen::MatrixXd* jac) {
    const Eigen::VectorXd dy = D * y, d2y = D2 * y;
    Eigen::VectorXd r(m);
    if (jac) *jac = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < n; ++i) {
      r[i] = -ode.alpha * (d2y[i] + dy[i] / x[i]) + ode.a0 * y[i] + (ode.f ? ode.f(y[i]) : 0.0);
      if (jac) {
        jac->row(i) = -ode.alpha * (D2.row(i) + D.row(i) / x[i]);
        (*jac)(i, i) += ode.a0 + (ode.f_y ? ode.f_y(y[i]) : 0.0);
      }
    }
    // Outward derivative at x = 1 is y'(1); at x = -1 it is -y'(-1).
    for (int i : {0, n}) {
      const double s = i == 0 ? 1.0 : -1.0;
      r[i] = ode.alpha * s * dy[i] + (ode.k ? ode.k(y[i]) : 0.0) - c;
      if (jac) {
        jac->row(i) = ode.alpha * s * D.row(i);
        (*jac)(i, i) += ode.k_y ? ode.k_y(y[i]) : 0.0;
      }
    }
    return r;
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd J;
  Eigen::VectorXd r = residual(y, &J);
  int it = 0;
  for (; it < 100 && r.lpNorm<Eigen::Infinity>() >= 1e-12; ++it) {
    const Eigen::VectorXd step = J.partialPivLu().solve(-r);
    double t = 1.0;
    Eigen::VectorXd y_new = y + step;
    Eigen::VectorXd r_new = residual(y_new, nullptr);
    for (int h = 0; h < 30 && !(r_new.lpNorm<Eigen::Infinity>() <= r.lpNorm<Eigen::Infinity>()); ++h) {
      t *= 0.5;
      y_new = y + t * step;
      r_new = residual(y_new, nullptr);
    }
    y = y_new;
    r = residual(y, &J);
  }
  const double res = r.lpNorm<Eigen::Infinity>();
  if (!(res < 1e-10)) throw ConvergenceError("radial_solve: Newton did not converge", res);

  RadialProfile p;
  p.nodes.assign(x.data(), x.data() + m);
  p.values.assign(y.data(), y.data() + m);
  p.residual = res;
  p.iterations = it;
  return p;
}

BruteForceResult brute_force_solve(const DiskMesh& mesh, const Instance& inst, const ParamVector& mu,
                                   const ParamVector& lambda) {
  if (mesh.boundary_count() > 8) throw ParameterError("brute_force_solve: at most 8 boundary nodes");
  const auto dim = mesh.boundary_count();
  const auto& b = mesh.boundary_mass();
  const NewtonOptions newton{1e-12, 100, 1.0, 1};
  BruteForceResult best;
  best.cost = std::numeric_limits<double>::infinity();
  double best_objective = std::numeric_limits<double>::infinity();
  long evaluations = 0;

  struct Eval {
    double objective, cost, violation;
  };
  auto evaluate = [&](const BoundaryFunction& u, double w) -> Eval {
    ++evaluations;
    const Field y = solve_state(mesh, inst, u, lambda.lambda1, newton);
    const double J = eval_cost(mesh, inst, y, u, mu);
    const BoundaryFunction G = constraint_residual(mesh, inst, y, u, lambda.lambda2);
    double pen = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) pen += b[j] * std::pow(std::max(G[j], 0.0), 2);
    return {J + w * pen, J, constraint_violation(G)};
  };

  for (double s0 : {0.0, -1.0, 1.0}) {
    BoundaryFunction u = constant_boundary(mesh, s0);
    Eval cur{};
    double step = 1.0;
    for (double w : {1e2, 1e4, 1e6, 1e8}) {
      cur = evaluate(u, w);
      while (step >= 1e-6) {
        bool moved = false;
        // Poll the coordinate directions, then the diagonal: the constant mode
        // carries the negative curvature that single coordinates cannot see.
        for (Eigen::Index j = 0; j <= dim && !moved; ++j) {
          for (double sgn : {1.0, -1.0}) {
            BoundaryFunction trial = u;
            if (j < dim) {
              trial[j] = std::clamp(u[j] + sgn * step, -5.0, 5.0);
            } else {
              for (Eigen::Index i = 0; i < dim; ++i) trial[i] = std::clamp(u[i] + sgn * step, -5.0, 5.0);
            }
            if (cmax(trial - u) == 0.0) continue;
            Eval e{};
            try {
              e = evaluate(trial, w);
            } catch (const Error&) {
              continue;
            }
            if (e.objective < cur.objective) {
              u = trial;
              cur = e;
              moved = true;
              break;
            }
          }
        }
        if (!moved) step *= 0.5;
      }
      step = 1e-2;
    }
    if (cur.objective < best_objective) {
      best_objective = cur.objective;
      best.u = u;
      best.cost = cur.cost;
      best.violation = cur.violation;
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace robin
