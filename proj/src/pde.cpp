#include "robin/pde.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <string>

#include "robin/problem.hpp"

namespace robin {

EllipticCoefficients EllipticCoefficients::laplacian(double a0) {
  return {[](const Point&) { return 1.0; }, [](const Point&) { return 0.0; }, [](const Point&) { return 1.0; },
          [a0](const Point&) { return a0; }};
}

NonlinearTerm NonlinearTerm::zero() {
  return {[](const Point&, double) { return 0.0; }, [](const Point&, double) { return 0.0; }};
}

void NewtonOptions::validate() const {
  if (!(tolerance > 0.0)) throw ParameterError("newton: tolerance must be positive");
  if (max_iterations < 1) throw ParameterError("newton: max_iterations must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ParameterError("newton: damping must lie in (0, 1]");
  if (extra_steps < 0) throw ParameterError("newton: extra_steps must be >= 0");
}

RobinOperator::RobinOperator(const DiskMesh& mesh, const EllipticCoefficients& coeffs, kernels::Exec exec)
    : mesh_(&mesh), exec_(exec) {
  const auto locals = kernels::element_operator(mesh, coeffs, exec);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(locals.size() * 9);
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < locals.size(); ++t)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) triplets.emplace_back(tris[t][static_cast<std::size_t>(i)], tris[t][static_cast<std::size_t>(j)], locals[t][static_cast<std::size_t>(i * 3 + j)]);
  base_.resize(mesh.node_count(), mesh.node_count());
  base_.setFromTriplets(triplets.begin(), triplets.end());
  base_.makeCompressed();
}

Eigen::VectorXd RobinOperator::boundary_load(const BoundaryFunction& psi) const {
  check_shape(*mesh_, psi, "boundary load");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh_->node_count());
  const auto bn = mesh_->boundary_nodes();
  const auto& b = mesh_->boundary_mass();
  for (std::size_t j = 0; j < bn.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out[bn[j]] += b[jj] * psi[jj];
  }
  return out;
}

Eigen::VectorXd RobinOperator::load(const Field& theta, const BoundaryFunction& psi) const {
  check_shape(*mesh_, theta, "load");
  return kernels::mass_apply(*mesh_, theta.values, exec_) + boundary_load(psi);
}

Eigen::VectorXd RobinOperator::solve(const Eigen::VectorXd& c_dom, const Eigen::VectorXd& c_bnd,
                                     const Eigen::VectorXd& rhs) const {
  const auto n = mesh_->node_count();
  if (c_dom.size() != n || c_bnd.size() != mesh_->boundary_count() || rhs.size() != n)
    throw InputError("robin solve: argument sizes do not match the mesh");
  if (!c_dom.allFinite() || !c_bnd.allFinite() || !rhs.allFinite())
    throw InputError("robin solve: non-finite coefficient or right-hand side");

  Eigen::SparseMatrix<double> a = base_;
  const auto& m = mesh_->lumped_mass();
  for (Eigen::Index i = 0; i < n; ++i) a.coeffRef(i, i) += m[i] * c_dom[i];
  const auto bn = mesh_->boundary_nodes();
  const auto& b = mesh_->boundary_mass();
  for (std::size_t j = 0; j < bn.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    a.coeffRef(bn[j], bn[j]) += b[jj] * c_bnd[jj];
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SingularSystemError("robin solve: factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (!(d.minCoeff() > 1e-13 * dmax))
    throw SingularSystemError("robin solve: assembled matrix is singular or indefinite (check coercivity of A)");

  Eigen::VectorXd y = ldlt.solve(rhs);
  // One step of iterative refinement pins the relative residual near 1e-15.
  const Eigen::VectorXd r = rhs - a * y;
  y += ldlt.solve(r);
  return y;
}

Eigen::VectorXd RobinOperator::semilinear_residual(const Eigen::VectorXd& y, const NonlinearTerm& h,
                                                   const NonlinearTerm& k, const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd r = base_ * y - rhs;
  const auto& m = mesh_->lumped_mass();
  if (!h.empty())
    for (Eigen::Index i = 0; i < y.size(); ++i) r[i] += m[i] * h.value(mesh_->node(i), y[i]);
  if (!k.empty()) {
    const auto bn = mesh_->boundary_nodes();
    const auto& b = mesh_->boundary_mass();
    for (std::size_t j = 0; j < bn.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      r[bn[j]] += b[jj] * k.value(mesh_->boundary_point(jj), y[bn[j]]);
    }
  }
  return r;
}

Field RobinOperator::solve_semilinear(const NonlinearTerm& h, const NonlinearTerm& k, const Eigen::VectorXd& rhs,
                                      const NewtonOptions& opts, const Field* initial, NewtonTrace* trace) const {
  opts.validate();
  const auto n = mesh_->node_count();
  const auto nb = mesh_->boundary_count();
  Eigen::VectorXd y = initial ? initial->values : Eigen::VectorXd::Zero(n);
  if (y.size() != n) throw InputError("newton: initial guess has the wrong size");

  Eigen::VectorXd r = semilinear_residual(y, h, k, rhs);
  double rn = r.norm();
  if (trace) {
    trace->residuals.assign(1, rn);
    trace->iterations = 0;
  }
  const auto bn = mesh_->boundary_nodes();
  int extra = 0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (!std::isfinite(rn)) break;
    if (rn < opts.tolerance && extra++ >= opts.extra_steps) break;
    Eigen::VectorXd c_dom = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd c_bnd = Eigen::VectorXd::Zero(nb);
    if (!h.empty())
      for (Eigen::Index i = 0; i < n; ++i) c_dom[i] = h.derivative(mesh_->node(i), y[i]);
    if (!k.empty())
      for (Eigen::Index j = 0; j < nb; ++j) c_bnd[j] = k.derivative(mesh_->boundary_point(j), y[bn[static_cast<std::size_t>(j)]]);
    const Eigen::VectorXd delta = solve(c_dom, c_bnd, -r);

    double step = opts.damping;
    Eigen::VectorXd y_new = y + step * delta;
    Eigen::VectorXd r_new = semilinear_residual(y_new, h, k, rhs);
    for (int halvings = 0; halvings < 40 && !(r_new.norm() <= rn); ++halvings) {
      step *= 0.5;
      y_new = y + step * delta;
      r_new = semilinear_residual(y_new, h, k, rhs);
    }
    y = std::move(y_new);
    r = std::move(r_new);
    rn = r.norm();
    if (trace) {
      trace->residuals.push_back(rn);
      trace->iterations = it + 1;
    }
  }
  if (!(rn < opts.tolerance))
    throw ConvergenceError("newton: no convergence after " + std::to_string(opts.max_iterations) +
                               " iterations, last residual " + std::to_string(rn),
                           rn);
  return Field(std::move(y));
}

Field solve_linear_robin(const DiskMesh& mesh, const EllipticCoefficients& coeffs, const Field& c_dom,
                         const BoundaryFunction& c_bnd, const Field& theta, const BoundaryFunction& psi) {
  check_shape(mesh, c_dom, "solve_linear_robin c_dom");
  check_shape(mesh, c_bnd, "solve_linear_robin c_bnd");
  check_shape(mesh, theta, "solve_linear_robin theta");
  check_shape(mesh, psi, "solve_linear_robin psi");
  if (c_dom.values.minCoeff() < 0.0 || c_bnd.values.minCoeff() < 0.0)
    throw InputError("solve_linear_robin: reaction coefficients must be nonnegative");
  const RobinOperator op(mesh, coeffs);
  return Field(op.solve(c_dom.values, c_bnd.values, op.load(theta, psi)));
}

Field solve_semilinear_robin(const DiskMesh& mesh, const EllipticCoefficients& coeffs, const NonlinearTerm& h,
                             const NonlinearTerm& k, const Field& theta, const BoundaryFunction& psi,
                             const NewtonOptions& opts, NewtonTrace* trace) {
  check_shape(mesh, theta, "solve_semilinear_robin theta");
  check_shape(mesh, psi, "solve_semilinear_robin psi");
  if (!theta.all_finite() || !psi.all_finite()) throw InputError("solve_semilinear_robin: non-finite data");
  const RobinOperator op(mesh, coeffs);
  return op.solve_semilinear(h, k, op.load(theta, psi), opts, nullptr, trace);
}

Field solve_state(const DiskMesh& mesh, const Instance& instance, const BoundaryFunction& u,
                  const BoundaryFunction& lambda1, const NewtonOptions& opts, NewtonTrace* trace) {
  check_shape(mesh, u, "solve_state u");
  check_shape(mesh, lambda1, "solve_state lambda1");
  if (!u.all_finite()) throw InputError("solve_state: control has non-finite entries");
  if (!lambda1.all_finite()) throw InputError("solve_state: lambda1 has non-finite entries");
  const RobinOperator op(mesh, instance.coefficients());
  return op.solve_semilinear(instance.state_nonlinearity(), NonlinearTerm{}, op.boundary_load(u + lambda1), opts,
                             nullptr, trace);
}

WeakLimitTable weak_limit_experiment(const DiskMesh& mesh, const EllipticCoefficients& coeffs, const NonlinearTerm& h,
                                     const NonlinearTerm& k, const BoundaryFunction& psi, const std::vector<int>& modes,
                                     const NewtonOptions& opts) {
  WeakLimitTable table;
  if (modes.empty()) return table;
  for (std::size_t i = 1; i < modes.size(); ++i)
    if (modes[i] <= modes[i - 1]) throw ParameterError("weak_limit_experiment: modes must be strictly increasing");

  const RobinOperator op(mesh, coeffs);
  const Field zero = zero_field(mesh);
  const Field base = op.solve_semilinear(h, k, op.load(zero, psi), opts);
  for (int n : modes) {
    if (2 * n > mesh.n_sectors()) table.aliasing_warning = true;
    BoundaryFunction psi_n = psi;
    for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j) psi_n[j] += std::sin(n * mesh.boundary_angle(j));
    const Field y_n = op.solve_semilinear(h, k, op.load(zero, psi_n), opts, &base);
    table.rows.push_back({n, cmax(y_n - base)});
  }
  return table;
}

}  // namespace robin
