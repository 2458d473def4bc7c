#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>
#include <vector>

#include "robin/coefficients.hpp"
#include "robin/geometry.hpp"
#include "robin/kernels.hpp"

namespace robin {

struct Instance;

struct NewtonOptions {
  double tolerance = 1e-10;  ///< on the Euclidean norm of the assembled residual
  int max_iterations = 100;
  double damping = 1.0;  ///< initial step fraction; halved while the residual grows
  int extra_steps = 0;   ///< full Newton steps taken after the tolerance is met

  void validate() const;
};

struct NewtonTrace {
  std::vector<double> residuals;  ///< residual before each step, then the final one
  int iterations = 0;
};

/// P1 discretization of the Robin problem
///
///   A y + c_dom y = theta  in Omega,   d_nA y + c_bnd y = psi  on Gamma
///
/// for a fixed mesh and operator A. Holds the assembled stiffness + a0 mass
/// matrix; each solve adds the reaction terms to the diagonal (lumped domain
/// mass, trapezoid boundary mass) and factorizes with sparse LDL^T. The mesh
/// must outlive the operator.
class RobinOperator {
 public:
  RobinOperator(const DiskMesh& mesh, const EllipticCoefficients& coeffs,
                kernels::Exec exec = kernels::Exec::parallel);

  const DiskMesh& mesh() const { return *mesh_; }
  const Eigen::SparseMatrix<double>& matrix() const { return base_; }

  /// Weak right-hand side: consistent mass applied to theta plus trapezoid
  /// boundary weights applied to psi.
  Eigen::VectorXd load(const Field& theta, const BoundaryFunction& psi) const;
  /// Boundary part only, scattered to mesh nodes.
  Eigen::VectorXd boundary_load(const BoundaryFunction& psi) const;

  /// Solves (K + diag(m c_dom) + B diag(c_bnd)) y = rhs, where m is the lumped
  /// mass and B the boundary trapezoid weights. c_dom is nodal (size N),
  /// c_bnd per boundary index. Throws SingularSystemError.
  Eigen::VectorXd solve(const Eigen::VectorXd& c_dom, const Eigen::VectorXd& c_bnd, const Eigen::VectorXd& rhs) const;

  /// Residual  K y + m h(x, y) + B k(x, y) - rhs  of the semilinear problem.
  Eigen::VectorXd semilinear_residual(const Eigen::VectorXd& y, const NonlinearTerm& h, const NonlinearTerm& k,
                                      const Eigen::VectorXd& rhs) const;

  /// Damped Newton for the semilinear problem; each step is a `solve` with
  /// c_dom = h_y and c_bnd = k_y. Throws ConvergenceError.
  Field solve_semilinear(const NonlinearTerm& h, const NonlinearTerm& k, const Eigen::VectorXd& rhs,
                         const NewtonOptions& opts, const Field* initial = nullptr, NewtonTrace* trace = nullptr) const;

 private:
  const DiskMesh* mesh_;
  kernels::Exec exec_;
  Eigen::SparseMatrix<double> base_;
};

Field solve_linear_robin(const DiskMesh& mesh, const EllipticCoefficients& coeffs, const Field& c_dom,
                         const BoundaryFunction& c_bnd, const Field& theta, const BoundaryFunction& psi);

Field solve_semilinear_robin(const DiskMesh& mesh, const EllipticCoefficients& coeffs, const NonlinearTerm& h,
                             const NonlinearTerm& k, const Field& theta, const BoundaryFunction& psi,
                             const NewtonOptions& opts = {}, NewtonTrace* trace = nullptr);

/// State equation  A y + f(x, y) = 0,  d_nA y = u + lambda1.
Field solve_state(const DiskMesh& mesh, const Instance& instance, const BoundaryFunction& u,
                  const BoundaryFunction& lambda1, const NewtonOptions& opts = {}, NewtonTrace* trace = nullptr);

struct WeakLimitRow {
  int mode = 0;
  double error = 0.0;  ///< max-norm distance between the perturbed and base solutions
};

struct WeakLimitTable {
  std::vector<WeakLimitRow> rows;
  bool aliasing_warning = false;  ///< some mode exceeds the boundary Nyquist limit n_sectors / 2
};

/// Solves with boundary data psi + sin(n * angle) for each mode n and records
/// how far each solution is from the solution with data psi.
WeakLimitTable weak_limit_experiment(const DiskMesh& mesh, const EllipticCoefficients& coeffs, const NonlinearTerm& h,
                                     const NonlinearTerm& k, const BoundaryFunction& psi, const std::vector<int>& modes,
                                     const NewtonOptions& opts = {});

}  // namespace robin
