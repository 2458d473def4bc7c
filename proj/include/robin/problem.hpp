#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robin/coefficients.hpp"
#include "robin/expr.hpp"
#include "robin/geometry.hpp"

namespace robin {

/// Data of the parametric problem
///
///   min  int_Omega L(x, y, mu1) + int_Gamma l(x', y, mu2) + phi(mu2) u^2
///   s.t. A y + f(x, y) = 0,  d_nA y = u + lambda1,  g(x', y) + u + lambda2 <= 0.
///
/// All data are expressions in the closed grammar of `Expr`; derivatives are
/// symbolic. Variable conventions: L(x1, x2, y, mu1), l(x1, x2, y, mu2),
/// phi(t), f(x1, x2, y), g(x1, x2, y), coefficients and reference parameters
/// in (x1, x2).
struct Instance {
  std::string name;
  Expr L, L_y;
  Expr l, l_y;
  Expr phi;
  Expr f, f_y;
  Expr g, g_y;
  Expr a11, a12, a22, a0;
  Expr mu1_bar, mu2_bar, lambda1_bar, lambda2_bar;
  double eps0 = 1.0;
  double gamma = 0.5;
  double k_phi = 1.0;
  double theta = 1.0;

  double running_cost(const Point& x, double y, double mu1) const { return L({x.x1, x.x2, y, mu1}); }
  double running_cost_y(const Point& x, double y, double mu1) const { return L_y({x.x1, x.x2, y, mu1}); }
  double boundary_cost(const Point& x, double y, double mu2) const { return l({x.x1, x.x2, y, mu2}); }
  double boundary_cost_y(const Point& x, double y, double mu2) const { return l_y({x.x1, x.x2, y, mu2}); }
  double control_weight(double mu2) const { return phi({mu2}); }
  double f_value(const Point& x, double y) const { return f({x.x1, x.x2, y}); }
  double f_deriv(const Point& x, double y) const { return f_y({x.x1, x.x2, y}); }
  double g_value(const Point& x, double y) const { return g({x.x1, x.x2, y}); }
  double g_deriv(const Point& x, double y) const { return g_y({x.x1, x.x2, y}); }

  EllipticCoefficients coefficients() const;
  NonlinearTerm state_nonlinearity() const;     ///< f
  NonlinearTerm constraint_nonlinearity() const;  ///< g

  /// Canonical JSON text of the instance (the file format).
  std::string to_json() const;
  /// FNV-1a hash of the canonical JSON.
  std::uint64_t hash() const;
};

/// Parameters (mu, lambda): mu1 nodal on Omega, the rest per boundary node.
struct ParamVector {
  Field mu1;
  BoundaryFunction mu2;
  BoundaryFunction lambda1;
  BoundaryFunction lambda2;

  static ParamVector zeros(const DiskMesh& mesh);
  ParamVector& operator+=(const ParamVector& o);
  friend ParamVector operator+(ParamVector a, const ParamVector& b) { return a += b; }
  friend ParamVector operator*(double s, ParamVector a);
};

void check_shape(const DiskMesh& mesh, const ParamVector& p, const char* what);

/// The reference point (mu_bar, lambda_bar) sampled on the mesh.
ParamVector reference_params(const DiskMesh& mesh, const Instance& instance);

/// ||mu - mu'||_inf (sum of both components) + ||lambda - lambda'||_Lambda.
double param_distance(const DiskMesh& mesh, const ParamVector& a, const ParamVector& b);
/// True when the parameters lie within eps0 of the instance's reference point.
bool within_radius(const DiskMesh& mesh, const Instance& instance, const ParamVector& p);

double eval_cost(const DiskMesh& mesh, const Instance& instance, const Field& y, const BoundaryFunction& u,
                 const ParamVector& mu);

/// Exact derivative of the discrete cost with respect to the nodal state
/// values (domain quadrature + trapezoid boundary terms).
Eigen::VectorXd cost_state_gradient(const DiskMesh& mesh, const Instance& instance, const Field& y,
                                    const ParamVector& mu);

/// G = g(x', y) + u + lambda2 at every boundary node.
BoundaryFunction constraint_residual(const DiskMesh& mesh, const Instance& instance, const Field& y,
                                     const BoundaryFunction& u, const BoundaryFunction& lambda2);

constexpr double kFeasibilityTolerance = 1e-8;
/// max(G, 0) in the max norm.
double constraint_violation(const BoundaryFunction& G);
bool is_feasible(const BoundaryFunction& G, double tolerance = kFeasibilityTolerance);

struct SampleSpec {
  int points_per_axis = 101;
  double M = 5.0;          ///< state samples in [-M, M]; phi samples in [-M, M]
  int space_samples = 25;  ///< sample points in Omega and on Gamma
  int param_samples = 5;   ///< mu samples within eps0 of mu_bar
};

struct AssumptionCheck {
  std::string id;  ///< "A1".."A5"
  bool passed = true;
  std::string witness;  ///< description of a witnessed violation, empty when passed
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  double k_phi_est = 0.0;
  double gamma_est = 0.0;
  double m0_est = 0.0;
  double lip_L_y = 0.0;
  double lip_l_y = 0.0;
  double lip_f_y = 0.0;
  double lip_g_y = 0.0;
  double bound_L = 0.0;  ///< max |L| over the sample box
  double bound_l = 0.0;
  double lower_L = 0.0;  ///< min L over the sample box
  double lower_l = 0.0;
  double k_max = 0.0;
  SampleSpec grid;

  bool all_passed() const;
  const AssumptionCheck& check(const std::string& id) const;
  std::string to_text() const;
};

/// Sampled, falsification-only verification of (A1)-(A5): an assumption fails
/// only when some sample witnesses a violation.
AssumptionReport check_assumptions(const Instance& instance, const SampleSpec& spec = {});

Instance builtin_example_unbounded();
Instance builtin_example_quartic();
/// "quartic", "unbounded", or "convex" (f = g = L = l = 0, phi = 1, A = -laplace + 1).
Instance builtin_instance(const std::string& name);
bool is_builtin_name(const std::string& name);

/// Parses the instance document. Errors: ParseError (line/column),
/// SchemaError (missing or mistyped field), UnknownFunctionError,
/// ValidationError (eps0, gamma, theta must be positive; k_phi nonnegative).
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

}  // namespace robin
