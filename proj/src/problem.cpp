#include "robin/problem.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "robin/error.hpp"
#include "robin/kernels.hpp"

namespace robin {

using json = nlohmann::json;

namespace {

const std::vector<std::string> kDomainVars = {"x1", "x2", "y", "mu1"};
const std::vector<std::string> kBoundaryVars = {"x1", "x2", "y", "mu2"};
const std::vector<std::string> kPhiVars = {"t"};
const std::vector<std::string> kStateVars = {"x1", "x2", "y"};
const std::vector<std::string> kSpaceVars = {"x1", "x2"};

// 1-based line/column of a byte offset.
std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct DocumentContext {
  const std::string& text;

  // Position of the string value of `key` in the source, for diagnostics.
  std::size_t value_offset(const std::string& key, const std::string& value) const {
    const std::size_t k = text.find("\"" + key + "\"");
    if (k == std::string::npos) return 0;
    const std::size_t v = text.find(value, k + key.size() + 2);
    return v == std::string::npos ? k : v;
  }

  Expr expression(const json& obj, const std::string& key, const std::vector<std::string>& vars) const {
    if (!obj.contains(key)) throw SchemaError("instance: missing required field '" + key + "'");
    const json& v = obj.at(key);
    std::string src;
    if (v.is_string()) {
      src = v.get<std::string>();
    } else if (v.is_number()) {
      std::ostringstream os;
      os.precision(17);
      os << v.get<double>();
      src = os.str();
    } else {
      throw SchemaError("instance: field '" + key + "' must be an expression string or a number");
    }
    try {
      return Expr::parse(src, vars);
    } catch (const UnknownFunctionError& e) {
      const auto [line, col] = line_column(text, value_offset(key, src));
      throw UnknownFunctionError("instance field '" + key + "' (line " + std::to_string(line) + "): " + e.what(), line,
                                 col + e.column() - 1);
    } catch (const ParseError& e) {
      const auto [line, col] = line_column(text, value_offset(key, src));
      throw ParseError("instance field '" + key + "' (line " + std::to_string(line) + "): " + e.what(), line,
                       col + e.column() - 1);
    }
  }

  double number(const json& obj, const std::string& key) const {
    if (!obj.contains(key)) throw SchemaError("instance: missing required field '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) throw SchemaError("instance: field '" + key + "' must be a number");
    return v.get<double>();
  }

  const json& object(const json& obj, const std::string& key) const {
    if (!obj.contains(key)) throw SchemaError("instance: missing required field '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_object()) throw SchemaError("instance: field '" + key + "' must be an object");
    return v;
  }
};

const char* kQuartic = R"js({
  "name": "quartic",
  "L": "y^4 - y^2 + mu1",
  "l": "y^2 + y*abs(y)",
  "phi": "sqrt(1 + t^2)",
  "f": "y^3",
  "g": "y",
  "coeffs": {"a11": "1", "a12": "0", "a22": "1", "a0": "1"},
  "mu_bar": {"mu1": "0", "mu2": "0"},
  "lambda_bar": {"lambda1": "0", "lambda2": "0"},
  "eps0": 1.0,
  "gamma": 0.5,
  "k_phi": 1.0,
  "theta": 1.0
})js";

const char* kUnbounded = R"js({
  "name": "unbounded",
  "L": "y^2/2 + mu1",
  "l": "0",
  "phi": "1",
  "f": "y^3",
  "g": "0",
  "coeffs": {"a11": "1", "a12": "0", "a22": "1", "a0": "1"},
  "mu_bar": {"mu1": "0", "mu2": "0"},
  "lambda_bar": {"lambda1": "0", "lambda2": "0"},
  "eps0": 1.0,
  "gamma": 0.5,
  "k_phi": 1.0,
  "theta": 1.0
})js";

const char* kConvex = R"js({
  "name": "convex",
  "L": "0",
  "l": "0",
  "phi": "1",
  "f": "0",
  "g": "0",
  "coeffs": {"a11": "1", "a12": "0", "a22": "1", "a0": "1"},
  "mu_bar": {"mu1": "0", "mu2": "0"},
  "lambda_bar": {"lambda1": "0", "lambda2": "0"},
  "eps0": 1.0,
  "gamma": 0.5,
  "k_phi": 1.0,
  "theta": 1.0
})js";

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  if (n <= 1) return {0.5 * (a + b)};
  for (int i = 0; i < n; ++i) {
    // Symmetric form so that the midpoint of a symmetric interval is exactly 0.
    const double s = static_cast<double>(2 * i - (n - 1)) / (n - 1);
    v.push_back(0.5 * (a + b) + 0.5 * (b - a) * s);
  }
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string at_point(const Point& x) { return "(" + fmt(x.x1) + ", " + fmt(x.x2) + ")"; }

}  // namespace

EllipticCoefficients Instance::coefficients() const {
  auto wrap = [](const Expr& e) { return [e](const Point& x) { return e({x.x1, x.x2}); }; };
  return {wrap(a11), wrap(a12), wrap(a22), wrap(a0)};
}

NonlinearTerm Instance::state_nonlinearity() const {
  const Expr v = f, d = f_y;
  return {[v](const Point& x, double y) { return v({x.x1, x.x2, y}); },
          [d](const Point& x, double y) { return d({x.x1, x.x2, y}); }};
}

NonlinearTerm Instance::constraint_nonlinearity() const {
  const Expr v = g, d = g_y;
  return {[v](const Point& x, double y) { return v({x.x1, x.x2, y}); },
          [d](const Point& x, double y) { return d({x.x1, x.x2, y}); }};
}

std::string Instance::to_json() const {
  json j;
  j["name"] = name;
  j["L"] = L.str();
  j["l"] = l.str();
  j["phi"] = phi.str();
  j["f"] = f.str();
  j["g"] = g.str();
  j["coeffs"] = {{"a11", a11.str()}, {"a12", a12.str()}, {"a22", a22.str()}, {"a0", a0.str()}};
  j["mu_bar"] = {{"mu1", mu1_bar.str()}, {"mu2", mu2_bar.str()}};
  j["lambda_bar"] = {{"lambda1", lambda1_bar.str()}, {"lambda2", lambda2_bar.str()}};
  j["eps0"] = eps0;
  j["gamma"] = gamma;
  j["k_phi"] = k_phi;
  j["theta"] = theta;
  return j.dump(2);
}

std::uint64_t Instance::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ParamVector ParamVector::zeros(const DiskMesh& mesh) {
  return {zero_field(mesh), constant_boundary(mesh, 0.0), constant_boundary(mesh, 0.0), constant_boundary(mesh, 0.0)};
}

ParamVector& ParamVector::operator+=(const ParamVector& o) {
  mu1 += o.mu1;
  mu2 += o.mu2;
  lambda1 += o.lambda1;
  lambda2 += o.lambda2;
  return *this;
}

ParamVector operator*(double s, ParamVector a) {
  a.mu1 *= s;
  a.mu2 *= s;
  a.lambda1 *= s;
  a.lambda2 *= s;
  return a;
}

void check_shape(const DiskMesh& mesh, const ParamVector& p, const char* what) {
  check_shape(mesh, p.mu1, what);
  check_shape(mesh, p.mu2, what);
  check_shape(mesh, p.lambda1, what);
  check_shape(mesh, p.lambda2, what);
}

ParamVector reference_params(const DiskMesh& mesh, const Instance& inst) {
  auto dom = [](const Expr& e) { return [e](const Point& x) { return e({x.x1, x.x2}); }; };
  return {make_field(mesh, dom(inst.mu1_bar)), make_boundary_function(mesh, dom(inst.mu2_bar)),
          make_boundary_function(mesh, dom(inst.lambda1_bar)), make_boundary_function(mesh, dom(inst.lambda2_bar))};
}

double param_distance(const DiskMesh& mesh, const ParamVector& a, const ParamVector& b) {
  check_shape(mesh, a, "param_distance");
  check_shape(mesh, b, "param_distance");
  const double mu = cmax(a.mu1 - b.mu1) + cmax(a.mu2 - b.mu2);
  const double l1 = l2_boundary(mesh, a.lambda1 - b.lambda1);
  const double l2 = l2_boundary(mesh, a.lambda2 - b.lambda2);
  return mu + std::hypot(l1, l2);
}

bool within_radius(const DiskMesh& mesh, const Instance& instance, const ParamVector& p) {
  return param_distance(mesh, p, reference_params(mesh, instance)) <= instance.eps0 * (1.0 + 1e-12);
}

double eval_cost(const DiskMesh& mesh, const Instance& inst, const Field& y, const BoundaryFunction& u,
                 const ParamVector& mu) {
  check_shape(mesh, y, "eval_cost y");
  check_shape(mesh, u, "eval_cost u");
  check_shape(mesh, mu, "eval_cost mu");
  const auto domain = kernels::integrate_with_gradient(
      mesh, y.values, mu.mu1.values,
      [&inst](const Point& x, double yq, double mq) -> std::array<double, 2> {
        return {inst.running_cost(x, yq, mq), 0.0};
      },
      kernels::Exec::parallel);
  if (!std::isfinite(domain.value)) {
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
      if (!std::isfinite(inst.running_cost(mesh.node(i), y[i], mu.mu1[i])) || !std::isfinite(y[i]))
        throw EvaluationError("eval_cost: non-finite domain integrand at node " + std::to_string(i) + " " +
                              at_point(mesh.node(i)));
    throw EvaluationError("eval_cost: non-finite domain integral");
  }
  double boundary = 0.0;
  const auto bn = mesh.boundary_nodes();
  const auto& b = mesh.boundary_mass();
  for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j) {
    const double yj = y[bn[static_cast<std::size_t>(j)]];
    const double term = inst.boundary_cost(mesh.boundary_point(j), yj, mu.mu2[j]) +
                        inst.control_weight(mu.mu2[j]) * u[j] * u[j];
    if (!std::isfinite(term))
      throw EvaluationError("eval_cost: non-finite boundary integrand at node " +
                            std::to_string(bn[static_cast<std::size_t>(j)]) + " " + at_point(mesh.boundary_point(j)));
    boundary += b[j] * term;
  }
  return domain.value + boundary;
}

Eigen::VectorXd cost_state_gradient(const DiskMesh& mesh, const Instance& inst, const Field& y,
                                    const ParamVector& mu) {
  check_shape(mesh, y, "cost_state_gradient y");
  check_shape(mesh, mu, "cost_state_gradient mu");
  auto domain = kernels::integrate_with_gradient(
      mesh, y.values, mu.mu1.values,
      [&inst](const Point& x, double yq, double mq) -> std::array<double, 2> {
        return {0.0, inst.running_cost_y(x, yq, mq)};
      },
      kernels::Exec::parallel);
  Eigen::VectorXd grad = std::move(domain.gradient);
  const auto bn = mesh.boundary_nodes();
  const auto& b = mesh.boundary_mass();
  for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j) {
    const int node = bn[static_cast<std::size_t>(j)];
    grad[node] += b[j] * inst.boundary_cost_y(mesh.boundary_point(j), y[node], mu.mu2[j]);
  }
  return grad;
}

BoundaryFunction constraint_residual(const DiskMesh& mesh, const Instance& inst, const Field& y,
                                     const BoundaryFunction& u, const BoundaryFunction& lambda2) {
  check_shape(mesh, y, "constraint_residual y");
  check_shape(mesh, u, "constraint_residual u");
  check_shape(mesh, lambda2, "constraint_residual lambda2");
  BoundaryFunction G = u + lambda2;
  const auto bn = mesh.boundary_nodes();
  for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j)
    G[j] += inst.g_value(mesh.boundary_point(j), y[bn[static_cast<std::size_t>(j)]]);
  return G;
}

double constraint_violation(const BoundaryFunction& G) {
  return G.size() == 0 ? 0.0 : std::max(0.0, G.values.maxCoeff());
}

bool is_feasible(const BoundaryFunction& G, double tolerance) { return constraint_violation(G) <= tolerance; }

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

const AssumptionCheck& AssumptionReport::check(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return c;
  throw ParameterError("assumption report: no check named " + id);
}

std::string AssumptionReport::to_text() const {
  std::ostringstream os;
  os.precision(10);
  for (const auto& c : checks) {
    os << c.id << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.passed) os << "  witness: " << c.witness;
    os << '\n';
  }
  os << "k_phi_est = " << k_phi_est << "\n"
     << "gamma_est = " << gamma_est << "\n"
     << "m0_est = " << m0_est << "\n"
     << "lip(L_y) = " << lip_L_y << ", lip(l_y) = " << lip_l_y << ", lip(f_y) = " << lip_f_y
     << ", lip(g_y) = " << lip_g_y << "\n"
     << "max|L| = " << bound_L << ", max|l| = " << bound_l << ", min L = " << lower_L << ", min l = " << lower_l
     << "\n"
     << "k_max = " << k_max << "\n"
     << "grid: " << grid.points_per_axis << " points per axis, M = " << grid.M << ", " << grid.space_samples
     << " space samples, " << grid.param_samples << " parameter samples\n";
  return os.str();
}

AssumptionReport check_assumptions(const Instance& inst, const SampleSpec& spec) {
  if (spec.points_per_axis < 2 || spec.space_samples < 1 || spec.param_samples < 1 || !(spec.M > 0.0))
    throw ParameterError("check_assumptions: invalid sample specification");
  AssumptionReport rep;
  rep.grid = spec;
  const auto ys = linspace(-spec.M, spec.M, spec.points_per_axis);
  const double dy = ys[1] - ys[0];
  const auto offsets = linspace(-inst.eps0, inst.eps0, spec.param_samples);

  // Interior samples on a polar grid (centre included), boundary samples on the circle.
  std::vector<Point> xs{{0.0, 0.0}};
  const int per_ring = std::max(1, spec.space_samples / 4);
  for (int k = 1; k <= 4; ++k)
    for (int j = 0; j < per_ring; ++j) {
      const double r = 0.25 * k, a = 2.0 * std::numbers::pi * (j + 0.5 * (k % 2)) / per_ring;
      xs.push_back({r * std::cos(a), r * std::sin(a)});
    }
  std::vector<Point> xbs;
  for (int j = 0; j < spec.space_samples; ++j) {
    const double a = 2.0 * std::numbers::pi * j / spec.space_samples;
    xbs.push_back({std::cos(a), std::sin(a)});
  }

  AssumptionCheck a1{"A1", true, ""}, a2{"A2", true, ""}, a3{"A3", true, ""}, a4{"A4", true, ""}, a5{"A5", true, ""};
  auto fail = [](AssumptionCheck& c, const std::string& w) {
    if (c.passed) c.witness = w;
    c.passed = false;
  };

  // (A1)/(A2) on Omega.
  rep.lower_L = std::numeric_limits<double>::infinity();
  rep.lower_l = std::numeric_limits<double>::infinity();
  for (const auto& x : xs) {
    const double mbar = inst.mu1_bar({x.x1, x.x2});
    for (double off : offsets) {
      const double m = mbar + off;
      double prev_d = 0.0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double v = inst.running_cost(x, ys[i], m), d = inst.running_cost_y(x, ys[i], m);
        if (!std::isfinite(v) || !std::isfinite(d))
          fail(a1, "L or L_y not finite at x = " + at_point(x) + ", y = " + fmt(ys[i]) + ", mu1 = " + fmt(m));
        rep.bound_L = std::max(rep.bound_L, std::abs(v));
        rep.lower_L = std::min(rep.lower_L, v);
        if (i > 0) rep.lip_L_y = std::max(rep.lip_L_y, std::abs(d - prev_d) / dy);
        prev_d = d;
      }
    }
  }
  for (const auto& x : xbs) {
    const double mbar = inst.mu2_bar({x.x1, x.x2});
    for (double off : offsets) {
      const double m = mbar + off;
      double prev_d = 0.0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double v = inst.boundary_cost(x, ys[i], m), d = inst.boundary_cost_y(x, ys[i], m);
        if (!std::isfinite(v) || !std::isfinite(d))
          fail(a1, "l or l_y not finite at x' = " + at_point(x) + ", y = " + fmt(ys[i]) + ", mu2 = " + fmt(m));
        rep.bound_l = std::max(rep.bound_l, std::abs(v));
        rep.lower_l = std::min(rep.lower_l, v);
        if (i > 0) rep.lip_l_y = std::max(rep.lip_l_y, std::abs(d - prev_d) / dy);
        prev_d = d;
      }
    }
  }

  // (A2): probe |y| = M 2^k far outside the box; a sustained slide to -infinity
  // is taken as a witness that no integrable lower bound exists.
  auto probe = [&](auto&& fn, const Point& x, double m, const char* what) {
    for (double sgn : {-1.0, 1.0}) {
      std::vector<double> vals;
      for (int k = 0; k <= 20; ++k) vals.push_back(fn(x, sgn * spec.M * std::ldexp(1.0, k), m));
      bool sliding = vals.back() < -1e6;
      for (int k = 10; k < 20; ++k) sliding = sliding && vals[static_cast<std::size_t>(k + 1)] < vals[static_cast<std::size_t>(k)];
      if (sliding)
        fail(a2, std::string(what) + " unbounded below: " + fmt(vals.back()) + " at x = " + at_point(x) +
                     ", y = " + fmt(sgn * spec.M * std::ldexp(1.0, 20)));
    }
  };
  for (const auto& x : xs)
    probe([&](const Point& p, double y, double m) { return inst.running_cost(p, y, m); }, x,
          inst.mu1_bar({x.x1, x.x2}), "L");
  for (const auto& x : xbs)
    probe([&](const Point& p, double y, double m) { return inst.boundary_cost(p, y, m); }, x,
          inst.mu2_bar({x.x1, x.x2}), "l");

  // (A3).
  const auto ts = linspace(-spec.M, spec.M, spec.points_per_axis);
  rep.gamma_est = std::numeric_limits<double>::infinity();
  std::vector<double> phis;
  double t_min = 0.0;
  for (double t : ts) {
    const double p = inst.control_weight(t);
    phis.push_back(p);
    if (p < rep.gamma_est || !std::isfinite(p)) {
      rep.gamma_est = p;
      t_min = t;
    }
  }
  if (!(inst.gamma > 0.0)) fail(a3, "declared gamma = " + fmt(inst.gamma) + " is not positive");
  if (!(rep.gamma_est > inst.gamma))
    fail(a3, "phi(t) = " + fmt(rep.gamma_est) + " <= gamma = " + fmt(inst.gamma) + " at t = " + fmt(t_min));
  if (!(inst.theta > 0.0)) fail(a3, "declared theta = " + fmt(inst.theta) + " is not positive");
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j)
      rep.k_phi_est = std::max(rep.k_phi_est, std::abs(phis[j] - phis[i]) / std::pow(std::abs(ts[j] - ts[i]), inst.theta));
  if (!(rep.k_phi_est <= inst.k_phi * (1.0 + 1e-9) + 1e-12))
    fail(a3, "Hoelder constant estimate " + fmt(rep.k_phi_est) + " exceeds declared k_phi = " + fmt(inst.k_phi));

  double mu_norm = 0.0, m1 = 0.0, m2 = 0.0;
  for (const auto& x : xs) m1 = std::max(m1, std::abs(inst.mu1_bar({x.x1, x.x2})));
  for (const auto& x : xbs) m2 = std::max(m2, std::abs(inst.mu2_bar({x.x1, x.x2})));
  mu_norm = m1 + m2;
  rep.k_max = -std::numeric_limits<double>::infinity();
  for (double t : linspace(mu_norm - inst.eps0, mu_norm + inst.eps0, spec.points_per_axis))
    rep.k_max = std::max(rep.k_max, inst.control_weight(t));

  // (A4): symmetry holds by construction (a21 is a12).
  rep.m0_est = std::numeric_limits<double>::infinity();
  bool a0_positive_somewhere = false;
  std::vector<Point> all = xs;
  all.insert(all.end(), xbs.begin(), xbs.end());
  for (const auto& x : all) {
    const double a = inst.a11({x.x1, x.x2}), b = inst.a12({x.x1, x.x2}), c = inst.a22({x.x1, x.x2});
    const double lmin = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    rep.m0_est = std::min(rep.m0_est, lmin);
    const double a0 = inst.a0({x.x1, x.x2});
    if (a0 < 0.0) fail(a4, "a0 = " + fmt(a0) + " < 0 at x = " + at_point(x));
    if (a0 > 0.0) a0_positive_somewhere = true;
  }
  if (!(rep.m0_est > 0.0)) fail(a4, "smallest eigenvalue of (a_ij) is " + fmt(rep.m0_est) + " <= 0");
  if (!a0_positive_somewhere) fail(a4, "a0 vanishes at every sample point");

  // (A5).
  for (const auto& x : xs) {
    if (std::abs(inst.f_value(x, 0.0)) > 1e-12) fail(a5, "f(x, 0) = " + fmt(inst.f_value(x, 0.0)) + " at x = " + at_point(x));
    double prev = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double d = inst.f_deriv(x, ys[i]);
      if (d < -1e-12 || !std::isfinite(d)) fail(a5, "f_y = " + fmt(d) + " < 0 at x = " + at_point(x) + ", y = " + fmt(ys[i]));
      if (i > 0) rep.lip_f_y = std::max(rep.lip_f_y, std::abs(d - prev) / dy);
      prev = d;
    }
  }
  for (const auto& x : xbs) {
    if (std::abs(inst.g_value(x, 0.0)) > 1e-12) fail(a5, "g(x', 0) = " + fmt(inst.g_value(x, 0.0)) + " at x' = " + at_point(x));
    double prev = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double d = inst.g_deriv(x, ys[i]);
      if (d < -1e-12 || !std::isfinite(d)) fail(a5, "g_y = " + fmt(d) + " < 0 at x' = " + at_point(x) + ", y = " + fmt(ys[i]));
      if (i > 0) rep.lip_g_y = std::max(rep.lip_g_y, std::abs(d - prev) / dy);
      prev = d;
    }
  }

  rep.checks = {a1, a2, a3, a4, a5};
  return rep;
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("instance: JSON syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what(),
                     line, col);
  }
  if (!doc.is_object()) throw SchemaError("instance: top level must be an object");

  const DocumentContext ctx{text};
  Instance inst;
  inst.name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "custom";
  inst.L = ctx.expression(doc, "L", kDomainVars);
  inst.l = ctx.expression(doc, "l", kBoundaryVars);
  inst.phi = ctx.expression(doc, "phi", kPhiVars);
  inst.f = ctx.expression(doc, "f", kStateVars);
  inst.g = ctx.expression(doc, "g", kStateVars);
  const json& coeffs = ctx.object(doc, "coeffs");
  inst.a11 = ctx.expression(coeffs, "a11", kSpaceVars);
  inst.a12 = ctx.expression(coeffs, "a12", kSpaceVars);
  inst.a22 = ctx.expression(coeffs, "a22", kSpaceVars);
  inst.a0 = ctx.expression(coeffs, "a0", kSpaceVars);
  const json& mu = ctx.object(doc, "mu_bar");
  inst.mu1_bar = ctx.expression(mu, "mu1", kSpaceVars);
  inst.mu2_bar = ctx.expression(mu, "mu2", kSpaceVars);
  const json& lam = ctx.object(doc, "lambda_bar");
  inst.lambda1_bar = ctx.expression(lam, "lambda1", kSpaceVars);
  inst.lambda2_bar = ctx.expression(lam, "lambda2", kSpaceVars);
  inst.eps0 = ctx.number(doc, "eps0");
  inst.gamma = ctx.number(doc, "gamma");
  inst.k_phi = ctx.number(doc, "k_phi");
  inst.theta = ctx.number(doc, "theta");

  if (!(inst.eps0 > 0.0)) throw ValidationError("instance: eps0 must be positive");
  if (!(inst.gamma > 0.0)) throw ValidationError("instance: gamma must be positive");
  if (!(inst.k_phi >= 0.0)) throw ValidationError("instance: k_phi must be nonnegative");
  if (!(inst.theta > 0.0)) throw ValidationError("instance: theta must be positive");

  inst.L_y = inst.L.derivative("y");
  inst.l_y = inst.l.derivative("y");
  inst.f_y = inst.f.derivative("y");
  inst.g_y = inst.g.derivative("y");
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("instance: cannot open file '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

Instance builtin_example_quartic() { return parse_instance(kQuartic); }
Instance builtin_example_unbounded() { return parse_instance(kUnbounded); }

Instance builtin_instance(const std::string& name) {
  if (name == "quartic") return builtin_example_quartic();
  if (name == "unbounded") return builtin_example_unbounded();
  if (name == "convex") return parse_instance(kConvex);
  throw ParameterError("unknown builtin instance '" + name + "'");
}

bool is_builtin_name(const std::string& name) { return name == "quartic" || name == "unbounded" || name == "convex"; }

}  // namespace robin
