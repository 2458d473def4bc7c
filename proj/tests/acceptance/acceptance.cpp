// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "robin/adjoint.hpp"
#include "robin/feasible.hpp"
#include "robin/optimize.hpp"
#include "robin/oracle.hpp"
#include "robin/pde.hpp"
#include "robin/problem.hpp"
#include "robin/stability.hpp"

using namespace robin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double bessel_i(int nu, double x) {
  double term = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0), sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= 0.25 * x * x / (k * (k + nu));
    sum += term;
  }
  return sum;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Outcome ac1_manufactured() {
  auto error = [](int rings) {
    const auto m = DiskMesh::build(rings, 8 * rings);
    const Field theta = make_field(m, [](const Point& x) { return x.x1 * x.x1 + x.x2 * x.x2 - 4.0; });
    const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(1.0), zero_field(m),
                                       constant_boundary(m, 0.0), theta, constant_boundary(m, 2.0));
    return l2_error(m, y, [](const Point& x) { return x.x1 * x.x1 + x.x2 * x.x2; });
  };
  const auto t0 = std::chrono::steady_clock::now();
  const double e8 = error(8), e16 = error(16), e32 = error(32);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double r1 = e8 / e16, r2 = e16 / e32;
  const bool ok = r1 >= 3.4 && r1 <= 4.6 && r2 >= 3.4 && r2 <= 4.6 && secs < 60.0;
  return {ok, "ratios " + fmt("%.4f", r1) + ", " + fmt("%.4f", r2) + " (need [3.4, 4.6]), " + fmt("%.2f s", secs)};
}

Outcome ac2_bessel() {
  const auto m = DiskMesh::build(32, 256);
  const Field y = solve_linear_robin(m, EllipticCoefficients::laplacian(1.0), zero_field(m), constant_boundary(m, 0.0),
                                     zero_field(m), constant_boundary(m, 1.0));
  const double exact = 1.0 / bessel_i(1, 1.0), err = std::abs(y[0] - exact);
  return {err < 1e-3, "y(0) = " + fmt("%.8f", y[0]) + ", 1/I1(1) = " + fmt("%.8f", exact) + ", error " +
                          fmt("%.3e", err) + " (need < 1e-3)"};
}

Outcome ac3_newton() {
  const auto m = DiskMesh::build(8, 64);
  NewtonTrace nt;
  solve_state(m, builtin_example_quartic(), constant_boundary(m, 1.0), constant_boundary(m, 0.0), {}, &nt);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < nt.residuals.size(); ++k)
    if (nt.residuals[k] < 1e-2 && nt.residuals[k] > 0.0)
      worst = std::max(worst, nt.residuals[k + 1] / (nt.residuals[k] * nt.residuals[k]));
  const double final = nt.residuals.back();
  return {worst <= 10.0 && final < 1e-10, "max r_{k+1}/r_k^2 = " + fmt("%.3e", worst) + " (need <= 10), final " +
                                              fmt("%.3e", final) + " after " + std::to_string(nt.iterations) +
                                              " steps"};
}

Outcome ac4_gradient() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = DiskMesh::build(4, 16);
  const auto q = builtin_example_quartic();
  const ParamVector mu = ParamVector::zeros(m);
  const NewtonOptions newton{1e-12, 100, 1.0, 1};
  const double h = 1e-5;
  auto cost = [&](const BoundaryFunction& v) {
    return eval_cost(m, q, solve_state(m, q, v, mu.lambda1, newton), v, mu);
  };
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const BoundaryFunction u = seed_control(m, 8 + k);
    const BoundaryFunction g = reduced_gradient(m, q, u, mu.lambda1, mu, newton);
    double err = 0.0, scale = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      BoundaryFunction up = u, dn = u;
      up[j] += h;
      dn[j] -= h;
      const double fd = (cost(up) - cost(dn)) / (2 * h), ad = m.boundary_mass()[j] * g[j];
      err = std::max(err, std::abs(fd - ad));
      scale = std::max(scale, std::abs(ad));
    }
    worst = std::max(worst, err / scale);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-6 && secs < 30.0,
          "max relative error " + fmt("%.3e", worst) + " (need < 1e-6), " + fmt("%.2f s", secs)};
}

Outcome ac5_tracking() {
  const auto m = DiskMesh::build(8, 64);
  const auto q = builtin_example_quartic();
  const NewtonOptions newton{1e-12, 100, 1.0, 1};
  const ParamVector lhat = ParamVector::zeros(m);
  const FeasiblePair hat = construct_feasible(m, q, lhat, newton);
  ParamVector dir = ParamVector::zeros(m);
  dir.lambda1 = constant_boundary(m, 1.0);
  std::vector<double> lx, ly;
  double worst_res = 0.0;
  bool members = true;
  for (int k = 0; k <= 6; ++k) {
    const ParamVector ln = lhat + std::ldexp(1.0, -k) * dir;
    const FeasiblePair n = track_feasible(m, q, hat.y, hat.u, lhat, ln, newton);
    const Membership mem = is_member(m, q, n.y, n.u, ln, 1e-10);
    members = members && mem.member;
    worst_res = std::max({worst_res, mem.state_residual, mem.constraint_violation});
    lx.push_back(std::log(param_distance(m, ln, lhat)));
    ly.push_back(std::log(state_norm(m, n.y - hat.y)));
  }
  const double s = slope(lx, ly);
  return {std::abs(s - 1.0) <= 0.1 && members,
          "slope " + fmt("%.4f", s) + " (need 1 +- 0.1), worst membership residual " + fmt("%.2e", worst_res)};
}

Outcome ac6_unbounded() {
  const auto m = DiskMesh::build(8, 64);
  const auto rows = demo_unbounded(m, builtin_example_unbounded(), 10);
  const double n_gon = std::sqrt(128.0 * std::sin(std::numbers::pi / 64)), circle = std::sqrt(2 * std::numbers::pi);
  bool ok = rows.size() == 10;
  double exact_err = 0.0, circle_err = 0.0;
  for (const auto& r : rows) {
    ok = ok && r.feasible;
    exact_err = std::max(exact_err, std::abs(r.control_norm - r.n * n_gon) / (r.n * n_gon));
    circle_err = std::max(circle_err, std::abs(r.control_norm - r.n * circle) / (r.n * circle));
  }
  ok = ok && exact_err < 1e-12 && circle_err < 1e-2;
  return {ok, "10 feasible controls, relative error to n sqrt(2N sin(pi/N)) " + fmt("%.2e", exact_err) +
                  ", to n sqrt(2 pi) " + fmt("%.2e", circle_err) + " (need < 1%)"};
}

Outcome ac7_kkt() {
  const auto m = DiskMesh::build(8, 64);
  const auto q = builtin_example_quartic();
  const ParamVector z = ParamVector::zeros(m);
  const SolutionSet set = approximate_solution_set(m, q, z, z);
  std::vector<const KktPoint*> outputs;
  for (const auto& p : set.points) outputs.push_back(&p);
  for (const auto& p : set.local_points) outputs.push_back(&p);
  double worst_res = 0.0, worst_vi = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<FeasiblePair> competitors;
  for (int c = 0; c < 100; ++c) {
    // Nonnegative slack of random size and shape: every such pair lies in K(0).
    const double scale = 2.0 * U(rng), a = U(rng), b = U(rng), k = std::floor(4 * U(rng));
    const BoundaryFunction slack = make_boundary_function(m, [&](const Point& x) {
      const double th = std::atan2(x.x2, x.x1);
      return scale * (a + (1.0 - a) * 0.5 * (1.0 + std::cos(k * th + 6.0 * b)));
    });
    competitors.push_back(construct_feasible_with_slack(m, q, z, slack, {1e-12, 100, 1.0, 1}));
  }
  for (const KktPoint* p : outputs) {
    worst_res = std::max(worst_res, p->residuals.max());
    for (const auto& c : competitors) worst_vi = std::max(worst_vi, vi_check(m, q, *p, c, z, z, z));
  }
  return {worst_res < 1e-6 && worst_vi <= 1e-8,
          std::to_string(outputs.size()) + " outputs, max KKT residual " + fmt("%.2e", worst_res) +
              " (need < 1e-6), max audit value " + fmt("%.2e", worst_vi) + " over 100 competitors (need <= 1e-8)"};
}

Outcome ac8_oracle() {
  const auto m = DiskMesh::build(2, 8);
  const ParamVector z = ParamVector::zeros(m);
  const auto q = builtin_example_quartic();
  const auto c = builtin_instance("convex");
  const double q_opt = approximate_solution_set(m, q, z, z).value;
  const double q_bf = brute_force_solve(m, q, z, z).cost;
  const double q_rel = std::abs(q_opt - q_bf) / std::abs(q_bf);
  // Convex instance: minimum 0 at lambda = 0 (absolute check), and the
  // variant with lambda2 = 1 where the constraint is active (relative check).
  const double c0_opt = approximate_solution_set(m, c, z, z).value;
  const double c0_bf = brute_force_solve(m, c, z, z).cost;
  ParamVector lam = z;
  lam.lambda2 = constant_boundary(m, 1.0);
  const double c1_opt = approximate_solution_set(m, c, z, lam).value;
  const double c1_bf = brute_force_solve(m, c, z, lam).cost;
  const double c1_rel = std::abs(c1_opt - c1_bf) / std::abs(c1_bf);
  const double c0_abs = std::abs(c0_opt - c0_bf);
  return {q_rel < 1e-3 && c1_rel < 1e-3 && c0_abs < 1e-6,
          "quartic " + fmt("%.10f", q_opt) + " vs " + fmt("%.10f", q_bf) + " (rel " + fmt("%.2e", q_rel) +
              "), convex lambda2=1 rel " + fmt("%.2e", c1_rel) + ", convex lambda=0 abs " + fmt("%.2e", c0_abs)};
}

Outcome ac9_sweep() {
  const auto m = DiskMesh::build(8, 64);
  const auto q = builtin_example_quartic();
  const SolveOptions opts;
  const SweepResult bump = sweep(m, q, make_schedule(m, q, ScheduleKind::lambda1_bump, 0.1, 5), opts);
  bool ok = true;
  std::string col;
  for (std::size_t i = 1; i < bump.records.size(); ++i) {
    const auto& r = bump.records[i];
    ok = ok && !r.failed;
    if (i > 1) ok = ok && r.excess <= 1.1 * bump.records[i - 1].excess;
    col += (i > 1 ? " " : "") + fmt("%.3e", r.excess);
  }
  const auto& last = bump.records.back();
  ok = ok && last.excess < 1e-2 && last.value_gap < 1e-2;

  const SweepResult shift = sweep(m, q, make_schedule(m, q, ScheduleKind::mu1_shift, 0.5, 5), opts);
  double worst_shift = 0.0;
  for (const auto& r : shift.records) {
    ok = ok && !r.failed;
    worst_shift = std::max(worst_shift, std::isnan(r.excess) ? 1.0 : r.excess);
  }
  ok = ok && worst_shift < 10.0 * opts.inner_tolerance;
  return {ok, "lambda1-bump excess [" + col + "], final value gap " + fmt("%.3e", last.value_gap) +
                  "; mu1-shift max excess " + fmt("%.3e", worst_shift) + " (need < 1e-9)"};
}

Outcome ac10_assumptions() {
  const AssumptionReport r = check_assumptions(builtin_example_quartic());
  auto doc = builtin_example_quartic().to_json();
  doc.replace(doc.find("sqrt(1 + t^2)"), 13, "t");
  const AssumptionReport bad = check_assumptions(parse_instance(doc));
  const bool ok = r.all_passed() && r.k_phi_est <= 1.0 + 1e-9 && r.gamma_est == 1.0 && r.m0_est == 1.0 &&
                  !bad.check("A3").passed && !bad.check("A3").witness.empty();
  return {ok, "k_phi " + fmt("%.12f", r.k_phi_est) + ", gamma " + fmt("%.3g", r.gamma_est) + ", m0 " +
                  fmt("%.3g", r.m0_est) + "; phi(t) = t: " + bad.check("A3").witness};
}

Outcome ac11_weak_limit() {
  const auto m = DiskMesh::build(16, 128);
  const auto q = builtin_example_quartic();
  const auto table = weak_limit_experiment(m, q.coefficients(), q.state_nonlinearity(), NonlinearTerm{},
                                           constant_boundary(m, 1.0), {2, 4, 8, 16});
  bool ok = table.rows.size() == 4 && !table.aliasing_warning;
  std::string col;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0) ok = ok && table.rows[i].error < table.rows[i - 1].error;
    col += (i > 0 ? " " : "") + fmt("%.3e", table.rows[i].error);
  }
  return {ok, "errors for n = 2, 4, 8, 16: " + col};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1", ac1_manufactured}, {"AC2", ac2_bessel},      {"AC3", ac3_newton},   {"AC4", ac4_gradient},
      {"AC5", ac5_tracking},     {"AC6", ac6_unbounded},   {"AC7", ac7_kkt},      {"AC8", ac8_oracle},
      {"AC9", ac9_sweep},        {"AC10", ac10_assumptions}, {"AC11", ac11_weak_limit}};
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
