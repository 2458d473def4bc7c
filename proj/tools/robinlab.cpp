// robinlab: command-line driver for the parametric Robin boundary control toolkit.
//
// Exit codes: 0 success, 1 usage or input error, 2 solver failure,
// 3 assumption-check failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "robin/adjoint.hpp"
#include "robin/error.hpp"
#include "robin/feasible.hpp"
#include "robin/optimize.hpp"
#include "robin/oracle.hpp"
#include "robin/problem.hpp"
#include "robin/report.hpp"
#include "robin/stability.hpp"

namespace {

using namespace robin;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitAssumption = 3;

struct MeshSpec {
  int rings = 8;
  int sectors = 64;
};

MeshSpec parse_mesh(const std::string& text) {
  MeshSpec m;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &m.rings, &m.sectors, &tail) != 2)
    throw ParameterError("--mesh expects R,S (rings, sectors), got '" + text + "'");
  return m;
}

std::vector<std::string> split_pair(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw ParameterError(std::string(flag) + " expects two expressions separated by a comma");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

std::function<double(const Point&)> space_function(const std::string& src) {
  const Expr e = Expr::parse(src, {"x1", "x2"});
  return [e](const Point& x) { return e({x.x1, x.x2}); };
}

Instance resolve_instance(const std::string& name) {
  if (name.empty()) throw ParameterError("no instance given (builtin name or file path)");
  if (is_builtin_name(name)) return builtin_instance(name);
  return load_instance(name);
}

struct Common {
  std::string instance;
  std::string mesh = "8,64";
  std::string mu;
  std::string lambda;
  std::string out = "robinlab_out";
  std::vector<int> seeds;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_mesh, bool params) {
  c.mesh = default_mesh;
  cmd->add_option("instance,--instance", c.instance, "builtin name (quartic, unbounded, convex) or instance file");
  cmd->add_option("--mesh", c.mesh, "rings,sectors")->capture_default_str();
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  if (params) {
    cmd->add_option("--mu", c.mu, "MU1,MU2 expressions in x1, x2 (default: the instance reference)");
    cmd->add_option("--lambda", c.lambda, "L1,L2 expressions in x1, x2 (default: the instance reference)");
    cmd->add_option("--seeds", c.seeds, "multistart seeds")->delimiter(',');
  }
}

struct Context {
  Instance instance;
  DiskMesh mesh;
  ParamVector params;  // mu in (mu1, mu2), lambda in (lambda1, lambda2)
};

Context make_context(const Common& c) {
  Context ctx{resolve_instance(c.instance), DiskMesh{}, {}};
  const MeshSpec ms = parse_mesh(c.mesh);
  ctx.mesh = DiskMesh::build(ms.rings, ms.sectors);
  ctx.params = reference_params(ctx.mesh, ctx.instance);
  if (!c.mu.empty()) {
    const auto parts = split_pair(c.mu, "--mu");
    ctx.params.mu1 = make_field(ctx.mesh, space_function(parts[0]));
    ctx.params.mu2 = make_boundary_function(ctx.mesh, space_function(parts[1]));
  }
  if (!c.lambda.empty()) {
    const auto parts = split_pair(c.lambda, "--lambda");
    ctx.params.lambda1 = make_boundary_function(ctx.mesh, space_function(parts[0]));
    ctx.params.lambda2 = make_boundary_function(ctx.mesh, space_function(parts[1]));
  }
  return ctx;
}

RunManifest manifest(const std::string& command, const Context& ctx, const SolveOptions& opts) {
  RunManifest m;
  m.command = command;
  m.instance_name = ctx.instance.name;
  m.instance_hash = ctx.instance.hash();
  m.rings = ctx.mesh.n_rings();
  m.sectors = ctx.mesh.n_sectors();
  m.options = to_json(opts);
  m.seeds = opts.seeds;
  return m;
}

std::string path_in(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

int run_solve(const Common& c) {
  const Context ctx = make_context(c);
  SolveOptions opts;
  if (!c.seeds.empty()) opts.seeds = c.seeds;
  if (!within_radius(ctx.mesh, ctx.instance, ctx.params))
    std::cerr << "warning: parameters lie outside eps0 of the reference point\n";

  const SolutionSet set = approximate_solution_set(ctx.mesh, ctx.instance, ctx.params, ctx.params, opts);

  nlohmann::json report;
  report["value"] = set.value;
  report["clustering_radius"] = set.clustering_radius;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const KktPoint& p = set.points[i];
    report["points"].push_back({{"seed", set.point_seeds[i]},
                                {"cost", p.cost},
                                {"control_l2", l2_boundary(ctx.mesh, p.u)},
                                {"residuals", to_json(p.residuals)}});
  }
  for (const KktPoint& p : set.local_points)
    report["local_points"].push_back({{"cost", p.cost}, {"residuals", to_json(p.residuals)}});
  for (const SeedOutcome& s : set.seeds)
    report["seeds"].push_back({{"seed", s.seed}, {"converged", s.converged}, {"cost", s.cost}, {"message", s.message}});

  for (std::size_t i = 0; i < set.points.size(); ++i) {
    std::ostringstream csv;
    write_control_csv(csv, ctx.mesh, ctx.instance, set.points[i], ctx.params);
    write_text_file(path_in(c.out, "controls_" + std::to_string(i) + ".csv"), csv.str());
  }
  write_text_file(path_in(c.out, "report.json"), report.dump(2) + "\n");
  write_text_file(path_in(c.out, "manifest.json"), to_json(manifest("solve", ctx, opts)).dump(2) + "\n");

  std::cout << "value " << format_double(set.value) << "\n";
  std::cout << "clusters " << set.points.size() << " (local " << set.local_points.size() << ")\n";
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const KktResiduals& r = set.points[i].residuals;
    std::cout << "point " << i << " seed " << set.point_seeds[i] << " cost " << format_double(set.points[i].cost)
              << " stationarity " << r.stationarity << " primal " << r.primal_feasibility << " dual_sign "
              << r.dual_sign << " complementarity " << r.complementarity << "\n";
  }
  return kExitOk;
}

struct SweepArgs {
  std::string schedule = "lambda1-bump";
  double amplitude = 0.1;
  int k_max = 5;
  std::vector<double> factors;
  int demo_unbounded = -1;
};

int run_sweep(const Common& c, const SweepArgs& a) {
  const Context ctx = make_context(c);
  SolveOptions opts;
  if (!c.seeds.empty()) opts.seeds = c.seeds;

  if (a.demo_unbounded >= 0) {
    const auto rows = demo_unbounded(ctx.mesh, ctx.instance, a.demo_unbounded);
    std::ostringstream csv;
    write_unbounded_csv(csv, rows);
    write_text_file(path_in(c.out, "unbounded.csv"), csv.str());
    RunManifest m = manifest("sweep --demo-unbounded", ctx, opts);
    m.options["demo_unbounded"] = a.demo_unbounded;
    write_text_file(path_in(c.out, "manifest.json"), to_json(m).dump(2) + "\n");
    std::cout << csv.str();
    return kExitOk;
  }

  SweepSchedule s = make_schedule(ctx.mesh, ctx.instance, parse_schedule_kind(a.schedule), a.amplitude, a.k_max);
  s.base = ctx.params;
  if (!a.factors.empty()) s.factors = a.factors;
  const SweepResult result = sweep(ctx.mesh, ctx.instance, s, opts);

  std::ostringstream csv;
  write_sweep_csv(csv, result.records);
  write_text_file(path_in(c.out, "sweep.csv"), csv.str());
  RunManifest m = manifest("sweep", ctx, opts);
  m.options["schedule"] = a.schedule;
  m.options["amplitude"] = a.amplitude;
  m.options["factors"] = s.factors;
  write_text_file(path_in(c.out, "manifest.json"), to_json(m).dump(2) + "\n");
  std::cout << csv.str();

  bool failed = false;
  for (const auto& r : result.records) {
    if (r.outside_radius) std::cerr << "warning: row " << r.n << " lies outside eps0 of the reference point\n";
    if (r.failed) {
      std::cerr << "row " << r.n << " failed: " << r.message << "\n";
      failed = true;
    }
  }
  return failed ? kExitSolver : kExitOk;
}

struct CheckArgs {
  SampleSpec spec;
};

int run_check(const Common& c, const CheckArgs& a) {
  const Instance inst = resolve_instance(c.instance);
  const AssumptionReport rep = check_assumptions(inst, a.spec);
  std::cout << rep.to_text();
  nlohmann::json j;
  for (const auto& chk : rep.checks) j["checks"][chk.id] = {{"passed", chk.passed}, {"witness", chk.witness}};
  j["k_phi_est"] = rep.k_phi_est;
  j["gamma_est"] = rep.gamma_est;
  j["m0_est"] = rep.m0_est;
  j["k_max"] = rep.k_max;
  write_text_file(path_in(c.out, "assumptions.json"), j.dump(2) + "\n");
  nlohmann::json m = {{"tool", "robinlab"},
                      {"version", ROBIN_VERSION},
                      {"command", "check-assumptions"},
                      {"instance", {{"name", inst.name}, {"hash", hex_hash(inst.hash())}}},
                      {"options",
                       {{"points_per_axis", a.spec.points_per_axis},
                        {"M", a.spec.M},
                        {"space_samples", a.spec.space_samples},
                        {"param_samples", a.spec.param_samples}}}};
  write_text_file(path_in(c.out, "manifest.json"), m.dump(2) + "\n");
  return rep.all_passed() ? kExitOk : kExitAssumption;
}

struct GradientArgs {
  int controls = 5;
  double step = 1e-5;
  double tolerance = 1e-6;
};

int run_gradient_check(const Common& c, const GradientArgs& a) {
  const Context ctx = make_context(c);
  const NewtonOptions newton{1e-12, 100, 1.0, 1};
  const auto& b = ctx.mesh.boundary_mass();
  double worst = 0.0;
  for (int k = 0; k < a.controls; ++k) {
    const BoundaryFunction u = seed_control(ctx.mesh, 8 + k);
    const BoundaryFunction g = reduced_gradient(ctx.mesh, ctx.instance, u, ctx.params.lambda1, ctx.params, newton);
    auto j = [&](const BoundaryFunction& v) {
      const Field y = solve_state(ctx.mesh, ctx.instance, v, ctx.params.lambda1, newton);
      return eval_cost(ctx.mesh, ctx.instance, y, v, ctx.params);
    };
    double err = 0.0, scale = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      BoundaryFunction up = u, dn = u;
      up[i] += a.step;
      dn[i] -= a.step;
      const double fd = (j(up) - j(dn)) / (2.0 * a.step);
      const double ad = b[i] * g[i];  // derivative along the i-th nodal coordinate
      err = std::max(err, std::abs(fd - ad));
      scale = std::max(scale, std::abs(ad));
    }
    const double rel = err / std::max(scale, 1e-300);
    worst = std::max(worst, rel);
    std::cout << "control " << k << " max relative error " << rel << "\n";
  }
  std::cout << "max relative error " << worst << "\n";
  SolveOptions opts;
  RunManifest m = manifest("gradient-check", ctx, opts);
  m.options = {{"controls", a.controls}, {"step", a.step}, {"tolerance", a.tolerance}};
  m.seeds.clear();
  for (int k = 0; k < a.controls; ++k) m.seeds.push_back(8 + k);
  write_text_file(path_in(c.out, "manifest.json"), to_json(m).dump(2) + "\n");
  return worst < a.tolerance ? kExitOk : kExitSolver;
}

std::string radial_table(const RadialProfile& p, const std::string& header) {
  std::ostringstream os;
  os << header << "# r y\n";
  for (int i = 0; i <= 20; ++i) {
    const double r = i / 20.0;
    os << format_double(r) << ' ' << format_double(p(r)) << '\n';
  }
  return os.str();
}

int run_oracle_fixtures(const std::string& out) {
  const Instance convex = builtin_instance("convex");
  const Instance quartic = builtin_example_quartic();

  const RadialOde linear = radial_ode_from_instance(convex);
  const RadialOde cubic = radial_ode_from_instance(quartic);
  const RadialProfile lin = radial_solve(linear, 1.0, 41);
  const RadialProfile cub = radial_solve(cubic, 1.0, 41);
  const RadialProfile cub_fine = radial_solve(cubic, 1.0, 81);
  double agreement = 0.0;
  for (int i = 0; i <= 100; ++i) agreement = std::max(agreement, std::abs(cub(i / 100.0) - cub_fine(i / 100.0)));

  write_text_file(path_in(out, "radial_linear.txt"),
                  radial_table(lin, "# radial collocation, -y'' - y'/r + y = 0, y'(1) = 1\n# grid 41, residual " +
                                        format_double(lin.residual) + "\n"));
  write_text_file(path_in(out, "radial_cubic.txt"),
                  radial_table(cub, "# radial collocation, -y'' - y'/r + y + y^3 = 0, y'(1) = 1\n# grid 41, residual " +
                                        format_double(cub.residual) + ", max difference to grid 81 " +
                                        format_double(agreement) + "\n"));

  const DiskMesh coarse = DiskMesh::build(2, 8);
  auto brute = [&](const Instance& inst, const ParamVector& lambda, const std::string& file, const std::string& what) {
    const BruteForceResult r = brute_force_solve(coarse, inst, ParamVector::zeros(coarse), lambda);
    std::ostringstream os;
    os << "# brute-force pattern search, " << what << ", mesh 2,8\n";
    os << "# evaluations " << r.evaluations << ", violation " << format_double(r.violation) << "\n";
    os << "J " << format_double(r.cost) << "\n";
    for (Eigen::Index j = 0; j < r.u.size(); ++j) os << "u " << j << ' ' << format_double(r.u[j]) << '\n';
    write_text_file(path_in(out, file), os.str());
  };
  brute(quartic, ParamVector::zeros(coarse), "brute_force_quartic.txt", "quartic instance, mu = lambda = 0");
  ParamVector shifted = ParamVector::zeros(coarse);
  shifted.lambda2 = constant_boundary(coarse, 1.0);
  brute(convex, shifted, "brute_force_convex.txt", "convex instance, lambda2 = 1");
  std::cout << "fixtures written to " << out << "\n";
  return kExitOk;
}

void configure_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("ROBINLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  CLI::App app{"robinlab: parametric Robin boundary control experiments"};
  app.set_version_flag("--version", ROBIN_VERSION);
  app.require_subcommand(1);

  Common solve_c, sweep_c, check_c, grad_c;
  auto* solve = app.add_subcommand("solve", "approximate the solution set S(mu, lambda)");
  add_common(solve, solve_c, "8,64", true);

  auto* sweep_cmd = app.add_subcommand("sweep", "stability sweep toward the reference parameters");
  add_common(sweep_cmd, sweep_c, "8,64", true);
  SweepArgs sweep_a;
  sweep_cmd->add_option("--schedule", sweep_a.schedule, "lambda1-bump, lambda2-bump, mu1-shift, mu2-shift")
      ->capture_default_str();
  sweep_cmd->add_option("--amplitude", sweep_a.amplitude, "perturbation amplitude")->capture_default_str();
  sweep_cmd->add_option("--kmax", sweep_a.k_max, "factors 2^-k for k = 0..kmax")->capture_default_str();
  sweep_cmd->add_option("--factors", sweep_a.factors, "explicit decay factors")->delimiter(',');
  sweep_cmd->add_option("--demo-unbounded", sweep_a.demo_unbounded, "feasible controls u = -n for n = 1..N");

  auto* check = app.add_subcommand("check-assumptions", "sampled check of the standing assumptions");
  add_common(check, check_c, "8,64", false);
  CheckArgs check_a;
  check->add_option("--points", check_a.spec.points_per_axis, "samples per axis")->capture_default_str();
  check->add_option("--M", check_a.spec.M, "state and argument range [-M, M]")->capture_default_str();
  check->add_option("--space-samples", check_a.spec.space_samples, "sample points in space")->capture_default_str();
  check->add_option("--param-samples", check_a.spec.param_samples, "parameter samples")->capture_default_str();

  auto* grad = app.add_subcommand("gradient-check", "adjoint gradient against central differences");
  add_common(grad, grad_c, "4,16", true);
  GradientArgs grad_a;
  grad->add_option("--controls", grad_a.controls, "number of random controls")->capture_default_str();
  grad->add_option("--step", grad_a.step, "finite-difference step")->capture_default_str();

  auto* fixtures = app.add_subcommand("oracle-fixtures", "regenerate the oracle fixture files");
  std::string fixtures_out = "tests/fixtures";
  fixtures->add_option("--out", fixtures_out, "fixture directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return run_solve(solve_c);
    if (*sweep_cmd) return run_sweep(sweep_c, sweep_a);
    if (*check) return run_check(check_c, check_a);
    if (*grad) return run_gradient_check(grad_c, grad_a);
    if (*fixtures) return run_oracle_fixtures(fixtures_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
