#include "robin/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace robin {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex_hash(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const SolveOptions& o) {
  return {{"inner_tolerance", o.inner_tolerance},
          {"outer_tolerance", o.outer_tolerance},
          {"penalty_initial", o.penalty_initial},
          {"penalty_growth", o.penalty_growth},
          {"penalty_max", o.penalty_max},
          {"max_outer", o.max_outer},
          {"max_inner", o.max_inner},
          {"armijo_c", o.armijo_c},
          {"backtrack", o.backtrack},
          {"max_backtracks", o.max_backtracks},
          {"polish_threshold", o.polish_threshold},
          {"control_bound", o.control_bound},
          {"newton",
           {{"tolerance", o.newton.tolerance},
            {"max_iterations", o.newton.max_iterations},
            {"damping", o.newton.damping},
            {"extra_steps", o.newton.extra_steps}}},
          {"cluster_radius", o.cluster_radius},
          {"value_rel_tolerance", o.value_rel_tolerance},
          {"value_abs_tolerance", o.value_abs_tolerance}};
}

nlohmann::json to_json(const KktResiduals& r) {
  return {{"stationarity", r.stationarity},
          {"primal_feasibility", r.primal_feasibility},
          {"dual_sign", r.dual_sign},
          {"complementarity", r.complementarity}};
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"tool", "robinlab"},
          {"version", ROBIN_VERSION},
          {"command", m.command},
          {"instance", {{"name", m.instance_name}, {"hash", hex_hash(m.instance_hash)}}},
          {"mesh", {{"rings", m.rings}, {"sectors", m.sectors}}},
          {"options", m.options},
          {"seeds", m.seeds}};
}

void write_control_csv(std::ostream& out, const DiskMesh& mesh, const Instance& inst, const KktPoint& p,
                       const ParamVector& lambda) {
  const BoundaryFunction G = constraint_residual(mesh, inst, p.y, p.u, lambda.lambda2);
  out << "j,angle,x1,x2,u,e,G\n";
  for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j) {
    const Point& x = mesh.boundary_point(j);
    out << j << ',' << format_double(mesh.boundary_angle(j)) << ',' << format_double(x.x1) << ','
        << format_double(x.x2) << ',' << format_double(p.u[j]) << ',' << format_double(p.e[j]) << ','
        << format_double(G[j]) << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace robin
