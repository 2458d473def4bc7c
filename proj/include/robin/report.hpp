#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "robin/adjoint.hpp"
#include "robin/optimize.hpp"
#include "robin/problem.hpp"

namespace robin {

/// Shortest round-trip text of a double (printf %.17g).
std::string format_double(double v);
std::string hex_hash(std::uint64_t h);

nlohmann::json to_json(const SolveOptions& opts);
nlohmann::json to_json(const KktResiduals& r);

struct RunManifest {
  std::string command;
  std::string instance_name;
  std::uint64_t instance_hash = 0;
  int rings = 0;
  int sectors = 0;
  nlohmann::json options = nlohmann::json::object();
  std::vector<int> seeds;
};

/// Reproduction record: tool version, instance hash, mesh, options, seeds.
nlohmann::json to_json(const RunManifest& m);

/// One row per boundary node: j, angle, x1, x2, u, e, G.
void write_control_csv(std::ostream& out, const DiskMesh& mesh, const Instance& instance, const KktPoint& point,
                       const ParamVector& lambda);

/// Creates the parent directory and writes the text; throws InputError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace robin
