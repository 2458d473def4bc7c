#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "robin/error.hpp"

namespace robin {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Nodal values of a P1 function. The tag separates domain fields (one value
/// per mesh node) from boundary functions (one value per boundary node).
template <class Tag>
class NodalFunction {
 public:
  NodalFunction() = default;
  explicit NodalFunction(Eigen::VectorXd v) : values(std::move(v)) {}

  static NodalFunction zero(Eigen::Index n) { return NodalFunction(Eigen::VectorXd::Zero(n)); }
  static NodalFunction constant(Eigen::Index n, double c) {
    return NodalFunction(Eigen::VectorXd::Constant(n, c));
  }

  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index i) const { return values[i]; }
  double& operator[](Eigen::Index i) { return values[i]; }
  bool all_finite() const { return values.allFinite(); }

  NodalFunction& operator+=(const NodalFunction& o) {
    values += o.values;
    return *this;
  }
  NodalFunction& operator-=(const NodalFunction& o) {
    values -= o.values;
    return *this;
  }
  NodalFunction& operator*=(double s) {
    values *= s;
    return *this;
  }
  friend NodalFunction operator+(NodalFunction a, const NodalFunction& b) { return a += b; }
  friend NodalFunction operator-(NodalFunction a, const NodalFunction& b) { return a -= b; }
  friend NodalFunction operator*(double s, NodalFunction a) { return a *= s; }
  friend NodalFunction operator*(NodalFunction a, double s) { return a *= s; }

  Eigen::VectorXd values;
};

struct DomainTag {};
struct BoundaryTag {};
using Field = NodalFunction<DomainTag>;
using BoundaryFunction = NodalFunction<BoundaryTag>;

/// Concentric-ring fan triangulation of the unit disk.
///
/// Node 0 is the centre; ring k (1..n_rings) at radius k/n_rings holds
/// n_sectors nodes at angles 2*pi*j/n_sectors, numbered 1 + (k-1)*n_sectors + j.
/// The outer ring is the boundary, so boundary index j maps to node
/// 1 + (n_rings-1)*n_sectors + j and boundary functions follow the same order.
class DiskMesh {
 public:
  static DiskMesh build(int n_rings, int n_sectors);

  int n_rings() const { return n_rings_; }
  int n_sectors() const { return n_sectors_; }
  Eigen::Index node_count() const { return static_cast<Eigen::Index>(nodes_.size()); }
  Eigen::Index boundary_count() const { return static_cast<Eigen::Index>(boundary_nodes_.size()); }
  Eigen::Index triangle_count() const { return static_cast<Eigen::Index>(triangles_.size()); }

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const std::array<int, 3>> triangles() const { return triangles_; }
  std::span<const std::array<int, 2>> boundary_edges() const { return boundary_edges_; }
  std::span<const int> boundary_nodes() const { return boundary_nodes_; }
  const Point& node(Eigen::Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const Point& boundary_point(Eigen::Index j) const { return node(boundary_nodes_[static_cast<std::size_t>(j)]); }
  double boundary_angle(Eigen::Index j) const;

  /// Maximum element diameter.
  double h() const { return h_; }
  double triangle_area(Eigen::Index t) const { return areas_[static_cast<std::size_t>(t)]; }
  /// Polygon area (sum of triangle areas).
  double area() const { return total_area_; }
  /// Inscribed polygon perimeter, 2n sin(pi/n).
  double boundary_measure() const { return boundary_mass_.sum(); }

  /// Row sums of the P1 mass matrix (area/3 per incident triangle).
  const Eigen::VectorXd& lumped_mass() const { return lumped_mass_; }
  /// Trapezoid weights per boundary index (half of each adjacent edge length).
  const Eigen::VectorXd& boundary_mass() const { return boundary_mass_; }

 private:
  int n_rings_ = 0;
  int n_sectors_ = 0;
  double h_ = 0.0;
  double total_area_ = 0.0;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> boundary_edges_;
  std::vector<int> boundary_nodes_;
  std::vector<double> areas_;
  Eigen::VectorXd lumped_mass_;
  Eigen::VectorXd boundary_mass_;
};

Field make_field(const DiskMesh& mesh, const std::function<double(const Point&)>& fn);
BoundaryFunction make_boundary_function(const DiskMesh& mesh, const std::function<double(const Point&)>& fn);
Field zero_field(const DiskMesh& mesh);
BoundaryFunction constant_boundary(const DiskMesh& mesh, double c);

void check_shape(const DiskMesh& mesh, const Field& y, const char* what);
void check_shape(const DiskMesh& mesh, const BoundaryFunction& u, const char* what);

// Discrete norms. Domain integrals of P1 products are exact (edge-midpoint
// rule); boundary integrals use the trapezoid rule on the polygon.
double l2_domain(const DiskMesh& mesh, const Field& y);
double h1_seminorm(const DiskMesh& mesh, const Field& y);
double h1_domain(const DiskMesh& mesh, const Field& y);
double l2_boundary(const DiskMesh& mesh, const BoundaryFunction& u);
double cmax(const Field& y);
double cmax(const BoundaryFunction& u);
/// ||y||_{H1} + ||y||_{C}: the discrete norm of the state space.
double state_norm(const DiskMesh& mesh, const Field& y);

double boundary_inner(const DiskMesh& mesh, const BoundaryFunction& a, const BoundaryFunction& b);
double integrate_domain(const DiskMesh& mesh, const Field& y);
double integrate_boundary(const DiskMesh& mesh, const BoundaryFunction& u);

/// L2 distance between the P1 field and a smooth function, using a degree-5
/// rule so that the interpolation error itself is resolved.
double l2_error(const DiskMesh& mesh, const Field& y, const std::function<double(const Point&)>& exact);

BoundaryFunction trace(const DiskMesh& mesh, const Field& y);

}  // namespace robin
