#include "robin/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace robin {

namespace {

double distance(const Point& a, const Point& b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

// Gradients of the three barycentric basis functions on a triangle.
std::array<Eigen::Vector2d, 3> basis_gradients(const Point& a, const Point& b, const Point& c, double area) {
  const double s = 1.0 / (2.0 * area);
  return {Eigen::Vector2d((b.x2 - c.x2) * s, (c.x1 - b.x1) * s),
          Eigen::Vector2d((c.x2 - a.x2) * s, (a.x1 - c.x1) * s),
          Eigen::Vector2d((a.x2 - b.x2) * s, (b.x1 - a.x1) * s)};
}

}  // namespace

DiskMesh DiskMesh::build(int n_rings, int n_sectors) {
  if (n_rings < 1) throw ParameterError("mesh: n_rings must be >= 1, got " + std::to_string(n_rings));
  if (n_sectors < 3) throw ParameterError("mesh: n_sectors must be >= 3, got " + std::to_string(n_sectors));

  DiskMesh m;
  m.n_rings_ = n_rings;
  m.n_sectors_ = n_sectors;
  const auto S = n_sectors;
  m.nodes_.reserve(static_cast<std::size_t>(1 + n_rings * S));
  m.nodes_.push_back({0.0, 0.0});
  for (int k = 1; k <= n_rings; ++k) {
    const double r = (k == n_rings) ? 1.0 : static_cast<double>(k) / n_rings;
    for (int j = 0; j < S; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / S;
      m.nodes_.push_back({r * std::cos(angle), r * std::sin(angle)});
    }
  }
  auto id = [S](int ring, int j) { return 1 + (ring - 1) * S + ((j % S) + S) % S; };

  for (int j = 0; j < S; ++j) m.triangles_.push_back({0, id(1, j), id(1, j + 1)});
  for (int k = 1; k < n_rings; ++k) {
    for (int j = 0; j < S; ++j) {
      const int a = id(k, j), b = id(k, j + 1), c = id(k + 1, j + 1), d = id(k + 1, j);
      m.triangles_.push_back({a, d, c});
      m.triangles_.push_back({a, c, b});
    }
  }
  for (int j = 0; j < S; ++j) {
    m.boundary_nodes_.push_back(id(n_rings, j));
    m.boundary_edges_.push_back({id(n_rings, j), id(n_rings, j + 1)});
  }

  m.areas_.reserve(m.triangles_.size());
  m.lumped_mass_ = Eigen::VectorXd::Zero(m.node_count());
  for (const auto& t : m.triangles_) {
    const Point& a = m.nodes_[static_cast<std::size_t>(t[0])];
    const Point& b = m.nodes_[static_cast<std::size_t>(t[1])];
    const Point& c = m.nodes_[static_cast<std::size_t>(t[2])];
    const double area = signed_area(a, b, c);
    m.areas_.push_back(area);
    m.total_area_ += area;
    for (int v : t) m.lumped_mass_[v] += area / 3.0;
    m.h_ = std::max({m.h_, distance(a, b), distance(b, c), distance(c, a)});
  }

  m.boundary_mass_ = Eigen::VectorXd::Zero(S);
  for (int j = 0; j < S; ++j) {
    const auto& e = m.boundary_edges_[static_cast<std::size_t>(j)];
    const double len = distance(m.nodes_[static_cast<std::size_t>(e[0])], m.nodes_[static_cast<std::size_t>(e[1])]);
    m.boundary_mass_[j] += 0.5 * len;
    m.boundary_mass_[(j + 1) % S] += 0.5 * len;
  }
  return m;
}

double DiskMesh::boundary_angle(Eigen::Index j) const { return 2.0 * std::numbers::pi * static_cast<double>(j) / n_sectors_; }

Field make_field(const DiskMesh& mesh, const std::function<double(const Point&)>& fn) {
  Field y = Field::zero(mesh.node_count());
  for (Eigen::Index i = 0; i < mesh.node_count(); ++i) y[i] = fn(mesh.node(i));
  return y;
}

BoundaryFunction make_boundary_function(const DiskMesh& mesh, const std::function<double(const Point&)>& fn) {
  BoundaryFunction u = BoundaryFunction::zero(mesh.boundary_count());
  for (Eigen::Index j = 0; j < mesh.boundary_count(); ++j) u[j] = fn(mesh.boundary_point(j));
  return u;
}

Field zero_field(const DiskMesh& mesh) { return Field::zero(mesh.node_count()); }

BoundaryFunction constant_boundary(const DiskMesh& mesh, double c) {
  return BoundaryFunction::constant(mesh.boundary_count(), c);
}

void check_shape(const DiskMesh& mesh, const Field& y, const char* what) {
  if (y.size() != mesh.node_count())
    throw InputError(std::string(what) + ": expected " + std::to_string(mesh.node_count()) + " nodal values, got " +
                     std::to_string(y.size()));
}

void check_shape(const DiskMesh& mesh, const BoundaryFunction& u, const char* what) {
  if (u.size() != mesh.boundary_count())
    throw InputError(std::string(what) + ": expected " + std::to_string(mesh.boundary_count()) +
                     " boundary values, got " + std::to_string(u.size()));
}

double l2_domain(const DiskMesh& mesh, const Field& y) {
  check_shape(mesh, y, "l2_domain");
  double sum = 0.0;
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const double a = y[tris[t][0]], b = y[tris[t][1]], c = y[tris[t][2]];
    const double m1 = 0.5 * (a + b), m2 = 0.5 * (b + c), m3 = 0.5 * (c + a);
    sum += mesh.triangle_area(static_cast<Eigen::Index>(t)) / 3.0 * (m1 * m1 + m2 * m2 + m3 * m3);
  }
  return std::sqrt(sum);
}

double h1_seminorm(const DiskMesh& mesh, const Field& y) {
  check_shape(mesh, y, "h1_seminorm");
  double sum = 0.0;
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const double area = mesh.triangle_area(static_cast<Eigen::Index>(t));
    const auto grads = basis_gradients(mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2]), area);
    const Eigen::Vector2d g = y[tri[0]] * grads[0] + y[tri[1]] * grads[1] + y[tri[2]] * grads[2];
    sum += area * g.squaredNorm();
  }
  return std::sqrt(sum);
}

double h1_domain(const DiskMesh& mesh, const Field& y) {
  return std::hypot(l2_domain(mesh, y), h1_seminorm(mesh, y));
}

double l2_boundary(const DiskMesh& mesh, const BoundaryFunction& u) {
  check_shape(mesh, u, "l2_boundary");
  return std::sqrt(mesh.boundary_mass().dot(u.values.cwiseAbs2()));
}

double cmax(const Field& y) { return y.size() == 0 ? 0.0 : y.values.cwiseAbs().maxCoeff(); }
double cmax(const BoundaryFunction& u) { return u.size() == 0 ? 0.0 : u.values.cwiseAbs().maxCoeff(); }

double state_norm(const DiskMesh& mesh, const Field& y) { return h1_domain(mesh, y) + cmax(y); }

double boundary_inner(const DiskMesh& mesh, const BoundaryFunction& a, const BoundaryFunction& b) {
  check_shape(mesh, a, "boundary_inner");
  check_shape(mesh, b, "boundary_inner");
  return mesh.boundary_mass().dot(a.values.cwiseProduct(b.values));
}

double integrate_domain(const DiskMesh& mesh, const Field& y) {
  check_shape(mesh, y, "integrate_domain");
  return mesh.lumped_mass().dot(y.values);
}

double integrate_boundary(const DiskMesh& mesh, const BoundaryFunction& u) {
  check_shape(mesh, u, "integrate_boundary");
  return mesh.boundary_mass().dot(u.values);
}

double l2_error(const DiskMesh& mesh, const Field& y, const std::function<double(const Point&)>& exact) {
  check_shape(mesh, y, "l2_error");
  // Dunavant degree-5, 7 points: barycentric (l1, l2, l3) permutations and weights.
  const double a1 = 0.059715871789770, b1 = 0.470142064105115;
  const double a2 = 0.797426985353087, b2 = 0.101286507323456;
  const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
  const std::array<std::array<double, 4>, 7> rule = {{{1.0 / 3, 1.0 / 3, 1.0 / 3, w0},
                                                       {a1, b1, b1, w1},
                                                       {b1, a1, b1, w1},
                                                       {b1, b1, a1, w1},
                                                       {a2, b2, b2, w2},
                                                       {b2, a2, b2, w2},
                                                       {b2, b2, a2, w2}}};
  double sum = 0.0;
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const Point& p0 = mesh.node(tri[0]);
    const Point& p1 = mesh.node(tri[1]);
    const Point& p2 = mesh.node(tri[2]);
    double local = 0.0;
    for (const auto& q : rule) {
      const Point x{q[0] * p0.x1 + q[1] * p1.x1 + q[2] * p2.x1, q[0] * p0.x2 + q[1] * p1.x2 + q[2] * p2.x2};
      const double yh = q[0] * y[tri[0]] + q[1] * y[tri[1]] + q[2] * y[tri[2]];
      const double d = yh - exact(x);
      local += q[3] * d * d;
    }
    sum += mesh.triangle_area(static_cast<Eigen::Index>(t)) * local;
  }
  return std::sqrt(sum);
}

BoundaryFunction trace(const DiskMesh& mesh, const Field& y) {
  check_shape(mesh, y, "trace");
  BoundaryFunction u = BoundaryFunction::zero(mesh.boundary_count());
  const auto bn = mesh.boundary_nodes();
  for (std::size_t j = 0; j < bn.size(); ++j) u[static_cast<Eigen::Index>(j)] = y[bn[j]];
  return u;
}

}  // namespace robin
