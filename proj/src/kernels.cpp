#include "robin/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robin::kernels {

namespace {

// Barycentric weights of the three edge midpoints (01, 12, 20).
constexpr std::array<std::array<double, 3>, 3> kMidpoints = {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};

struct Triangle {
  std::array<Point, 3> p;
  std::array<int, 3> v;
  double area;
};

Triangle triangle(const DiskMesh& mesh, Eigen::Index t) {
  const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
  return {{mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2])}, tri, mesh.triangle_area(t)};
}

Point at(const Triangle& t, const std::array<double, 3>& l) {
  return {l[0] * t.p[0].x1 + l[1] * t.p[1].x1 + l[2] * t.p[2].x1, l[0] * t.p[0].x2 + l[1] * t.p[1].x2 + l[2] * t.p[2].x2};
}

LocalMatrix local_operator(const Triangle& t, const EllipticCoefficients& c) {
  const double s = 1.0 / (2.0 * t.area);
  const std::array<std::array<double, 2>, 3> g = {{{(t.p[1].x2 - t.p[2].x2) * s, (t.p[2].x1 - t.p[1].x1) * s},
                                                   {(t.p[2].x2 - t.p[0].x2) * s, (t.p[0].x1 - t.p[2].x1) * s},
                                                   {(t.p[0].x2 - t.p[1].x2) * s, (t.p[1].x1 - t.p[0].x1) * s}}};
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  std::array<double, 3> a0{};
  for (std::size_t q = 0; q < 3; ++q) {
    const Point x = at(t, kMidpoints[q]);
    a11 += c.a11(x) / 3.0;
    a12 += c.a12(x) / 3.0;
    a22 += c.a22(x) / 3.0;
    a0[q] = c.a0(x);
  }
  LocalMatrix m{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double ax = a11 * g[j][0] + a12 * g[j][1];
      const double ay = a12 * g[j][0] + a22 * g[j][1];
      double mass = 0.0;
      for (std::size_t q = 0; q < 3; ++q) mass += a0[q] * kMidpoints[q][i] * kMidpoints[q][j];
      m[i * 3 + j] = t.area * (ax * g[i][0] + ay * g[i][1]) + t.area / 3.0 * mass;
    }
  }
  return m;
}

std::array<double, 3> local_mass_apply(const Triangle& t, const Eigen::VectorXd& v) {
  std::array<double, 3> out{};
  for (const auto& l : kMidpoints) {
    const double vq = l[0] * v[t.v[0]] + l[1] * v[t.v[1]] + l[2] * v[t.v[2]];
    for (std::size_t i = 0; i < 3; ++i) out[i] += t.area / 3.0 * vq * l[i];
  }
  return out;
}

// value, dvalue/dy_0, dvalue/dy_1, dvalue/dy_2
std::array<double, 4> local_integral(const Triangle& t, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                                     const PointIntegrand& f) {
  std::array<double, 4> out{};
  for (const auto& l : kMidpoints) {
    const double yq = l[0] * y[t.v[0]] + l[1] * y[t.v[1]] + l[2] * y[t.v[2]];
    const double pq = l[0] * p[t.v[0]] + l[1] * p[t.v[1]] + l[2] * p[t.v[2]];
    const auto [val, dval] = f(at(t, l), yq, pq);
    const double w = t.area / 3.0;
    out[0] += w * val;
    for (std::size_t i = 0; i < 3; ++i) out[i + 1] += w * dval * l[i];
  }
  return out;
}

}  // namespace

std::vector<LocalMatrix> element_operator(const DiskMesh& mesh, const EllipticCoefficients& coeffs, Exec exec) {
  const Eigen::Index n = mesh.triangle_count();
  std::vector<LocalMatrix> out(static_cast<std::size_t>(n));
  if (exec == Exec::serial) {
    for (Eigen::Index t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = local_operator(triangle(mesh, t), coeffs);
    return out;
  }
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = local_operator(triangle(mesh, t), coeffs);
  return out;
}

Eigen::VectorXd mass_apply(const DiskMesh& mesh, const Eigen::VectorXd& nodal, Exec exec) {
  const Eigen::Index n = mesh.triangle_count();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.node_count());
  if (exec == Exec::serial) {
    for (Eigen::Index t = 0; t < n; ++t) {
      const Triangle tri = triangle(mesh, t);
      const auto loc = local_mass_apply(tri, nodal);
      for (std::size_t i = 0; i < 3; ++i) out[tri.v[i]] += loc[i];
    }
    return out;
  }
  std::vector<std::array<double, 3>> slots(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) slots[static_cast<std::size_t>(t)] = local_mass_apply(triangle(mesh, t), nodal);
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < slots.size(); ++t)
    for (std::size_t i = 0; i < 3; ++i) out[tris[t][i]] += slots[t][i];
  return out;
}

IntegralWithGradient integrate_with_gradient(const DiskMesh& mesh, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                                             const PointIntegrand& integrand, Exec exec) {
  const Eigen::Index n = mesh.triangle_count();
  IntegralWithGradient out{0.0, Eigen::VectorXd::Zero(mesh.node_count())};
  if (exec == Exec::serial) {
    for (Eigen::Index t = 0; t < n; ++t) {
      const Triangle tri = triangle(mesh, t);
      const auto loc = local_integral(tri, y, p, integrand);
      out.value += loc[0];
      for (std::size_t i = 0; i < 3; ++i) out.gradient[tri.v[i]] += loc[i + 1];
    }
    return out;
  }
  std::vector<std::array<double, 4>> slots(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t)
    slots[static_cast<std::size_t>(t)] = local_integral(triangle(mesh, t), y, p, integrand);
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < slots.size(); ++t) {
    out.value += slots[t][0];
    for (std::size_t i = 0; i < 3; ++i) out.gradient[tris[t][i]] += slots[t][i + 1];
  }
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace robin::kernels
