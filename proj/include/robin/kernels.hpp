#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <vector>

#include "robin/coefficients.hpp"
#include "robin/geometry.hpp"

// Element-level data-parallel kernels. Every kernel has a serial reference
// path and an OpenMP path. The parallel path writes per-element results into
// slots and scatters them in element order, so both paths add the same numbers
// in the same order and agree bit for bit.
namespace robin::kernels {

enum class Exec { serial, parallel };

using LocalMatrix = std::array<double, 9>;

/// Local matrices of  int a grad(phi_j).grad(phi_i) + a0 phi_j phi_i  with the
/// coefficients sampled at edge midpoints.
std::vector<LocalMatrix> element_operator(const DiskMesh& mesh, const EllipticCoefficients& coeffs, Exec exec);

/// Consistent P1 mass matrix applied to nodal values: (M v)_i = int v_h phi_i.
Eigen::VectorXd mass_apply(const DiskMesh& mesh, const Eigen::VectorXd& nodal, Exec exec);

/// Integrand F(x, y, p) -> (value, dvalue/dy) evaluated on the P1 interpolants
/// of y and p.
using PointIntegrand = std::function<std::array<double, 2>(const Point&, double y, double p)>;

struct IntegralWithGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;  ///< d value / d y_i for every node
};

/// Edge-midpoint quadrature of int F(x, y_h, p_h) and its exact derivative with
/// respect to the nodal values of y.
IntegralWithGradient integrate_with_gradient(const DiskMesh& mesh, const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                                             const PointIntegrand& integrand, Exec exec);

/// Number of threads the parallel path would use.
int max_threads();

}  // namespace robin::kernels
