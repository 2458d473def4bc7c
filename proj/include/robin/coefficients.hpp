#pragma once

#include <functional>

#include "robin/geometry.hpp"

namespace robin {

/// Coefficients of A y = -div(a grad y) + a0 y with a symmetric matrix a
/// (a21 is a12 by construction).
struct EllipticCoefficients {
  std::function<double(const Point&)> a11;
  std::function<double(const Point&)> a12;
  std::function<double(const Point&)> a22;
  std::function<double(const Point&)> a0;

  /// -laplace + a0 with constant a0.
  static EllipticCoefficients laplacian(double a0 = 1.0);
};

/// A pointwise nonlinearity h(x, y) together with its y-derivative.
struct NonlinearTerm {
  std::function<double(const Point&, double)> value;
  std::function<double(const Point&, double)> derivative;

  static NonlinearTerm zero();
  bool empty() const { return !value; }
};

}  // namespace robin
