#pragma once

#include <functional>
#include <vector>

namespace lh::quad {

/// Nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] double integrate(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre.
Rule gauss_legendre(int n);

/// n-point Gauss-Jacobi for the weight (1 - t)^a (1 + t)^b, a, b > -1 (Golub-Welsch).
Rule gauss_jacobi(int n, double a, double b);

/// Legendre polynomial P_l(t) by the three-term recurrence.
double legendre(int l, double t);

}  // namespace lh::quad
