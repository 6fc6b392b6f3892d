#include "lhasimoto/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "lhasimoto/core.hpp"

namespace lh::quad {

double Rule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

double legendre(int l, double t) {
  if (l == 0) return 1.0;
  double p0 = 1.0;
  double p1 = t;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

Rule gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: need n >= 1");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre(n, x);
      const double pm1 = legendre(n - 1, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      const double p = legendre(n, x);
      const double pm1 = legendre(n - 1, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -x;
    r.nodes[hi] = x;
    r.weights[lo] = w;
    r.weights[hi] = w;
  }
  return r;
}

Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw ParameterError("gauss_jacobi: need n >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw ParameterError("gauss_jacobi: need a, b > -1");
  // Jacobi matrix of the monic recurrence for P_k^{(a,b)}
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    double diag;
    if (k == 0) {
      diag = (b - a) / (a + b + 2.0);
    } else {
      diag = (b * b - a * a) / (s * (s + 2.0));
    }
    j(k, k) = diag;
    if (k + 1 < n) {
      const double k1 = k + 1.0;
      const double s1 = 2.0 * k1 + a + b;
      const double off2 =
          4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      j(k, k + 1) = j(k + 1, k) = std::sqrt(off2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  if (es.info() != Eigen::Success) throw NumericalError("gauss_jacobi: eigen solver failed");
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  Rule r;
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    r.nodes.push_back(es.eigenvalues()(k));
    r.weights.push_back(mu0 * v0 * v0);
  }
  return r;
}

}  // namespace lh::quad
