#pragma once

// Test-side reference implementations, written directly from the defining formulas and kept
// independent of the library code they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using C = std::complex<double>;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// E[g(r)] for the radial white-noise law with density (1+2b) 2r (1+r^2)^(-2-2b) dr, integrated
/// in the variable w = 1/(1+r^2) on (0, 1].
inline double wn_radial_mean(const std::function<double(double)>& g_of_r2, double beta) {
  const double a = 1.0 + 2.0 * beta;
  // dP = a w^(a-1) dw, r^2 = 1/w - 1
  return simpson([&](double w) {
    if (w <= 0.0) return 0.0;
    return g_of_r2(1.0 / w - 1.0) * a * std::pow(w, a - 1.0);
  }, 0.0, 1.0, 200000);
}

/// E[f(t)] for t = s.sigma under the Gibbs kernel, t in [-1, 1] with density ∝ (1+t)^(2b).
inline double gibbs_dot_mean(const std::function<double(double)>& f, double beta) {
  auto w = [&](double t) { return std::pow(0.5 * (1.0 + t), 2.0 * beta); };
  const double z = simpson(w, -1.0, 1.0);
  return simpson([&](double t) { return f(t) * w(t); }, -1.0, 1.0) / z;
}

/// Law of s.sigma: P(t <= x) = ((1+x)/2)^(1+2b).
inline double gibbs_dot_cdf(double x, double beta) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::pow(0.5 * (1.0 + x), 1.0 + 2.0 * beta);
}

inline Eigen::Matrix3d q_small(C z) {
  Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
  const double r = std::abs(z);
  if (r == 0.0) return q;
  const double k = 2.0 * std::atan(r) / r;
  q(0, 2) = k * z.real();
  q(1, 2) = -k * z.imag();
  q(2, 0) = -k * z.real();
  q(2, 1) = k * z.imag();
  return q;
}

inline Eigen::Matrix3d q_big(C z) {
  const C z2 = z * z;
  const double n = 1.0 + std::norm(z);
  Eigen::Matrix3d m;
  m << 1 - z2.real(), z2.imag(), 2 * z.real(),
       z2.imag(), 1 + z2.real(), -2 * z.imag(),
       -2 * z.real(), 2 * z.imag(), 1 - std::norm(z);
  return m / n;
}

inline Eigen::Matrix3d expm(const Eigen::Matrix3d& a) { return a.exp(); }

/// Zero-curvature generator A_n from a_n and a_{n-1}.
inline Eigen::Matrix3d a_gen(C an, C am) {
  const double r = 2.0 * (std::conj(an) * am).real();
  const C d = an - am;
  Eigen::Matrix3d m;
  m << 0, -r, -2 * d.imag(),
       r, 0, -2 * d.real(),
       2 * d.imag(), 2 * d.real(), 0;
  return m;
}

/// Free-boundary AL right-hand side on a plain vector.
inline std::vector<C> al_rhs(const std::vector<C>& a) {
  const std::size_t n = a.size();
  std::vector<C> d(n);
  const C i(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const C nb = (k > 0 ? a[k - 1] : C{}) + (k + 1 < n ? a[k + 1] : C{});
    d[k] = i * ((1.0 + std::norm(a[k])) * nb - 2.0 * a[k]);
  }
  return d;
}

/// Classical fixed-step RK4 for the free AL system.
inline std::vector<C> rk4_al(std::vector<C> a, double t, int steps) {
  const double h = t / steps;
  auto axpy = [](const std::vector<C>& x, const std::vector<C>& y, double s) {
    std::vector<C> r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] + s * y[k];
    return r;
  };
  for (int s = 0; s < steps; ++s) {
    const auto k1 = al_rhs(a);
    const auto k2 = al_rhs(axpy(a, k1, h / 2));
    const auto k3 = al_rhs(axpy(a, k2, h / 2));
    const auto k4 = al_rhs(axpy(a, k3, h));
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
  }
  return a;
}

/// Free-boundary LHM right-hand side.
inline std::vector<Eigen::Vector3d> lhm_rhs(const std::vector<Eigen::Vector3d>& s) {
  std::vector<Eigen::Vector3d> d(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    if (k + 1 < s.size()) f += 2.0 * s[k + 1] / (1.0 + s[k].dot(s[k + 1]));
    if (k > 0) f += 2.0 * s[k - 1] / (1.0 + s[k].dot(s[k - 1]));
    d[k] = -s[k].cross(f);
  }
  return d;
}

}  // namespace oracle
