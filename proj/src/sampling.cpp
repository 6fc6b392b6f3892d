#include "lhasimoto/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lhasimoto/quadrature.hpp"

namespace lh::sampling {

using std::numbers::pi;

double white_noise_density(Complex a, const Beta& beta) {
  const double b = beta.value();
  return (1.0 + 2.0 * b) / pi * std::pow(1.0 + std::norm(a), -(2.0 + 2.0 * b));
}

double white_noise_abs2_cdf(double y, const Beta& beta) {
  if (y <= 0.0) return 0.0;
  return -std::expm1(-(1.0 + 2.0 * beta.value()) * std::log1p(y));
}

ALField sample_white_noise(const Beta& beta, const Window& w, RngStream& rng) {
  const double inv_exponent = 1.0 / (1.0 + 2.0 * beta.value());
  std::vector<Complex> v;
  v.reserve(w.length());
  for (std::size_t i = 0; i < w.length(); ++i) {
    const double u = rng.uniform();
    const double phase = 2.0 * pi * rng.uniform();
    // w = 1/(1+r^2) has density (1+2b) w^(2b) on (0,1)
    const double wv = std::pow(u, inv_exponent);
    const double r = std::sqrt((1.0 - wv) / wv);
    v.push_back(std::polar(r, phase));
  }
  return ALField(w, std::move(v));
}

namespace {

void require_unit(const Vec3& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > 1e-10) {
    throw DomainError(std::string("gibbs_transition_density: ") + name + " is not a unit vector");
  }
}

}  // namespace

double gibbs_transition_density(const Vec3& s, const Vec3& sigma, const Beta& beta) {
  require_unit(s, "s");
  require_unit(sigma, "sigma");
  const double b = beta.value();
  const double half = std::max(0.0, 0.5 * (1.0 + s.dot(sigma)));
  return (1.0 + 2.0 * b) / (4.0 * pi) * std::pow(half, 2.0 * b);
}

Mat3 completion_frame(const Vec3& s) {
  const Vec3 e3 = Vec3::UnitZ();
  if (s.z() >= 0.0) {
    // v = e3 + s: H e3 = -s, so -H sends e3 to s
    const Vec3 v = e3 + s;
    return -(Mat3::Identity() - 2.0 * v * v.transpose() / v.squaredNorm());
  }
  const Vec3 v = e3 - s;
  return Mat3::Identity() - 2.0 * v * v.transpose() / v.squaredNorm();
}

Vec3 sample_gibbs_step(const Vec3& s, const Beta& beta, RngStream& rng) {
  const double u = std::pow(rng.uniform(), 1.0 / (1.0 + 2.0 * beta.value()));
  const double azimuth = 2.0 * pi * rng.uniform();
  const double cos_phi = 2.0 * u - 1.0;
  const double sin_phi = 2.0 * std::sqrt(u * (1.0 - u));
  const Vec3 local(sin_phi * std::cos(azimuth), sin_phi * std::sin(azimuth), cos_phi);
  Vec3 sigma = completion_frame(s) * local;
  sigma.normalize();
  return sigma;
}

SpinField sample_gibbs_chain(const Beta& beta, const Window& w, RngStream& rng) {
  std::vector<Vec3> spins;
  spins.reserve(w.length());
  spins.push_back(rng.unit_vector());
  for (std::size_t i = 1; i < w.length(); ++i) {
    spins.push_back(sample_gibbs_step(spins.back(), beta, rng));
  }
  return SpinField::normalized(w, std::move(spins));
}

Rotation sample_haar_rotation(RngStream& rng) {
  // Shoemake: uniform unit quaternion
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  Eigen::Quaterniond q(b * std::cos(2.0 * pi * u3), a * std::sin(2.0 * pi * u2),
                       a * std::cos(2.0 * pi * u2), b * std::sin(2.0 * pi * u3));
  q.normalize();
  return Rotation(q.toRotationMatrix());
}

namespace {

std::vector<double> spectrum_with(const quad::Rule& rule, double b, int l_max) {
  // weight (1+t)^(2b) absorbs the kernel's endpoint singularity;
  // lambda_l = (1+2b)/2 * 2^(-2b) * int P_l(t) (1+t)^(2b) dt
  const double scale = 0.5 * (1.0 + 2.0 * b) * std::exp2(-2.0 * b);
  std::vector<double> out;
  for (int l = 0; l <= l_max; ++l) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * quad::legendre(l, rule.nodes[i]);
    }
    out.push_back(scale * s);
  }
  return out;
}

}  // namespace

GibbsKernelSpectrum kernel_spectrum(const Beta& beta, int l_max) {
  if (l_max < 1) throw ParameterError("kernel_spectrum: l_max must be >= 1");
  const double b = beta.value();
  // exact for polynomial degree <= 2n - 1, so n > l_max/2 already suffices
  const int n = l_max + 16;
  const auto coarse = spectrum_with(quad::gauss_jacobi(n, 0.0, 2.0 * b), b, l_max);
  const auto fine = spectrum_with(quad::gauss_jacobi(2 * n, 0.0, 2.0 * b), b, l_max);
  double worst = 0.0;
  for (std::size_t l = 0; l < fine.size(); ++l) {
    worst = std::max(worst, std::abs(fine[l] - coarse[l]));
  }
  if (worst > 1e-12) {
    throw NumericalError("kernel_spectrum: quadrature did not converge (max change " +
                         std::to_string(worst) + " between " + std::to_string(n) + " and " +
                         std::to_string(2 * n) + " nodes)");
  }
  return {b, fine, 2 * n};
}

}  // namespace lh::sampling
