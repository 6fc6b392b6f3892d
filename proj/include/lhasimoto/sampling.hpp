#pragma once

// Exact samplers for the white-noise amplitude law, the Gibbs spin chain and Haar
// rotations, together with the densities they target and the transfer-operator spectrum.

#include <vector>

#include "lhasimoto/core.hpp"

namespace lh::sampling {

/// Per-site white-noise density (1+2b)/pi * (1+|a|^2)^-(2+2b) w.r.t. area.
double white_noise_density(Complex a, const Beta& beta);

/// CDF of |a|^2 under the white-noise law: 1 - (1+y)^-(1+2b).
double white_noise_abs2_cdf(double y, const Beta& beta);

/// i.i.d. white-noise amplitudes on w, by inverse CDF (no rejection).
ALField sample_white_noise(const Beta& beta, const Window& w, RngStream& rng);

/// Nearest-neighbour Gibbs kernel p(s, sigma) = (1+2b)/(4 pi) ((1 + s.sigma)/2)^(2b).
/// Throws DomainError for inputs off the unit sphere by more than 1e-10.
double gibbs_transition_density(const Vec3& s, const Vec3& sigma, const Beta& beta);

/// Orthonormal (possibly improper) matrix whose third column is s.
/// Householder reflection; the branch is picked by the larger of |1 +- s_3|.
Mat3 completion_frame(const Vec3& s);

/// One draw sigma ~ p(s, .).
Vec3 sample_gibbs_step(const Vec3& s, const Beta& beta, RngStream& rng);

/// Stationary chain: uniform first spin, then Gibbs steps left to right.
SpinField sample_gibbs_chain(const Beta& beta, const Window& w, RngStream& rng);

/// Haar-distributed rotation (uniform unit quaternion).
Rotation sample_haar_rotation(RngStream& rng);

struct GibbsKernelSpectrum {
  double beta = 1.0;
  std::vector<double> eigenvalues;  ///< lambda_0 .. lambda_L
  int quadrature_points = 0;
};

/// Eigenvalues of the kernel on Legendre modes, by Gauss-Jacobi quadrature with weight
/// (1+t)^(2b). Throws NumericalError if doubling the rule changes any value by > 1e-12.
GibbsKernelSpectrum kernel_spectrum(const Beta& beta, int l_max);

}  // namespace lh::sampling
