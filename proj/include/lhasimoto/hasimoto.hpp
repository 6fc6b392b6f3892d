#pragma once

// Discrete Hasimoto transform in both formulations:
//  * curvature/torsion coordinates (theta, gamma) and alpha = tan(theta/2) exp(-i Gamma);
//  * parallel frames P_{n+1} = P_n Q(alpha_n), S_n = P_n e3.

#include <optional>
#include <vector>

#include "lhasimoto/core.hpp"

namespace lh::hasimoto {

/// sin^2(theta) below this is treated as parallel/antiparallel.
inline constexpr double kParallelEps = 1e-12;
/// 1 + S_n.S_{n+1} below this is treated as antiparallel.
inline constexpr double kAntiparallelEps = 1e-12;
/// Frame chains are re-orthonormalized every this many multiplications.
inline constexpr int kReorthoInterval = 64;

/// Curvature angles theta_n in (0, pi) and torsion angles gamma_n in (-pi, pi].
///
/// theta_n couples S_n and S_{n+1}, so a spin field on [lo, hi] yields theta on [lo, hi-1].
/// gamma_n needs S_{n-1}; the entry at window.lo is a gauge value (0 when derived from
/// spins) that only shifts every Gamma(n) by a constant phase.
struct ThetaGamma {
  Window window;
  std::vector<double> theta;
  std::vector<double> gamma;

  ThetaGamma() = default;
  ThetaGamma(Window w, std::vector<double> theta_, std::vector<double> gamma_);

  [[nodiscard]] double theta_at(long n) const { return theta[window.offset(n)]; }
  [[nodiscard]] double gamma_at(long n) const { return gamma[window.offset(n)]; }
  /// Anchored cumulative torsion Gamma(n) = sum_{lo <= l <= n} gamma_l.
  [[nodiscard]] double big_gamma(long n) const;
};

ThetaGamma theta_gamma_from_spins(const SpinField& s);

ALField alpha_from_theta_gamma(const ThetaGamma& tg);

/// Rebuilds spins on [lo, hi+1] from the first two spins.
SpinField reconstruct_spins(const Vec3& s0, const Vec3& s1, const ThetaGamma& tg);

/// Rebuilds spins from the pair (S_anchor, S_{anchor+1}); sites above use the forward
/// recursion, sites below the backward one.
SpinField reconstruct_spins(long anchor, const Vec3& s_anchor, const Vec3& s_next,
                            const ThetaGamma& tg);

/// Antisymmetric generator q(z) with exp(q(z)) = Q(z).
Mat3 generator_from_alpha(Complex z);
/// Q(z) as a raw matrix (hot loops).
Mat3 q_matrix(Complex z);
Rotation rotation_from_alpha(Complex z);

/// Inverse stereographic map of e3-column: Q(z) e3 = (2Re z, -2Im z, 1-|z|^2)/(1+|z|^2).
Vec3 stereographic_column(Complex z);
/// Inverse of stereographic_column for v != -e3.
Complex alpha_from_column(const Vec3& v);

struct FrameTransform {
  ALField alpha;          ///< on [lo, hi-1]
  FrameSequence frames;   ///< on [lo, hi]
};

/// Parallel-frame transform of a spin field, with P_lo = p0 (requires S_lo = p0 e3).
FrameTransform alphas_from_spins_frame(const SpinField& s, const Rotation& p0);

struct SpinTransform {
  SpinField spins;        ///< on [lo, hi+1]
  FrameSequence frames;   ///< on [lo, hi+1]
};

/// Frames and spins from amplitudes on [lo, hi], with P_anchor = o (anchor defaults to lo).
SpinTransform spins_from_alphas(const ALField& a, const Rotation& o,
                                std::optional<long> anchor = std::nullopt);

/// Raw frame chain used by spins_from_alphas and the dynamics module.
std::vector<Mat3> frame_chain(std::span<const Complex> alpha, long lo, long anchor,
                              const Mat3& o);

}  // namespace lh::hasimoto
