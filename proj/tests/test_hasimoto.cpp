#include <doctest.h>

#include "lhasimoto/hasimoto.hpp"
#include "lhasimoto/sampling.hpp"
#include "lhasimoto/stats.hpp"
#include "oracles.hpp"

using namespace lh;
using namespace lh::hasimoto;

namespace {

SpinField fan(long lo, long hi, double step) {
  std::vector<Vec3> v;
  for (long n = lo; n <= hi; ++n) v.emplace_back(std::sin(n * step), 0.0, std::cos(n * step));
  return SpinField::normalized(Window(lo, hi), v);
}

SpinField gibbs(long len, std::uint64_t seed, double beta = 1.0) {
  RngStream rng(seed, 0);
  return sampling::sample_gibbs_chain(Beta(beta), Window(0, len - 1), rng);
}

double max_diff(const SpinField& a, const SpinField& b) {
  double m = 0.0;
  for (long n = a.window().lo; n <= a.window().hi; ++n) m = std::max(m, (a.at(n) - b.at(n)).norm());
  return m;
}

}  // namespace

TEST_CASE("planar fan has constant curvature and no torsion") {
  const auto tg = theta_gamma_from_spins(fan(0, 10, M_PI / 4));
  for (long n = 0; n <= 9; ++n) CHECK(tg.theta_at(n) == doctest::Approx(M_PI / 4));
  for (long n = 1; n <= 9; ++n) CHECK(std::abs(tg.gamma_at(n)) < 1e-14);
}

TEST_CASE("right-handed orthonormal triple") {
  const SpinField s(Window(0, 2), {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
  const auto tg = theta_gamma_from_spins(s);
  CHECK(tg.theta_at(0) == doctest::Approx(M_PI / 2));
  CHECK(tg.theta_at(1) == doctest::Approx(M_PI / 2));
  CHECK(tg.gamma_at(1) == doctest::Approx(M_PI / 2));
}

TEST_CASE("degenerate spins raise") {
  const SpinField s(Window(0, 3), std::vector<Vec3>(4, Vec3::UnitZ()));
  CHECK_THROWS_AS(theta_gamma_from_spins(s), DegeneracyError);
  CHECK_THROWS_AS(ThetaGamma(Window(0, 0), {0.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(ThetaGamma(Window(0, 0), {1.0}, {-M_PI}), DomainError);
}

TEST_CASE("alpha from theta gamma") {
  const ThetaGamma flat(Window(0, 4), std::vector<double>(5, M_PI / 2), std::vector<double>(5, 0));
  const auto flat_alpha = alpha_from_theta_gamma(flat);
  for (auto z : flat_alpha.values()) {
    CHECK(std::abs(z - Complex(1, 0)) < 1e-15);
  }
  const ThetaGamma one(Window(0, 0), {M_PI / 3}, {M_PI / 2});
  const Complex z = alpha_from_theta_gamma(one).at(0);
  CHECK(std::abs(z - Complex(0, -1.0 / std::sqrt(3.0))) < 1e-15);

  // gauge-invariant product
  const auto s = gibbs(40, 3);
  const auto tg = theta_gamma_from_spins(s);
  const auto a = alpha_from_theta_gamma(tg);
  for (long n = 1; n < 39; ++n) {
    const Complex lhs = std::conj(a.at(n)) * a.at(n - 1);
    const Complex rhs = std::tan(tg.theta_at(n) / 2) * std::tan(tg.theta_at(n - 1) / 2) *
                        std::polar(1.0, tg.gamma_at(n));
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("reconstruction and the recursive dot-product identities") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = gibbs(128, seed + 100);
    const auto tg = theta_gamma_from_spins(s);
    const auto r = reconstruct_spins(s.at(0), s.at(1), tg);
    CHECK(max_diff(r, s) < 1e-8);
    const auto tg2 = theta_gamma_from_spins(r);
    for (long n = 0; n < 127; ++n) CHECK(std::abs(tg2.theta_at(n) - tg.theta_at(n)) < 1e-8);

    // reconstruction from the middle uses the backward recursion too
    const auto mid = reconstruct_spins(60, s.at(60), s.at(61), tg);
    CHECK(max_diff(mid, s) < 1e-8);

    for (long n = 0; n + 3 <= 127; ++n) {
      const double t0 = tg.theta_at(n), t1 = tg.theta_at(n + 1), t2 = tg.theta_at(n + 2);
      const double g1 = tg.gamma_at(n + 1), g2 = tg.gamma_at(n + 2);
      CHECK(std::abs(s.at(n).dot(s.at(n + 1)) - std::cos(t0)) < 1e-8);
      CHECK(std::abs(s.at(n).dot(s.at(n + 2)) -
                     (std::cos(t0) * std::cos(t1) - std::sin(t1) * std::sin(t0) * std::cos(g1))) <
            1e-8);
      const double d3 =
          std::cos(t0) * (std::cos(t1) * std::cos(t2) - std::cos(g2) * std::sin(t1) * std::sin(t2)) +
          (-(std::sin(t1) * std::cos(t2) + std::cos(t1) * std::sin(t2) * std::cos(g2)) * std::cos(g1) +
           std::sin(t2) * std::sin(g1) * std::sin(g2)) *
              std::sin(t0);
      CHECK(std::abs(s.at(n).dot(s.at(n + 3)) - d3) < 1e-8);
    }
  }
}

TEST_CASE("reconstruction special cases") {
  const ThetaGamma planar(Window(0, 8), std::vector<double>(9, M_PI / 4), std::vector<double>(9, 0));
  const auto r = reconstruct_spins(Vec3::UnitZ(), Vec3(std::sin(M_PI / 4), 0, std::cos(M_PI / 4)),
                                   planar);
  for (long n = 1; n < 9; ++n) {
    CHECK(std::abs(r.at(n - 1).dot(r.at(n).cross(r.at(n + 1)))) < 1e-10);
  }
  const ThetaGamma right(Window(0, 1), {M_PI / 2, M_PI / 2}, {0.0, M_PI / 2});
  const auto q = reconstruct_spins(Vec3::UnitX(), Vec3::UnitY(), right);
  CHECK(std::abs(q.at(0).dot(q.at(2))) < 1e-14);
  CHECK_THROWS_AS(reconstruct_spins(Vec3::UnitX(), Vec3::UnitX(), right), ConsistencyError);
}

TEST_CASE("Q(z) is exp(q(z)) and a proper rotation") {
  RngStream rng(12, 0);
  for (int i = 0; i < 10000; ++i) {
    const double mag = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    const Complex z = std::polar(mag, 2 * M_PI * rng.uniform());
    const Mat3 q = q_matrix(z);
    REQUIRE(((q - oracle::q_big(z)).cwiseAbs().maxCoeff()) < 1e-12);
    REQUIRE(((q - oracle::expm(oracle::q_small(z))).cwiseAbs().maxCoeff()) < 1e-12);
    REQUIRE(((generator_from_alpha(z) - oracle::q_small(z)).cwiseAbs().maxCoeff()) < 1e-12);
    REQUIRE(orthogonality_defect(q) < 1e-12);
    REQUIRE(std::abs(q.determinant() - 1.0) < 1e-12);
    const Vec3 col = stereographic_column(z);
    REQUIRE((col - q.col(2)).norm() < 1e-12);
    REQUIRE(std::abs(alpha_from_column(col) - z) < 1e-9 * std::max(1.0, std::norm(z)));
  }
  CHECK(q_matrix(0.0) == Mat3::Identity());
  CHECK((rotation_from_alpha(1.0) * Vec3::UnitZ() - Vec3::UnitX()).norm() < 1e-15);
  CHECK_THROWS_AS(rotation_from_alpha(Complex(std::nan(""), 0)), DomainError);
}

TEST_CASE("frame transform consistency identities") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = gibbs(128, seed + 500, 0.7);
    const Rotation p0 = Rotation::orthonormalized([&] {
      Mat3 m = sampling::completion_frame(s.at(0));
      if (m.determinant() < 0) m.col(0) = -m.col(0);
      return m;
    }());
    const auto ft = alphas_from_spins_frame(s, p0);
    const auto& a = ft.alpha;
    const auto tg = theta_gamma_from_spins(s);
    for (long n = 0; n < 127; ++n) {
      const double m = std::norm(a.at(n));
      CHECK(std::abs(s.at(n).dot(s.at(n + 1)) - (1 - m) / (1 + m)) < 1e-10);
      CHECK(std::abs(std::abs(a.at(n)) - std::tan(tg.theta_at(n) / 2)) < 1e-8 * (1 + std::abs(a.at(n))));
      CHECK((ft.frames.at(n) * Vec3::UnitZ() - s.at(n)).norm() < 1e-10);
      if (n == 0) continue;
      const Vec3 c1 = s.at(n - 1).cross(s.at(n));
      const Vec3 c2 = s.at(n).cross(s.at(n + 1));
      const Complex lhs(c1.dot(c2), s.at(n - 1).dot(c2));
      const double mm = std::norm(a.at(n - 1));
      const Complex rhs = 4.0 * std::conj(a.at(n)) * a.at(n - 1) / ((1 + m) * (1 + mm));
      CHECK(std::abs(lhs - rhs) < 1e-10);
      const Complex gauge = std::tan(tg.theta_at(n) / 2) * std::tan(tg.theta_at(n - 1) / 2) *
                            std::polar(1.0, tg.gamma_at(n));
      CHECK(std::abs(std::conj(a.at(n)) * a.at(n - 1) - gauge) < 1e-8 * (1 + std::abs(gauge)));
    }
  }
}

TEST_CASE("frame transform round trips") {
  RngStream rng(44, 0);
  for (int k = 0; k < 20; ++k) {
    const auto a = sampling::sample_white_noise(Beta(1.0), Window(-64, 63), rng);
    const Rotation o = sampling::sample_haar_rotation(rng);
    const auto st = spins_from_alphas(a, o);
    CHECK(st.spins.window() == Window(-64, 64));
    const auto back = alphas_from_spins_frame(st.spins, o);
    for (long n = -64; n <= 63; ++n) {
      CHECK(std::abs(back.alpha.at(n) - a.at(n)) < 1e-10 * (1 + std::norm(a.at(n))));
    }
    for (const auto& f : st.frames.frames()) CHECK(f.orthogonality_defect() < 1e-10);

    // gauge covariance
    const Rotation r = sampling::sample_haar_rotation(rng);
    const auto rotated = spins_from_alphas(a, r * o);
    for (long n = -64; n <= 64; ++n) {
      CHECK((rotated.spins.at(n) - r * st.spins.at(n)).norm() < 1e-10);
    }
  }
  // spins -> alphas -> spins
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = gibbs(128, seed + 900);
    Mat3 m = sampling::completion_frame(s.at(0));
    if (m.determinant() < 0) m.col(0) = -m.col(0);
    const Rotation p0(m);
    const auto a = alphas_from_spins_frame(s, p0).alpha;
    CHECK(max_diff(spins_from_alphas(a, p0).spins, s) < 1e-8);
  }
}

TEST_CASE("frame transform edge cases") {
  const Rotation o = Rotation::identity();
  const SpinField flat(Window(0, 5), std::vector<Vec3>(6, Vec3::UnitZ()));
  const auto ft = alphas_from_spins_frame(flat, o);
  for (auto z : ft.alpha.values()) CHECK(z == Complex(0, 0));
  for (const auto& f : ft.frames.frames()) CHECK(f == o);

  const auto st = spins_from_alphas(ALField(Window(0, 0), {Complex(1, 0)}), o);
  CHECK((st.spins.at(0) - Vec3::UnitZ()).norm() < 1e-15);
  CHECK((st.spins.at(1) - Vec3::UnitX()).norm() < 1e-15);

  const SpinField anti(Window(0, 1), {Vec3::UnitZ(), -Vec3::UnitZ()});
  CHECK_THROWS_AS(alphas_from_spins_frame(anti, o), DegeneracyError);
  const SpinField off(Window(0, 1), {Vec3::UnitX(), Vec3::UnitY()});
  CHECK_THROWS_AS(alphas_from_spins_frame(off, o), ConsistencyError);
}

TEST_CASE("white noise plus Haar gauge gives the Gibbs bond law") {
  const double beta = 1.0;
  std::vector<double> ours, ref;
  for (std::size_t i = 0; i < 2000; ++i) {
    RngStream rng(55, i);
    const auto a = sampling::sample_white_noise(Beta(beta), Window(0, 19), rng);
    const auto st = spins_from_alphas(a, sampling::sample_haar_rotation(rng));
    const auto c = sampling::sample_gibbs_chain(Beta(beta), Window(0, 20), rng);
    for (long n = 0; n < 20; ++n) {
      ours.push_back(st.spins.at(n).dot(st.spins.at(n + 1)));
      ref.push_back(c.at(n).dot(c.at(n + 1)));
    }
  }
  CHECK(stats::ks_two_sample(ours, ref).p_value > 0.01);
}
