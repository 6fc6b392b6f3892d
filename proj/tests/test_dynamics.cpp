#include <doctest.h>

#include "lhasimoto/dynamics.hpp"
#include "lhasimoto/hasimoto.hpp"
#include "lhasimoto/sampling.hpp"
#include "oracles.hpp"

using namespace lh;
using namespace lh::dynamics;

namespace {

ALField wn(long k, double beta, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return sampling::sample_white_noise(Beta(beta), Window::symmetric(k), rng);
}

std::vector<Complex> vec(const ALField& a) { return {a.values().begin(), a.values().end()}; }

double max_abs_diff(const ALField& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b[i]));
  return m;
}

ALField plane_wave(long len, double amp, double k, double t) {
  const double omega = 2.0 - 2.0 * (1.0 + amp * amp) * std::cos(k);
  std::vector<Complex> v;
  for (long n = 0; n < len; ++n) v.push_back(std::polar(amp, k * n - omega * t));
  return ALField(Window(0, len - 1), v);
}

}  // namespace

TEST_CASE("AL vector field") {
  CHECK(max_abs_diff(al_vector_field(ALField::zeros(Window(-3, 3))), std::vector<Complex>(7)) == 0);
  const double x = 0.7;
  std::vector<Complex> v(5);
  v[2] = x;
  const auto d = al_vector_field(ALField(Window(-2, 2), v));
  CHECK(std::abs(d.at(0) - Complex(0, -2 * x)) < 1e-15);
  CHECK(std::abs(d.at(1) - Complex(0, x)) < 1e-15);
  CHECK(std::abs(d.at(-1) - Complex(0, x)) < 1e-15);

  const auto a = wn(10, 1.0, 3);
  CHECK(max_abs_diff(al_vector_field(a), oracle::al_rhs(vec(a))) < 1e-12);

  const double amp = 0.5, k = 2 * M_PI / 16;
  const auto pw = plane_wave(16, amp, k, 0.0);
  const auto dp = al_vector_field(pw, Boundary::periodic);
  const double omega = 2.0 - 2.0 * (1.0 + amp * amp) * std::cos(k);
  for (long n = 0; n < 16; ++n) {
    CHECK(std::abs(Complex(0, 1) * dp.at(n) - omega * pw.at(n)) < 1e-14);
  }
}

TEST_CASE("spin vector fields") {
  const SpinField equal(Window(0, 4), std::vector<Vec3>(5, Vec3(0.6, 0, 0.8)));
  for (const auto& v : lhm_vector_field(equal)) CHECK(v.norm() == 0.0);
  for (const auto& v : heis_vector_field(equal)) CHECK(v.norm() == 0.0);

  const SpinField two(Window(0, 1), {Vec3::UnitZ(), Vec3::UnitX()});
  const auto l = lhm_vector_field(two);
  CHECK((l[0] - Vec3(0, -2, 0)).norm() < 1e-15);
  CHECK((l[1] - Vec3(0, 2, 0)).norm() < 1e-15);
  CHECK((heis_vector_field(two)[0] - Vec3(0, -1, 0)).norm() < 1e-15);

  RngStream rng(6, 0);
  const auto s = sampling::sample_gibbs_chain(Beta(1.0), Window(0, 30), rng);
  const auto f = lhm_vector_field(s);
  const auto ref = oracle::lhm_rhs({s.values().begin(), s.values().end()});
  for (long n = 0; n <= 30; ++n) {
    CHECK((f[static_cast<std::size_t>(n)] - ref[static_cast<std::size_t>(n)]).norm() < 1e-12);
    CHECK(std::abs(f[static_cast<std::size_t>(n)].dot(s.at(n))) < 1e-14 * (1 + f[static_cast<std::size_t>(n)].norm()));
  }
  const SpinField anti(Window(0, 1), {Vec3::UnitZ(), -Vec3::UnitZ()});
  CHECK_THROWS_AS(lhm_vector_field(anti), DegeneracyError);
}

TEST_CASE("hamiltonians") {
  const auto z = hamiltonians(ALField::zeros(Window(0, 5)));
  CHECK(z.h_lhm == 0.0);
  CHECK(z.h_al == 0.0);
  const auto one = hamiltonians(ALField(Window(0, 0), {Complex(1, 0)}));
  CHECK(one.h_lhm == doctest::Approx(2 * std::log(2.0)));
  CHECK(one.h_al == doctest::Approx(std::log(2.0)));

  RngStream rng(9, 0);
  for (int i = 0; i < 10; ++i) {
    const auto a = sampling::sample_white_noise(Beta(1.0), Window(-20, 20), rng);
    const auto o = sampling::sample_haar_rotation(rng);
    const auto s = hasimoto::spins_from_alphas(a, o).spins;
    const auto ea = hamiltonians(a);
    const auto es = hamiltonians(s);
    CHECK(std::abs(ea.h_lhm - es.h_lhm) < 1e-10 * std::max(1.0, std::abs(ea.h_lhm)));
    CHECK(std::abs(ea.h_al - es.h_al) < 1e-10 * std::max(1.0, std::abs(ea.h_al)));
    // independent evaluation of the spin forms
    double hs = 0.0;
    for (long n = -20; n < 21; ++n) hs += -2 * std::log(1 - 0.25 * (s.at(n) - s.at(n + 1)).squaredNorm());
    CHECK(std::abs(es.h_lhm - hs) < 1e-10 * std::abs(hs));
  }
}

TEST_CASE("integration basics") {
  const IntegratorConfig cfg;
  const auto a = wn(8, 1.0, 1);
  const auto t0 = integrate(a, Boundary::free, 0.0, cfg);
  REQUIRE(t0.size() == 1);
  CHECK(t0.front() == a);
  CHECK_THROWS_AS(IntegratorConfig({1e-15, 1e-12, 0.1}).validate(), ParameterError);
  CHECK_THROWS_AS(IntegratorConfig({1e-8, 0.0, 0.1}).validate(), ParameterError);
  CHECK_THROWS_AS(integrate(a, Boundary::free, 1.0, cfg, std::vector<double>{2.0}), ParameterError);

  // independent RK4 reference at a fine step
  const auto traj = integrate(a, Boundary::free, 1.0, cfg, std::vector<double>{0.5});
  REQUIRE(traj.size() == 3);
  CHECK(traj.time(1) == 0.5);
  const auto ref = oracle::rk4_al(vec(a), 1.0, 20000);
  CHECK(max_abs_diff(traj.back(), ref) < 1e-8);
}

TEST_CASE("periodic plane wave matches the dispersion relation") {
  const double amp = 0.5, k = 2 * M_PI / 16;
  const auto traj = integrate(plane_wave(16, amp, k, 0.0), Boundary::periodic, 5.0, IntegratorConfig{});
  const auto exact = plane_wave(16, amp, k, 5.0);
  CHECK(max_abs_diff(traj.back(), vec(exact)) < 1e-6);
}

TEST_CASE("free AL conserves both Hamiltonians") {
  const auto a = wn(16, 1.0, 2);
  const auto traj = integrate(a, Boundary::free, 3.0, IntegratorConfig{}, std::vector<double>{1, 2});
  const auto rep = conserved_report(traj);
  REQUIRE(rep.names.size() == 2);
  for (double d : rep.drift) CHECK(d <= 1e-8);
  const auto rows = energy_series(traj, Boundary::free);
  CHECK(rows.size() == 2 * traj.size());
}

TEST_CASE("spin flows conserve energy and stay on the sphere") {
  RngStream rng(17, 0);
  const auto s = sampling::sample_gibbs_chain(Beta(1.0), Window(-32, 32), rng);
  IntegrationLog log;
  const auto heis = integrate(s, Model::heis, Boundary::free, 10.0, IntegratorConfig{}, {}, &log);
  CHECK(conserved_report(heis, Model::heis).drift[0] <= 1e-8);
  CHECK(log.max_renormalization <= 1e-10);
  for (const auto& v : heis.back().values()) CHECK(std::abs(v.norm() - 1) <= 1e-8);

  const auto lhm = integrate(s, Model::lhm, Boundary::free, 2.0, IntegratorConfig{}, {}, &log);
  const auto rep = conserved_report(lhm, Model::lhm);
  for (double d : rep.drift) CHECK(d <= 1e-8);
}

TEST_CASE("time reversibility") {
  const auto a = wn(12, 1.5, 4);
  const IntegratorConfig cfg{1e-10, 1e-12, 0.1};
  const auto fwd = integrate(a, Boundary::free, 1.0, cfg);
  const auto back = integrate(fwd.back(), Boundary::free, -1.0, cfg);
  CHECK(back.time(0) == -1.0);
  CHECK(max_abs_diff(back.front(), vec(a)) < 100 * cfg.rel_tol);
}

TEST_CASE("per-site flux identity to second order") {
  const auto a = wn(10, 1.0, 5);
  auto residual = [&](double h) {
    const double t = 0.5;
    const auto tr = integrate(a, Boundary::free, t + h, IntegratorConfig{1e-13, 1e-15, 0.05},
                              std::vector<double>{t - h, t});
    const auto &am = tr.state(1), &a0 = tr.state(2), &ap = tr.state(3);
    double r = 0.0;
    for (long n = -9; n <= 9; ++n) {
      const double lhs = (std::log1p(std::norm(ap.at(n))) - std::log1p(std::norm(am.at(n)))) / (2 * h);
      const double rhs = -2 * (std::conj(a0.at(n)) * a0.at(n + 1)).imag() +
                         2 * (std::conj(a0.at(n - 1)) * a0.at(n)).imag();
      r = std::max(r, std::abs(lhs - rhs));
    }
    return r;
  };
  const double r1 = residual(1e-2), r2 = residual(5e-3);
  CHECK(r1 < 1e-2);
  CHECK(r1 / r2 > 3.0);
}

TEST_CASE("zero-curvature generator") {
  const auto a = wn(6, 1.0, 8);
  for (long n = -5; n <= 6; ++n) {
    const Mat3 g = zero_curvature_generator(a, n);
    CHECK((g + g.transpose()).norm() == 0.0);
    CHECK((g - oracle::a_gen(a.at_or_zero(n), a.at_or_zero(n - 1))).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK(frame_anchor(Window(-3, 3)) == 0);
  CHECK(frame_anchor(Window(2, 5)) == 2);

  // dQ_n/dt = Q_n A_{n+1} - A_n Q_n; dQ_n/dt by central differences along the AL velocity
  const auto b = wn(8, 2.0, 9);
  const auto bv = vec(b);
  const auto bdot = oracle::al_rhs(bv);
  auto residual = [&](double h) {
    double r = 0.0;
    for (long n = -7; n <= 7; ++n) {
      const auto i = static_cast<std::size_t>(n + 8);
      const Mat3 dq = (oracle::q_big(bv[i] + h * bdot[i]) - oracle::q_big(bv[i] - h * bdot[i])) / (2 * h);
      const Mat3 q = oracle::q_big(b.at(n));
      const Mat3 rhs = q * oracle::a_gen(b.at_or_zero(n + 1), b.at(n)) -
                       oracle::a_gen(b.at(n), b.at_or_zero(n - 1)) * q;
      r = std::max(r, (dq - rhs).cwiseAbs().maxCoeff());
    }
    return r;
  };
  const double r1 = residual(1e-3), r2 = residual(5e-4);
  CHECK(r1 / r2 > 3.0);
  CHECK(residual(1e-5) <= 1e-6);
}

TEST_CASE("frame evolution") {
  const IntegratorConfig cfg;
  const Rotation o = [] {
    RngStream rng(3, 3);
    return sampling::sample_haar_rotation(rng);
  }();
  const auto zero = integrate(ALField::zeros(Window(-4, 4)), Boundary::free, 1.0, cfg,
                              std::vector<double>{0.5});
  const auto fz = frame_evolution(zero, o, cfg);
  for (const auto& fs : fz.states()) {
    for (const auto& p : fs.frames()) CHECK((p.matrix() - o.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  }
  const auto sz = spins_from_frame_traj(fz);
  for (long n = -4; n <= 5; ++n) CHECK((sz.back().at(n) - sz.front().at(n)).norm() < 1e-14);

  // frames from a stored trajectory agree with the joint integration
  const auto a = wn(16, 1.0, 10);
  std::vector<double> ts;
  for (int j = 1; j < 200; ++j) ts.push_back(j / 200.0);
  const auto traj = integrate(a, Boundary::free, 1.0, cfg, ts);
  FrameEvolutionLog flog;
  const auto frames = frame_evolution(traj, o, cfg, &flog);
  const auto joint = evolve_with_frames(a, o, 1.0, cfg, ts);
  REQUIRE(joint.frames.size() == frames.size());
  for (long n = -16; n <= 17; ++n) {
    CHECK((frames.back().at(n).matrix() - joint.frames.back().at(n).matrix()).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK(flog.max_orthogonality_drift < 1e-8);

  // coarse sampling is rejected
  const auto coarse = integrate(a, Boundary::free, 1.0, cfg);
  CHECK_THROWS_AS(frame_evolution(coarse, o, cfg), ResolutionError);

  // gauge equivariance: the frames at time t are the chain built from a(t) and P_anchor(t)
  for (std::size_t i = 0; i < joint.frames.size(); i += 50) {
    const auto st = hasimoto::spins_from_alphas(joint.alpha.state(i), joint.frames.state(i).at(0), 0L);
    for (long n = -16; n <= 17; ++n) {
      CHECK((st.spins.at(n) - joint.frames.state(i).at(n) * Vec3::UnitZ()).norm() < 1e-8);
    }
  }
}

TEST_CASE("frame-evolved spins solve the spin equation") {
  const auto a = wn(16, 1.0, 11);
  RngStream rng(12, 0);
  const Rotation o = sampling::sample_haar_rotation(rng);
  const IntegratorConfig cfg{1e-12, 1e-14, 0.05};
  auto residual = [&](double h) {
    const double t = 0.5;
    const auto ft = evolve_with_frames(a, o, 1.0, cfg, std::vector<double>{t - h, t, t + h});
    const auto s = spins_from_frame_traj(ft.frames);
    std::size_t i = 0;
    while (s.time(i) != t) ++i;
    const auto rhs = lhm_vector_field(s.state(i));
    double r = 0.0;
    for (long n = -16; n <= 17; ++n) {
      const Vec3 d = (s.state(i + 1).at(n) - s.state(i - 1).at(n)) / (2 * h);
      r = std::max(r, (d - rhs[static_cast<std::size_t>(n + 16)]).norm());
    }
    return r;
  };
  const double r1 = residual(1e-3), r2 = residual(5e-4);
  CHECK(r1 <= 1e-4);
  CHECK(r1 / r2 > 3.0);

  const auto ft = evolve_with_frames(a, o, 1.0, IntegratorConfig{}, std::vector<double>{0.25, 0.5, 0.75});
  const auto spins = spins_from_frame_traj(ft.frames);
  const auto rep = conserved_report(spins, Model::lhm);
  CHECK(rep.drift[0] <= 1e-6);
}

TEST_CASE("good-solution diagnostics") {
  const auto zero = integrate(ALField::zeros(Window(-5, 5)), Boundary::free, 1.0, IntegratorConfig{},
                              std::vector<double>{0.5});
  const auto z = good_solution_diagnostics(zero);
  CHECK(z.integral_raw == 0.0);
  CHECK(z.sup_weighted_raw == 0.0);
  const auto zs = good_solution_diagnostics(spins_from_frame_traj(frame_evolution(zero, Rotation(), IntegratorConfig{})));
  CHECK(zs.integral_raw > 0.0);
  CHECK(std::abs(zs.integral_centered) < 1e-15);
  CHECK(std::abs(zs.sup_weighted_centered) < 1e-15);
  CHECK_THROWS_AS(good_solution_diagnostics(zero, GoodSolutionParams{1.5, 2.0, 4.0}), ParameterError);

  // invariance under a global phase
  const auto a = wn(8, 1.0, 13);
  std::vector<Complex> rot;
  for (auto v : a.values()) rot.push_back(v * std::polar(1.0, 0.7));
  const auto t1 = integrate(a, Boundary::free, 1.0, IntegratorConfig{}, std::vector<double>{0.5});
  const auto t2 = integrate(ALField(a.window(), rot), Boundary::free, 1.0, IntegratorConfig{},
                            std::vector<double>{0.5});
  const auto d1 = good_solution_diagnostics(t1), d2 = good_solution_diagnostics(t2);
  CHECK(d1.integral_raw == doctest::Approx(d2.integral_raw).epsilon(1e-9));
  CHECK(d1.sup_weighted_raw == doctest::Approx(d2.sup_weighted_raw).epsilon(1e-9));

  // nested truncations shrink
  const auto big = wn(32, 1.0, 14);
  std::vector<ALField> nested;
  for (long k : {8L, 16L, 32L}) nested.push_back(window_restrict(big, Window::symmetric(k)));
  const auto trajs = integrate_stacked(nested, Boundary::free, 1.0, IntegratorConfig{},
                                       std::vector<double>{0.25, 0.5, 0.75});
  const auto g = good_solution_diagnostics(trajs.back(), GoodSolutionParams{}, trajs);
  REQUIRE(g.truncation_gaps.size() == 2);
  const double s0 = *std::max_element(g.truncation_gaps[0].begin(), g.truncation_gaps[0].end());
  const double s1 = *std::max_element(g.truncation_gaps[1].begin(), g.truncation_gaps[1].end());
  CHECK(s1 < 0.5 * s0);
  CHECK(truncation_gap(trajs[0], trajs[0], 4.0) == std::vector<double>(trajs[0].size(), 0.0));
}

TEST_CASE("stacked integration equals separate integration of one field") {
  const auto a = wn(6, 1.0, 15);
  const auto one = integrate(a, Boundary::free, 0.5, IntegratorConfig{});
  const auto st = integrate_stacked({a}, Boundary::free, 0.5, IntegratorConfig{});
  CHECK(st[0].back() == one.back());
}
