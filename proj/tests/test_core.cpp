#include <doctest.h>

#include <sstream>

#include "lhasimoto/core.hpp"
#include "lhasimoto/sampling.hpp"
#include "lhasimoto/serialize.hpp"
#include "lhasimoto/stats.hpp"

using namespace lh;

TEST_CASE("window basics") {
  const Window w(-4, 4);
  CHECK(w.length() == 9);
  CHECK(w.contains(-4));
  CHECK_FALSE(w.contains(5));
  CHECK(w.contains(Window(-2, 2)));
  CHECK_THROWS_AS(Window(3, 2), ParameterError);
}

TEST_CASE("window_restrict") {
  std::vector<Complex> v;
  for (int i = -4; i <= 4; ++i) v.emplace_back(i, -i);
  const ALField a(Window(-4, 4), v);
  const ALField mid = window_restrict(a, Window(-2, 2));
  REQUIRE(mid.size() == 5);
  for (long n = -2; n <= 2; ++n) CHECK(mid.at(n) == Complex(n, -n));
  CHECK(window_restrict(a, a.window()) == a);
  CHECK_THROWS_AS(window_restrict(mid, Window(-4, 4)), RangeError);
}

TEST_CASE("weighted_sup_norm examples") {
  const ALField a(Window(0, 0), {Complex(1, 0)});
  CHECK(weighted_sup_norm(a, a, 4.0) == 0.0);
  CHECK(weighted_sup_norm(a, 4.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
  const ALField b(Window(1, 1), {Complex(0, 2)});
  const ALField c(Window(1, 1), {Complex(0, 1)});
  CHECK(weighted_sup_norm(b, c, 2.0) ==
        doctest::Approx(std::exp(-2.0 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK_THROWS_AS(weighted_sup_norm(b, c, 0.0), ParameterError);
}

TEST_CASE("weighted_sup_norm is symmetric and zero-extends") {
  RngStream rng(1, 1);
  const auto a = sampling::sample_white_noise(Beta(1.0), Window(-6, 6), rng);
  const auto b = sampling::sample_white_noise(Beta(1.0), Window(-3, 3), rng);
  CHECK(weighted_sup_norm(a, b, 4.0) == weighted_sup_norm(b, a, 4.0));
  double expect = 0.0;
  for (long n = -6; n <= 6; ++n) {
    expect += std::exp(-4.0 * japanese(n)) * std::norm(a.at(n) - b.at_or_zero(n));
  }
  CHECK(weighted_sup_norm(a, b, 4.0) == doctest::Approx(expect).epsilon(1e-14));
  // equal on the union window only when the extra sites vanish
  std::vector<Complex> padded(13);
  for (long n = -3; n <= 3; ++n) padded[static_cast<std::size_t>(n + 6)] = b.at(n);
  CHECK(weighted_sup_norm(ALField(Window(-6, 6), padded), b, 4.0) == 0.0);
}

TEST_CASE("spin field and rotation validation") {
  CHECK_THROWS_AS(SpinField(Window(0, 0), {Vec3(1, 1, 0)}), DomainError);
  const auto s = SpinField::normalized(Window(0, 0), {Vec3(3, 0, 4)});
  CHECK(s.at(0).norm() == doctest::Approx(1.0));
  Mat3 m = Mat3::Identity();
  m(0, 0) = -1;  // det -1
  CHECK_THROWS(Rotation{m});
  CHECK_THROWS(Rotation{2.0 * Mat3::Identity()});
  const Rotation r = Rotation::orthonormalized(Mat3::Identity() + 1e-9 * Mat3::Ones());
  CHECK(r.orthogonality_defect() < 1e-14);
}

TEST_CASE("beta must be positive") {
  CHECK_THROWS_AS(Beta(0.0), ParameterError);
  CHECK_THROWS_AS(Beta(-1.0), ParameterError);
  CHECK_THROWS_AS(Beta(std::nan("")), ParameterError);
  CHECK(Beta(0.5).value() == 0.5);
}

TEST_CASE("trajectory ordering") {
  Trajectory<ALField> t;
  t.push_back(0.0, ALField::zeros(Window(0, 1)));
  CHECK_THROWS_AS(t.push_back(0.0, ALField::zeros(Window(0, 1))), ParameterError);
  CHECK_THROWS_AS(t.push_back(1.0, ALField::zeros(Window(0, 2))), ParameterError);
}

TEST_CASE("rng streams are deterministic and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool differ = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differ = differ || x != c.next_u64();
  }
  CHECK(differ);
  CHECK(RngStream::family_id(1, 0) != RngStream::family_id(2, 0));
  CHECK(RngStream::family_id(1, 0) != RngStream::family_id(1, 1));
  RngStream u(3, 3);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("serialization round trips bit-exactly") {
  RngStream rng(5, 5);
  const auto a = sampling::sample_white_noise(Beta(0.5), Window(-5, 7), rng);
  const auto s = sampling::sample_gibbs_chain(Beta(1.0), Window(2, 9), rng);
  std::vector<Rotation> fr;
  for (int i = 0; i < 4; ++i) fr.push_back(sampling::sample_haar_rotation(rng));
  const FrameSequence f(Window(-1, 2), fr);

  auto ra = io::parse_record(io::to_record(0.25, a));
  CHECK(ra.t == 0.25);
  CHECK(std::get<ALField>(ra.state) == a);
  CHECK(std::get<SpinField>(io::parse_record(io::to_record(1.0, s)).state) == s);
  CHECK(std::get<FrameSequence>(io::parse_record(io::to_record(-3.5, f)).state) == f);

  Trajectory<ALField> traj;
  traj.push_back(0.0, a);
  traj.push_back(0.1, a);
  std::stringstream ss;
  io::write_trajectory(ss, traj);
  const auto back = io::read_trajectory<ALField>(ss);
  REQUIRE(back.size() == 2);
  CHECK(back.time(1) == 0.1);
  CHECK(back.state(1) == a);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS_AS(io::parse_record("{\"t\":0}"), ParameterError);
  CHECK_THROWS_AS(io::parse_record("not json"), ParameterError);
  CHECK_THROWS_AS(io::parse_record(R"({"t":0,"kind":"spin","lo":0,"values":[[1,1,0]]})"),
                  DomainError);
}

TEST_CASE("scalar csv") {
  std::ostringstream os;
  io::write_scalar_csv(os, {{0.0, "H_AL", 1.5}, {0.5, "H_AL", 1.25}});
  CHECK(os.str().rfind("t,name,value\n", 0) == 0);
  CHECK(os.str().find("H_AL") != std::string::npos);
}

TEST_CASE("stats helpers") {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  const auto m = stats::mean_se(xs);
  CHECK(m.mean == doctest::Approx(3.0));
  CHECK(m.se == doctest::Approx(std::sqrt(2.5 / 5.0)));
  CHECK(stats::within_se(m, 3.0));

  RngStream rng(9, 9);
  std::vector<double> u, v;
  for (int i = 0; i < 20000; ++i) u.push_back(rng.uniform());
  for (int i = 0; i < 20000; ++i) v.push_back(rng.uniform());
  CHECK(stats::ks_one_sample(u, [](double x) { return x; }).p_value > 0.01);
  CHECK(stats::ks_two_sample(u, v).p_value > 0.01);
  std::vector<double> shifted = u;
  for (auto& x : shifted) x = x * x;
  CHECK(stats::ks_one_sample(shifted, [](double x) { return x; }).p_value < 1e-6);
  CHECK(stats::kolmogorov_survival(0.0) == doctest::Approx(1.0));
  CHECK(stats::kolmogorov_survival(1.36) == doctest::Approx(0.049).epsilon(0.02));

  std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto fit = stats::least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(stats::pearson(x, y).r == doctest::Approx(1.0));

  // exact Pareto with index 3
  std::vector<double> p;
  for (int i = 0; i < 200000; ++i) p.push_back(std::pow(rng.uniform(), -1.0 / 3.0));
  CHECK(stats::hill_tail_index(p, 2000) == doctest::Approx(3.0).epsilon(0.1));
}
