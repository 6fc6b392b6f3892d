#include "lhasimoto/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lhasimoto/core.hpp"

namespace lh::ode {

namespace {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

long site_for(const Options& opt, std::size_t i) {
  return opt.site_of ? opt.site_of(i) : static_cast<long>(i);
}

}  // namespace

void hermite(double t0, const State& y0, const State& f0, double t1, const State& y1,
             const State& f1, double t, State& out) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  out.resize(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) {
    out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
  }
}

void hermite_derivative(double t0, const State& y0, const State& f0, double t1,
                        const State& y1, const State& f1, double t, State& out) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / h;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / h;
  const double d11 = 3 * s2 - 2 * s;
  out.resize(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) {
    out[i] = d00 * y0[i] + d10 * f0[i] + d01 * y1[i] + d11 * f1[i];
  }
}

std::vector<State> solve(const Rhs& rhs, double t0, const State& y0,
                         std::span<const double> sample_times, const Options& opt,
                         Stats* stats, const std::function<void(const StepData&)>& on_step) {
  if (!(opt.rtol > 0) || !(opt.atol > 0) || !(opt.max_step > 0)) {
    throw ParameterError("ode::solve: tolerances and max_step must be positive");
  }
  Stats local;
  Stats& st = stats ? *stats : local;
  std::vector<State> out;
  out.reserve(sample_times.size());
  if (sample_times.empty()) return out;

  const double t_end = sample_times.back();
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double prev = i == 0 ? t0 : sample_times[i - 1];
    if (dir * (sample_times[i] - prev) < 0.0 || (i > 0 && sample_times[i] == prev)) {
      throw ParameterError("ode::solve: sample times must be strictly monotone away from t0");
    }
  }

  const std::size_t n = y0.size();
  State y = y0;
  State f(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n);
  rhs(t0, y, f);
  ++st.rhs_calls;

  double t = t0;
  double h = opt.initial_step;
  if (!(h > 0)) {
    double scale = 0.0;
    double dscale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      scale = std::max(scale, std::abs(y[i]) / sc);
      dscale = std::max(dscale, std::abs(f[i]) / sc);
    }
    h = (scale < 1e-5 || dscale < 1e-5) ? 1e-6 : 0.01 * scale / dscale;
    h = std::min(h, opt.max_step);
  }

  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] == t) {
    out.push_back(y);
    ++next;
  }

  while (next < sample_times.size()) {
    if (st.accepted + st.rejected >= opt.max_steps) {
      throw IntegrationError("ode::solve: step budget exhausted at t=" + std::to_string(t), t,
                             -1);
    }
    const double target = sample_times[next];
    bool clipped = false;
    double step = std::min(h, opt.max_step);
    if (step >= dir * (target - t)) {
      step = dir * (target - t);
      clipped = true;
    }
    const double hs = dir * step;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * f[i];
    rhs(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * f[i] + a32 * k2[i]);
    rhs(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + hs * (b1 * f[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + hs, y1, k7);
    st.rhs_calls += 6;

    double err = 0.0;
    std::size_t worst = 0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = hs * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      const double r = std::abs(ei) / sc;
      if (!std::isfinite(y1[i]) || !std::isfinite(r)) {
        finite = false;
        worst = i;
        break;
      }
      if (r > err) {
        err = r;
        worst = i;
      }
    }
    if (!finite) err = 1e10;

    if (err <= 1.0) {
      const double t_new = clipped ? target : t + hs;
      double proj = 0.0;
      if (opt.project) {
        proj = opt.project(y1);
        st.max_projection = std::max(st.max_projection, proj);
        if (proj > 0.0) rhs(t_new, y1, k7);
      }
      if (on_step) on_step(StepData{t, t_new, &y, &f, &y1, &k7});
      t = t_new;
      std::swap(y, y1);
      std::swap(f, k7);
      ++st.accepted;
      if (clipped) {
        out.push_back(y);
        ++next;
      }
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // a clipped step says nothing about how large the next one may be
      h = clipped ? std::max(h, step * fac) : step * fac;
    } else {
      ++st.rejected;
      h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (h < opt.min_step * std::max(1.0, std::abs(t))) {
        const long site = site_for(opt, worst);
        throw IntegrationError("ode::solve: step size underflow at t=" + std::to_string(t) +
                                   " near site " + std::to_string(site),
                               t, site);
      }
    }
  }
  return out;
}

}  // namespace lh::ode
