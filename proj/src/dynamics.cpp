#include "lhasimoto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lhasimoto/hasimoto.hpp"
#include "lhasimoto/ode.hpp"

namespace lh::dynamics {

Model parse_model(const std::string& s) {
  if (s == "al") return Model::al;
  if (s == "lhm") return Model::lhm;
  if (s == "heis") return Model::heis;
  throw ParameterError("unknown model '" + s + "' (al|lhm|heis)");
}

Boundary parse_boundary(const std::string& s) {
  if (s == "free") return Boundary::free;
  if (s == "periodic") return Boundary::periodic;
  throw ParameterError("unknown boundary '" + s + "' (free|periodic)");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::al: return "al";
    case Model::lhm: return "lhm";
    case Model::heis: return "heis";
  }
  return "?";
}

std::string to_string(Boundary b) { return b == Boundary::free ? "free" : "periodic"; }

void IntegratorConfig::validate() const {
  if (!(rel_tol >= 1e-14)) throw ParameterError("integrator: rel_tol must be >= 1e-14");
  if (!(abs_tol > 0)) throw ParameterError("integrator: abs_tol must be positive");
  if (!(max_step > 0)) throw ParameterError("integrator: max_step must be positive");
}

namespace {

ode::Options options_from(const IntegratorConfig& cfg) {
  cfg.validate();
  ode::Options o;
  o.rtol = cfg.rel_tol;
  o.atol = cfg.abs_tol;
  o.max_step = cfg.max_step;
  return o;
}

// Raw AL right-hand side on interleaved (re, im) storage.
void al_rhs(const double* y, double* dy, std::size_t n, Boundary b) {
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a(y[2 * k], y[2 * k + 1]);
    Complex nb{};
    if (k + 1 < n) {
      nb += Complex(y[2 * k + 2], y[2 * k + 3]);
    } else if (b == Boundary::periodic) {
      nb += Complex(y[0], y[1]);
    }
    if (k > 0) {
      nb += Complex(y[2 * k - 2], y[2 * k - 1]);
    } else if (b == Boundary::periodic) {
      nb += Complex(y[2 * n - 2], y[2 * n - 1]);
    }
    const Complex d = Complex(0, 1) * ((1.0 + std::norm(a)) * nb - 2.0 * a);
    dy[2 * k] = d.real();
    dy[2 * k + 1] = d.imag();
  }
}

std::vector<double> pack(const ALField& a) {
  std::vector<double> y;
  y.reserve(2 * a.size());
  for (const auto& z : a.values()) {
    y.push_back(z.real());
    y.push_back(z.imag());
  }
  return y;
}

ALField unpack(const Window& w, const double* y) {
  std::vector<Complex> v(w.length());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = Complex(y[2 * k], y[2 * k + 1]);
  return ALField(w, std::move(v));
}

Vec3 spin_at(const std::vector<double>& y, std::size_t k) {
  return Vec3(y[3 * k], y[3 * k + 1], y[3 * k + 2]);
}

// Neighbour index or npos under the given boundary.
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t right_of(std::size_t k, std::size_t n, Boundary b) {
  if (k + 1 < n) return k + 1;
  return b == Boundary::periodic && n > 1 ? 0 : npos;
}

std::size_t left_of(std::size_t k, std::size_t n, Boundary b) {
  if (k > 0) return k - 1;
  return b == Boundary::periodic && n > 1 ? n - 1 : npos;
}

template <typename Get>
std::vector<Vec3> spin_field_rhs(std::size_t n, long lo, Model m, Boundary b, Get get) {
  std::vector<Vec3> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 s = get(k);
    Vec3 h = Vec3::Zero();
    for (std::size_t j : {right_of(k, n, b), left_of(k, n, b)}) {
      if (j == npos) continue;
      const Vec3 t = get(j);
      if (m == Model::lhm) {
        const double d = 1.0 + s.dot(t);
        if (d <= hasimoto::kAntiparallelEps) {
          const long site = lo + static_cast<long>(std::min(k, j));
          throw DegeneracyError("lhm_vector_field: antiparallel neighbours at site " +
                                    std::to_string(site),
                                site);
        }
        h += 2.0 * t / d;
      } else {
        h += t;
      }
    }
    out[k] = -s.cross(h);
  }
  return out;
}

Mat3 generator(Complex a, Complex am1) {
  const double re_prod = (std::conj(a) * am1).real();
  const Complex d = a - am1;
  Mat3 m;
  m << 0.0, -2.0 * re_prod, -2.0 * d.imag(),
       2.0 * re_prod, 0.0, -2.0 * d.real(),
       2.0 * d.imag(), 2.0 * d.real(), 0.0;
  return m;
}

double orthonormalize_block(double* p) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = p[i];
  const double drift = orthogonality_defect(m);
  const Mat3 g = gram_schmidt(m);
  for (int i = 0; i < 9; ++i) p[i] = g(i / 3, i % 3);
  return drift;
}

}  // namespace

ALField al_vector_field(const ALField& a, Boundary b) {
  const auto y = pack(a);
  std::vector<double> dy(y.size());
  al_rhs(y.data(), dy.data(), a.size(), b);
  return unpack(a.window(), dy.data());
}

std::vector<Vec3> lhm_vector_field(const SpinField& s, Boundary b) {
  return spin_field_rhs(s.size(), s.window().lo, Model::lhm, b,
                        [&](std::size_t k) { return s.values()[k]; });
}

std::vector<Vec3> heis_vector_field(const SpinField& s, Boundary b) {
  return spin_field_rhs(s.size(), s.window().lo, Model::heis, b,
                        [&](std::size_t k) { return s.values()[k]; });
}

Energies hamiltonians(const ALField& a, Boundary b) {
  Energies e;
  const auto v = a.values();
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::norm(v[k]);
    e.h_lhm += 2.0 * std::log1p(m);
    e.h_al += std::log1p(m);
    e.h_heis += 2.0 * m / (1.0 + m);
    const std::size_t r = right_of(k, n, b);
    if (r != npos) e.h_al -= (std::conj(v[k]) * v[r]).real();
  }
  return e;
}

namespace {

// Proper rotation whose third column is s.
Mat3 frame_through(const Vec3& s) {
  Eigen::Index i = 0;
  s.cwiseAbs().minCoeff(&i);
  const Vec3 e = Vec3::Unit(i);
  const Vec3 c1 = e.cross(s).normalized();
  const Vec3 c2 = s.cross(c1);
  Mat3 m;
  m.col(0) = c1;
  m.col(1) = c2;
  m.col(2) = s;
  return m;
}

}  // namespace

Energies hamiltonians(const SpinField& s, Boundary b) {
  Energies e;
  const auto v = s.values();
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = right_of(k, n, b);
    if (r == npos) continue;
    const double d = v[k].dot(v[r]);
    if (1.0 + d <= hasimoto::kAntiparallelEps) {
      const long site = s.window().lo + static_cast<long>(k);
      throw DegeneracyError("hamiltonians: antiparallel neighbours at site " +
                                std::to_string(site),
                            site);
    }
    // 1 - |S - S'|^2 / 4 = (1 + S.S') / 2
    e.h_lhm += -2.0 * std::log(0.5 * (1.0 + d));
    e.h_heis += 0.5 * (v[k] - v[r]).squaredNorm();
  }
  if (b == Boundary::free && n >= 2) {
    const Rotation p0(frame_through(v[0]));
    const auto ft = hasimoto::alphas_from_spins_frame(s, p0);
    e.h_al = hamiltonians(ft.alpha, Boundary::free).h_al;
  } else {
    e.h_al = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}

namespace {

ConservedReport report_from(const std::vector<std::string>& names,
                            const std::vector<std::vector<double>>& series) {
  ConservedReport r;
  r.names = names;
  for (const auto& s : series) {
    const double h0 = s.front();
    double d = 0.0;
    for (double h : s) d = std::max(d, std::abs(h - h0));
    r.initial.push_back(h0);
    r.drift.push_back(d / std::max(1.0, std::abs(h0)));
  }
  return r;
}

std::vector<std::string> spin_names(Model m, Boundary b) {
  if (m == Model::heis) return {"H_Heis"};
  if (b == Boundary::free) return {"H_LHM", "H_AL"};
  return {"H_LHM"};
}

double pick(const Energies& e, const std::string& name) {
  if (name == "H_LHM") return e.h_lhm;
  if (name == "H_AL") return e.h_al;
  return e.h_heis;
}

}  // namespace

ConservedReport conserved_report(const Trajectory<ALField>& traj, Boundary b) {
  if (traj.empty()) throw ParameterError("conserved_report: empty trajectory");
  const std::vector<std::string> names{"H_LHM", "H_AL"};
  std::vector<std::vector<double>> series(names.size());
  for (const auto& a : traj.states()) {
    const auto e = hamiltonians(a, b);
    for (std::size_t i = 0; i < names.size(); ++i) series[i].push_back(pick(e, names[i]));
  }
  return report_from(names, series);
}

ConservedReport conserved_report(const Trajectory<SpinField>& traj, Model m, Boundary b) {
  if (traj.empty()) throw ParameterError("conserved_report: empty trajectory");
  const auto names = spin_names(m, b);
  std::vector<std::vector<double>> series(names.size());
  for (const auto& s : traj.states()) {
    const auto e = hamiltonians(s, b);
    for (std::size_t i = 0; i < names.size(); ++i) series[i].push_back(pick(e, names[i]));
  }
  return report_from(names, series);
}

std::vector<EnergyRow> energy_series(const Trajectory<ALField>& traj, Boundary b) {
  std::vector<EnergyRow> rows;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto e = hamiltonians(traj.state(i), b);
    rows.push_back({traj.time(i), "H_LHM", e.h_lhm});
    rows.push_back({traj.time(i), "H_AL", e.h_al});
  }
  return rows;
}

std::vector<EnergyRow> energy_series(const Trajectory<SpinField>& traj, Model m, Boundary b) {
  std::vector<EnergyRow> rows;
  const auto names = spin_names(m, b);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto e = hamiltonians(traj.state(i), b);
    for (const auto& nm : names) rows.push_back({traj.time(i), nm, pick(e, nm)});
  }
  return rows;
}

std::vector<double> output_times(double t_final, std::span<const double> sample_times) {
  if (!std::isfinite(t_final)) throw ParameterError("integrate: t_final must be finite");
  const double lo = std::min(0.0, t_final);
  const double hi = std::max(0.0, t_final);
  std::vector<double> ts{0.0, t_final};
  for (double t : sample_times) {
    if (!(t >= lo && t <= hi)) {
      throw ParameterError("integrate: sample time " + std::to_string(t) +
                           " outside [0, t_final]");
    }
    ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

namespace {

// Runs ode::solve from 0 to every output time. Returns states aligned with `times`
// (ascending, contains 0).
std::vector<std::vector<double>> run(const ode::Rhs& rhs, const std::vector<double>& y0,
                                     const std::vector<double>& times, const ode::Options& opt,
                                     IntegrationLog* log) {
  std::vector<std::vector<double>> states(times.size());
  const auto zero = static_cast<std::size_t>(
      std::find(times.begin(), times.end(), 0.0) - times.begin());
  states[zero] = y0;
  ode::Stats st;
  if (zero + 1 < times.size()) {
    std::span<const double> fwd(times.data() + zero + 1, times.size() - zero - 1);
    auto ys = ode::solve(rhs, 0.0, y0, fwd, opt, &st);
    for (std::size_t i = 0; i < ys.size(); ++i) states[zero + 1 + i] = std::move(ys[i]);
  }
  if (zero > 0) {
    std::vector<double> bwd(times.rend() - static_cast<long>(zero), times.rend());
    auto ys = ode::solve(rhs, 0.0, y0, bwd, opt, &st);
    for (std::size_t i = 0; i < ys.size(); ++i) states[zero - 1 - i] = std::move(ys[i]);
  }
  if (log) {
    log->accepted += st.accepted;
    log->rejected += st.rejected;
    log->max_renormalization = std::max(log->max_renormalization, st.max_projection);
  }
  return states;
}

}  // namespace

Trajectory<ALField> integrate(const ALField& a0, Boundary b, double t_final,
                              const IntegratorConfig& cfg, std::span<const double> sample_times,
                              IntegrationLog* log) {
  auto trajs = integrate_stacked({a0}, b, t_final, cfg, sample_times, log);
  return std::move(trajs.front());
}

std::vector<Trajectory<ALField>> integrate_stacked(const std::vector<ALField>& fields,
                                                   Boundary b, double t_final,
                                                   const IntegratorConfig& cfg,
                                                   std::span<const double> sample_times,
                                                   IntegrationLog* log) {
  if (fields.empty()) throw ParameterError("integrate_stacked: no fields");
  auto opt = options_from(cfg);
  const auto times = output_times(t_final, sample_times);

  std::vector<std::size_t> offsets{0};
  std::vector<double> y0;
  for (const auto& f : fields) {
    const auto y = pack(f);
    y0.insert(y0.end(), y.begin(), y.end());
    offsets.push_back(y0.size());
  }
  opt.site_of = [&](std::size_t i) {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), i) - 1;
    const auto k = static_cast<std::size_t>(it - offsets.begin());
    return fields[k].window().lo + static_cast<long>((i - *it) / 2);
  };
  const ode::Rhs rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      al_rhs(y.data() + offsets[k], dy.data() + offsets[k], fields[k].size(), b);
    }
  };
  const auto states = run(rhs, y0, times, opt, log);

  std::vector<Trajectory<ALField>> out(fields.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      out[k].push_back(times[i], unpack(fields[k].window(), states[i].data() + offsets[k]));
    }
  }
  return out;
}

Trajectory<SpinField> integrate(const SpinField& s0, Model m, Boundary b, double t_final,
                                const IntegratorConfig& cfg, std::span<const double> sample_times,
                                IntegrationLog* log) {
  if (m == Model::al) throw ParameterError("integrate: spin state needs model lhm or heis");
  auto opt = options_from(cfg);
  const auto times = output_times(t_final, sample_times);
  const std::size_t n = s0.size();
  const long lo = s0.window().lo;
  std::vector<double> y0;
  for (const auto& v : s0.values()) y0.insert(y0.end(), {v.x(), v.y(), v.z()});

  opt.site_of = [lo](std::size_t i) { return lo + static_cast<long>(i / 3); };
  opt.project = [n](std::vector<double>& y) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = std::sqrt(y[3 * k] * y[3 * k] + y[3 * k + 1] * y[3 * k + 1] +
                                 y[3 * k + 2] * y[3 * k + 2]);
      worst = std::max(worst, std::abs(r - 1.0));
      for (int c = 0; c < 3; ++c) y[3 * k + c] /= r;
    }
    return worst;
  };
  const ode::Rhs rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    std::vector<Vec3> d;
    try {
      d = spin_field_rhs(n, lo, m, b, [&](std::size_t k) { return spin_at(y, k); });
    } catch (const DegeneracyError& e) {
      throw IntegrationError(std::string("integrate: ") + e.what() + " at t=" +
                                 std::to_string(t),
                             t, e.site);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (int c = 0; c < 3; ++c) dy[3 * k + c] = d[k](c);
    }
  };
  const auto states = run(rhs, y0, times, opt, log);
  Trajectory<SpinField> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<Vec3> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = spin_at(states[i], k);
    out.push_back(times[i], SpinField::normalized(s0.window(), std::move(v)));
  }
  return out;
}

Mat3 zero_curvature_generator(const ALField& a, long n) {
  return generator(a.at_or_zero(n), a.at_or_zero(n - 1));
}

long frame_anchor(const Window& w) { return w.contains(0) ? 0 : w.lo; }

namespace {

FrameSequence frames_at(const ALField& a, long anchor, const Mat3& p) {
  const auto mats = hasimoto::frame_chain(a.values(), a.window().lo, anchor, p);
  std::vector<Rotation> rs;
  rs.reserve(mats.size());
  for (const auto& m : mats) rs.emplace_back(m);
  return FrameSequence(Window(a.window().lo, a.window().hi + 1), std::move(rs));
}

std::vector<double> mat_to_vec(const Mat3& m) {
  std::vector<double> v(9);
  for (int i = 0; i < 9; ++i) v[static_cast<std::size_t>(i)] = m(i / 3, i % 3);
  return v;
}

Mat3 vec_to_mat(const double* v) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = v[i];
  return m;
}

}  // namespace

Trajectory<FrameSequence> frame_evolution(const Trajectory<ALField>& a_traj, const Rotation& o,
                                          const IntegratorConfig& cfg, FrameEvolutionLog* log,
                                          double max_interp_error) {
  if (a_traj.empty()) throw ParameterError("frame_evolution: empty trajectory");
  auto opt = options_from(cfg);
  const Window w = a_traj.front().window();
  const long anchor = frame_anchor(w);
  const std::size_t n = w.length();

  // Hermite data per sample: packed state and its AL derivative.
  const std::size_t m = a_traj.size();
  std::vector<std::vector<double>> ys(m), fs(m);
  for (std::size_t i = 0; i < m; ++i) {
    ys[i] = pack(a_traj.state(i));
    fs[i].resize(ys[i].size());
    al_rhs(ys[i].data(), fs[i].data(), n, Boundary::free);
  }

  FrameEvolutionLog local;
  FrameEvolutionLog& lg = log ? *log : local;
  std::vector<double> tmp, dtmp, ftmp(2 * n);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double t0 = a_traj.time(i);
    const double t1 = a_traj.time(i + 1);
    const double tm = 0.5 * (t0 + t1);
    ode::hermite(t0, ys[i], fs[i], t1, ys[i + 1], fs[i + 1], tm, tmp);
    ode::hermite_derivative(t0, ys[i], fs[i], t1, ys[i + 1], fs[i + 1], tm, dtmp);
    al_rhs(tmp.data(), ftmp.data(), n, Boundary::free);
    double e = 0.0;
    for (std::size_t k = 0; k < tmp.size(); ++k) e = std::max(e, std::abs(ftmp[k] - dtmp[k]));
    e *= (t1 - t0);
    lg.max_interpolation_error = std::max(lg.max_interpolation_error, e);
    if (e > max_interp_error) {
      throw ResolutionError("frame_evolution: samples " + std::to_string(t0) + " and " +
                            std::to_string(t1) + " too far apart (interpolation error " +
                            std::to_string(e) + ")");
    }
  }

  std::size_t i0 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (a_traj.time(i) == 0.0) i0 = i;
  }
  const std::size_t k_anchor = w.offset(anchor);
  opt.site_of = [anchor](std::size_t) { return anchor; };
  opt.project = [](std::vector<double>& y) { return orthonormalize_block(y.data()); };

  // P(t) = O U(t) with U(0) = 1, so the step sequence does not depend on O.
  std::vector<Mat3> p(m);
  p[i0] = Mat3::Identity();
  ode::Stats st;
  auto step_interval = [&](std::size_t from, std::size_t to) {
    const std::size_t lo_i = std::min(from, to);
    const double ta = a_traj.time(lo_i);
    const double tb = a_traj.time(lo_i + 1);
    const ode::Rhs rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
      ode::hermite(ta, ys[lo_i], fs[lo_i], tb, ys[lo_i + 1], fs[lo_i + 1], t, tmp);
      const Complex a(tmp[2 * k_anchor], tmp[2 * k_anchor + 1]);
      const Complex am1 =
          k_anchor > 0 ? Complex(tmp[2 * k_anchor - 2], tmp[2 * k_anchor - 1]) : Complex{};
      const Mat3 d = vec_to_mat(y.data()) * generator(a, am1);
      for (int j = 0; j < 9; ++j) dy[static_cast<std::size_t>(j)] = d(j / 3, j % 3);
    };
    const double target[1] = {a_traj.time(to)};
    auto res = ode::solve(rhs, a_traj.time(from), mat_to_vec(p[from]), target, opt, &st);
    p[to] = gram_schmidt(vec_to_mat(res.front().data()));
  };
  for (std::size_t i = i0; i + 1 < m; ++i) step_interval(i, i + 1);
  for (std::size_t i = i0; i > 0; --i) step_interval(i, i - 1);
  lg.max_orthogonality_drift = std::max(lg.max_orthogonality_drift, st.max_projection);

  Trajectory<FrameSequence> out;
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(a_traj.time(i), frames_at(a_traj.state(i), anchor, o.matrix() * p[i]));
  }
  return out;
}

FramedTrajectory evolve_with_frames(const ALField& a0, const Rotation& o, double t_final,
                                    const IntegratorConfig& cfg,
                                    std::span<const double> sample_times, IntegrationLog* log) {
  auto opt = options_from(cfg);
  const auto times = output_times(t_final, sample_times);
  const Window w = a0.window();
  const std::size_t n = w.length();
  const long anchor = frame_anchor(w);
  const std::size_t k_anchor = w.offset(anchor);
  const std::size_t pofs = 2 * n;

  auto y0 = pack(a0);
  const auto pv = mat_to_vec(Mat3::Identity());
  y0.insert(y0.end(), pv.begin(), pv.end());

  opt.site_of = [&](std::size_t i) {
    return i < pofs ? w.lo + static_cast<long>(i / 2) : anchor;
  };
  opt.project = [pofs](std::vector<double>& y) { return orthonormalize_block(y.data() + pofs); };
  const ode::Rhs rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    al_rhs(y.data(), dy.data(), n, Boundary::free);
    const Complex a(y[2 * k_anchor], y[2 * k_anchor + 1]);
    const Complex am1 =
        k_anchor > 0 ? Complex(y[2 * k_anchor - 2], y[2 * k_anchor - 1]) : Complex{};
    const Mat3 d = vec_to_mat(y.data() + pofs) * generator(a, am1);
    for (int j = 0; j < 9; ++j) dy[pofs + static_cast<std::size_t>(j)] = d(j / 3, j % 3);
  };
  const auto states = run(rhs, y0, times, opt, log);

  FramedTrajectory out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    ALField a = unpack(w, states[i].data());
    const Mat3 p = o.matrix() * gram_schmidt(vec_to_mat(states[i].data() + pofs));
    out.frames.push_back(times[i], frames_at(a, anchor, p));
    out.alpha.push_back(times[i], std::move(a));
  }
  return out;
}

Trajectory<SpinField> spins_from_frame_traj(const Trajectory<FrameSequence>& f) {
  Trajectory<SpinField> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& fr = f.state(i);
    std::vector<Vec3> s;
    s.reserve(fr.size());
    for (const auto& r : fr.frames()) s.push_back(r.matrix().col(2));
    out.push_back(f.time(i), SpinField::normalized(fr.window(), std::move(s)));
  }
  return out;
}

void GoodSolutionParams::validate() const {
  if (!(q > 1.0 && p > q)) throw ParameterError("good_solution_diagnostics: need p > q > 1");
  if (!(c > 0.0)) throw ParameterError("good_solution_diagnostics: need c > 0");
}

namespace {

// Trapezoid in time of per-sample sums, and the sup over samples of a second sum.
template <typename State, typename Integrand, typename Weighted>
void accumulate(const Trajectory<State>& traj, Integrand integrand, Weighted weighted,
                GoodSolutionReport& r) {
  std::vector<double> raw(traj.size()), cen(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto [ir, ic] = integrand(traj.state(i));
    raw[i] = ir;
    cen[i] = ic;
    const auto [wr, wc] = weighted(traj.state(i));
    r.sup_weighted_raw = std::max(r.sup_weighted_raw, wr);
    r.sup_weighted_centered = std::max(r.sup_weighted_centered, wc);
  }
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dt = traj.time(i + 1) - traj.time(i);
    r.integral_raw += 0.5 * dt * (raw[i] + raw[i + 1]);
    r.integral_centered += 0.5 * dt * (cen[i] + cen[i + 1]);
  }
}

}  // namespace

GoodSolutionReport good_solution_diagnostics(const Trajectory<ALField>& traj,
                                             const GoodSolutionParams& params) {
  params.validate();
  GoodSolutionReport r;
  auto integrand = [&](const ALField& a) {
    double s = 0.0;
    for (long n = a.window().lo; n <= a.window().hi; ++n) {
      s += std::pow(japanese(n), -params.q) * std::pow(std::norm(a.at(n)), params.p);
    }
    return std::pair{s, s};
  };
  auto weighted = [&](const ALField& a) {
    const double s = weighted_sup_norm(a, params.c);
    return std::pair{s, s};
  };
  accumulate(traj, integrand, weighted, r);
  return r;
}

GoodSolutionReport good_solution_diagnostics(const Trajectory<ALField>& traj,
                                             const GoodSolutionParams& params,
                                             const std::vector<Trajectory<ALField>>& nested) {
  auto r = good_solution_diagnostics(traj, params);
  for (std::size_t k = 0; k + 1 < nested.size(); ++k) {
    r.truncation_gaps.push_back(truncation_gap(nested[k + 1], nested[k], params.c));
  }
  return r;
}

GoodSolutionReport good_solution_diagnostics(const Trajectory<SpinField>& traj,
                                             const GoodSolutionParams& params) {
  params.validate();
  GoodSolutionReport r;
  const double base_int = std::pow(2.0, -params.p);
  auto integrand = [&](const SpinField& s) {
    double raw = 0.0;
    double cen = 0.0;
    for (long n = s.window().lo; n < s.window().hi; ++n) {
      const double wq = std::pow(japanese(n), -params.q);
      const double v = std::pow(1.0 + s.at(n).dot(s.at(n + 1)), -params.p);
      raw += wq * v;
      cen += wq * (v - base_int);
    }
    return std::pair{raw, cen};
  };
  auto weighted = [&](const SpinField& s) {
    double raw = 0.0;
    double cen = 0.0;
    for (long n = s.window().lo; n < s.window().hi; ++n) {
      const double wc = std::exp(-params.c * japanese(n));
      const double v = 1.0 / (1.0 + s.at(n).dot(s.at(n + 1)));
      raw += wc * v;
      cen += wc * (v - 0.5);
    }
    return std::pair{raw, cen};
  };
  accumulate(traj, integrand, weighted, r);
  return r;
}

std::vector<double> truncation_gap(const Trajectory<ALField>& a, const Trajectory<ALField>& b,
                                   double c) {
  std::vector<double> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (j < b.size() && b.time(j) < a.time(i)) ++j;
    if (j < b.size() && b.time(j) == a.time(i)) {
      out.push_back(weighted_sup_norm(a.state(i), b.state(j), c));
    }
  }
  return out;
}

}  // namespace lh::dynamics
