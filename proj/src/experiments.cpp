#include "lhasimoto/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lhasimoto/sampling.hpp"
#include "lhasimoto/stats.hpp"

namespace lh::experiments {

namespace {

// Runs job(i) for i in [0, n) on `workers` threads. Each job writes only its own slot, so the
// result does not depend on scheduling. The failure with the smallest index is rethrown.
template <typename Job>
void parallel_for(std::size_t n, unsigned workers, Job job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!failure) return;
  const std::string where = "ensemble member " + std::to_string(failed_index) + ": ";
  try {
    std::rethrow_exception(failure);
  } catch (const IntegrationError& e) {
    throw IntegrationError(where + e.what(), e.time, e.site);
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(where + e.what(), e.site);
  }
}

std::string fmt_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

// Position of each requested sample time in output_times(t_final, samples).
std::vector<std::size_t> sample_slots(const EnsembleSpec& spec) {
  const auto ts = dynamics::output_times(spec.t_final, spec.sample_times);
  std::vector<std::size_t> out;
  for (double t : spec.sample_times) {
    out.push_back(static_cast<std::size_t>(std::find(ts.begin(), ts.end(), t) - ts.begin()));
  }
  return out;
}

void add_z_verdict(EnsembleReport& r, const std::string& name, const stats::MeanSE& m,
                   double target, double width) {
  r.statistics.push_back({name, m.mean, m.se, m.n});
  r.verdicts.push_back({name, m.mean, target, width * m.se,
                        std::abs(m.mean - target) <= width * m.se});
}

// Bonferroni over every KS test of the report.
void add_ks_verdicts(EnsembleReport& r, double alpha) {
  const double m = static_cast<double>(r.ks_tests.size());
  for (const auto& k : r.ks_tests) {
    const double p = std::min(1.0, k.p_value * m);
    r.verdicts.push_back({k.name + ".bonferroni_p", p, alpha, 0.0, p >= alpha});
  }
}

ALField draw_white_noise(const EnsembleSpec& spec, std::size_t i) {
  RngStream rng(spec.seed, RngStream::family_id(family::white_noise, i));
  return sampling::sample_white_noise(spec.beta, spec.window, rng);
}

Rotation draw_haar(const EnsembleSpec& spec, std::size_t i) {
  RngStream rng(spec.seed, RngStream::family_id(family::haar, i));
  return sampling::sample_haar_rotation(rng);
}

// Spins at the requested sample times, from frame evolution of member i with gauge r * O.
std::vector<SpinField> member_spins(const EnsembleSpec& spec, std::size_t i, const Rotation& r) {
  const ALField a0 = draw_white_noise(spec, i);
  const Rotation o = r * draw_haar(spec, i);
  const auto ft = dynamics::evolve_with_frames(a0, o, spec.t_final, spec.integrator,
                                               spec.sample_times);
  const auto spins = dynamics::spins_from_frame_traj(ft.frames);
  std::vector<SpinField> out;
  for (std::size_t slot : sample_slots(spec)) out.push_back(spins.state(slot));
  return out;
}

}  // namespace

void EnsembleSpec::validate() const {
  if (n_ensembles < 1) throw ParameterError("ensemble: n_ensembles must be >= 1");
  if (!window.contains(0) || window.hi - window.lo < 2) {
    throw ParameterError("ensemble: window must contain 0 and at least 3 sites");
  }
  if (!(std::isfinite(t_final) && t_final >= 0.0)) {
    throw ParameterError("ensemble: t_final must be finite and >= 0");
  }
  if (sample_times.empty()) throw ParameterError("ensemble: no sample times");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0 && sample_times[i] <= t_final)) {
      throw ParameterError("ensemble: sample times must lie in [0, t_final]");
    }
    if (i > 0 && !(sample_times[i] > sample_times[i - 1])) {
      throw ParameterError("ensemble: sample times must be increasing");
    }
  }
  if (!(ks_alpha > 0.0 && ks_alpha < 1.0)) throw ParameterError("ensemble: ks_alpha in (0,1)");
  if (!(z_width > 0.0)) throw ParameterError("ensemble: z_width must be positive");
  integrator.validate();
}

Window EnsembleSpec::interior() const {
  const long k = std::min(-window.lo, window.hi);
  const long h = std::max(1L, k / 2);
  return Window(std::max(window.lo, -h), std::min(window.hi, h));
}

bool EnsembleReport::pass() const {
  return !verdicts.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string EnsembleReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["pass"] = pass();
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    j["verdicts"].push_back({{"criterion", v.criterion},
                             {"value", v.value},
                             {"target", v.target},
                             {"tolerance", v.tolerance},
                             {"pass", v.pass}});
  }
  j["statistics"] = nlohmann::ordered_json::array();
  for (const auto& s : statistics) {
    j["statistics"].push_back({{"name", s.name}, {"value", s.value}, {"se", s.se}, {"n", s.n}});
  }
  j["ks_tests"] = nlohmann::ordered_json::array();
  for (const auto& k : ks_tests) {
    j["ks_tests"].push_back(
        {{"name", k.name}, {"statistic", k.statistic}, {"p_value", k.p_value}, {"n", k.n}});
  }
  return j.dump(2);
}

std::string EnsembleReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const auto& v : verdicts) {
    os << (v.pass ? "PASS " : "FAIL ") << v.criterion << " value=" << v.value
       << " target=" << v.target << " tol=" << v.tolerance << "\n";
  }
  return os.str();
}

EnsembleReport wn_invariance_experiment(const EnsembleSpec& spec) {
  spec.validate();
  const Window in = spec.interior();
  const auto slots = sample_slots(spec);
  const std::size_t nt = slots.size();
  const std::size_t n = spec.n_ensembles;

  // abs2[member][time][site]
  std::vector<std::vector<std::vector<double>>> abs2(n);
  parallel_for(n, spec.workers, [&](std::size_t i) {
    const auto traj = dynamics::integrate(draw_white_noise(spec, i), dynamics::Boundary::free,
                                          spec.t_final, spec.integrator, spec.sample_times);
    auto& rows = abs2[i];
    rows.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      const auto& a = traj.state(slots[j]);
      for (long s = in.lo; s <= in.hi; ++s) rows[j].push_back(std::norm(a.at(s)));
    }
  });

  const double beta = spec.beta.value();
  const auto cdf = [&](double y) { return sampling::white_noise_abs2_cdf(y, spec.beta); };
  const std::size_t site0 = in.offset(0);
  const std::size_t len = in.length();

  EnsembleReport r;
  r.experiment = "wn_invariance";
  for (std::size_t j = 0; j < nt; ++j) {
    const std::string tag = "t=" + fmt_time(spec.sample_times[j]);
    std::vector<double> at0, pooled, log0, left, right;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = abs2[i][j];
      at0.push_back(row[site0]);
      log0.push_back(std::log1p(row[site0]));
      pooled.insert(pooled.end(), row.begin(), row.end());
      for (std::size_t s = 0; s + 1 < len; ++s) {
        left.push_back(std::log1p(row[s]));
        right.push_back(std::log1p(row[s + 1]));
      }
    }
    const auto k0 = stats::ks_one_sample(at0, cdf);
    r.ks_tests.push_back({"ks_abs2_site0." + tag, k0.statistic, k0.p_value, k0.n});
    const auto kp = stats::ks_one_sample(pooled, cdf);
    r.ks_tests.push_back({"ks_abs2_interior." + tag, kp.statistic, kp.p_value, kp.n});

    add_z_verdict(r, "mean_log1p_abs2_site0." + tag, stats::mean_se(log0), 1.0 / (1.0 + 2.0 * beta),
                  spec.z_width);
    if (!left.empty() && left.size() > 2) {
      const auto c = stats::pearson(left, right);
      add_z_verdict(r, "corr_log1p_adjacent." + tag, {c.r, c.se, left.size()}, 0.0,
                    spec.z_width);
    }
    if (j == 0) {
      const std::size_t k = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(pooled.size())));
      if (pooled.size() > k) {
        // 1 + |a|^2 is exactly Pareto with index xi, and |a| has tail index 2 xi.
        std::vector<double> shifted(pooled.size());
        std::transform(pooled.begin(), pooled.end(), shifted.begin(),
                       [](double y) { return 1.0 + y; });
        const double xi = stats::hill_tail_index(std::move(shifted), k);
        r.statistics.push_back({"tail_index_abs_alpha." + tag, 2.0 * xi,
                                2.0 * xi / std::sqrt(static_cast<double>(k)), k});
      }
    }
  }
  add_ks_verdicts(r, spec.ks_alpha);
  return r;
}

EnsembleReport gibbs_invariance_experiment(const EnsembleSpec& spec) {
  spec.validate();
  const Window in = spec.interior();
  if (!in.contains(1)) throw ParameterError("gibbs ensemble: interior must contain sites 0 and 1");
  const std::size_t nt = spec.sample_times.size();
  const std::size_t n = spec.n_ensembles;

  struct Member {
    std::vector<std::vector<double>> dots;  // [time][bond]
    std::vector<Vec3> s0;                   // [time]
    std::vector<Vec3> s1;
    std::vector<double> fresh_dots;
  };
  std::vector<Member> members(n);
  parallel_for(n, spec.workers, [&](std::size_t i) {
    const auto spins = member_spins(spec, i, Rotation::identity());
    auto& m = members[i];
    for (const auto& s : spins) {
      std::vector<double> d;
      for (long b = in.lo; b < in.hi; ++b) d.push_back(s.at(b).dot(s.at(b + 1)));
      m.dots.push_back(std::move(d));
      m.s0.push_back(s.at(0));
      m.s1.push_back(s.at(1));
    }
    RngStream rng(spec.seed, RngStream::family_id(family::fresh_gibbs, i));
    const auto chain = sampling::sample_gibbs_chain(spec.beta, in, rng);
    for (long b = in.lo; b < in.hi; ++b) m.fresh_dots.push_back(chain.at(b).dot(chain.at(b + 1)));
  });

  const double beta = spec.beta.value();
  const double lambda1 = beta / (1.0 + beta);
  std::vector<double> fresh;
  for (const auto& m : members) fresh.insert(fresh.end(), m.fresh_dots.begin(), m.fresh_dots.end());

  EnsembleReport r;
  r.experiment = "gibbs_invariance";
  const char* axes[] = {"x", "y", "z"};
  for (std::size_t j = 0; j < nt; ++j) {
    const std::string tag = "t=" + fmt_time(spec.sample_times[j]);
    std::vector<double> dots, z0, z1;
    std::vector<double> comp[3];
    for (const auto& m : members) {
      dots.insert(dots.end(), m.dots[j].begin(), m.dots[j].end());
      for (int c = 0; c < 3; ++c) comp[c].push_back(m.s0[j][c]);
      z0.push_back(m.s0[j].z());
      z1.push_back(m.s1[j].z());
    }
    add_z_verdict(r, "mean_bond_dot." + tag, stats::mean_se(dots), lambda1, spec.z_width);
    for (int c = 0; c < 3; ++c) {
      add_z_verdict(r, std::string("mean_spin0_") + axes[c] + "." + tag, stats::mean_se(comp[c]),
                    0.0, spec.z_width);
    }
    if (n > 2) {
      const auto fit = stats::least_squares(z0, z1);
      r.statistics.push_back({"transition_slope." + tag, fit.slope, fit.slope_se, n});
      r.verdicts.push_back({"transition_slope." + tag, fit.slope, lambda1,
                            spec.z_width * fit.slope_se,
                            std::abs(fit.slope - lambda1) <= spec.z_width * fit.slope_se});
    }
    const auto ku = stats::ks_one_sample(z0, [](double z) { return std::clamp(0.5 * (z + 1.0), 0.0, 1.0); });
    r.ks_tests.push_back({"ks_spin0_z_uniform." + tag, ku.statistic, ku.p_value, ku.n});
    const auto k2 = stats::ks_two_sample(dots, fresh);
    r.ks_tests.push_back({"ks_bond_dot_vs_fresh_chain." + tag, k2.statistic, k2.p_value, k2.n});
  }
  add_ks_verdicts(r, spec.ks_alpha);
  return r;
}

double gibbs_rotation_covariance(const EnsembleSpec& spec, const Rotation& rot) {
  spec.validate();
  const std::size_t n = spec.n_ensembles;
  std::vector<double> worst(n, 0.0);
  parallel_for(n, spec.workers, [&](std::size_t i) {
    const auto a = member_spins(spec, i, Rotation::identity());
    const auto b = member_spins(spec, i, rot);
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Window& w = a[j].window();
      for (long s = w.lo; s < w.hi; ++s) {
        const double da = a[j].at(s).dot(a[j].at(s + 1));
        const double db = b[j].at(s).dot(b[j].at(s + 1));
        worst[i] = std::max(worst[i], std::abs(da - db));
      }
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

bool ConvergenceReport::strictly_decreasing() const {
  if (sup_gaps.size() < 2) return false;
  for (std::size_t i = 1; i < sup_gaps.size(); ++i) {
    if (!(sup_gaps[i] < sup_gaps[i - 1])) return false;
  }
  return true;
}

double ConvergenceReport::median_ratio() const {
  if (ratios.empty()) throw ParameterError("convergence: no ratios");
  std::vector<double> r = ratios;
  std::sort(r.begin(), r.end());
  const std::size_t m = r.size() / 2;
  return r.size() % 2 ? r[m] : 0.5 * (r[m - 1] + r[m]);
}

namespace {

ConvergenceReport convergence_run(const Beta& beta, const std::vector<long>& k_list,
                                  double t_final, std::uint64_t seed, std::uint64_t index,
                                  const dynamics::IntegratorConfig& cfg, double c) {
  if (k_list.size() < 2) throw ParameterError("convergence: need at least two K values");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] < 1 || (i > 0 && k_list[i] <= k_list[i - 1])) {
      throw ParameterError("convergence: K values must be positive and increasing");
    }
  }
  if (!(std::isfinite(t_final) && t_final > 0.0)) {
    throw ParameterError("convergence: t_final must be positive");
  }
  RngStream rng(seed, RngStream::family_id(family::convergence, index));
  const ALField full = sampling::sample_white_noise(beta, Window::symmetric(k_list.back()), rng);
  std::vector<ALField> fields;
  for (long k : k_list) fields.push_back(window_restrict(full, Window::symmetric(k)));

  std::vector<double> samples;
  for (int j = 0; j <= 20; ++j) samples.push_back(t_final * j / 20.0);
  samples.back() = t_final;
  const auto trajs = dynamics::integrate_stacked(fields, dynamics::Boundary::free, t_final, cfg,
                                                 samples);

  ConvergenceReport r;
  r.ks = k_list;
  for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
    const auto gap = dynamics::truncation_gap(trajs[i], trajs[i + 1], c);
    r.sup_gaps.push_back(*std::max_element(gap.begin(), gap.end()));
  }
  for (std::size_t i = 1; i < r.sup_gaps.size(); ++i) {
    r.ratios.push_back(r.sup_gaps[i] / r.sup_gaps[i - 1]);
  }
  return r;
}

}  // namespace

ConvergenceReport truncation_convergence_experiment(const Beta& beta, std::vector<long> k_list,
                                                    double t_final, std::uint64_t seed,
                                                    const dynamics::IntegratorConfig& cfg,
                                                    double c) {
  return convergence_run(beta, k_list, t_final, seed, 0, cfg, c);
}

ConvergenceStudy convergence_study(const Beta& beta, const std::vector<long>& k_list,
                                   double t_final, std::uint64_t seed, std::size_t n_seeds,
                                   const dynamics::IntegratorConfig& cfg, double c,
                                   unsigned workers) {
  if (n_seeds < 1) throw ParameterError("convergence: need at least one seed");
  ConvergenceStudy s;
  s.runs.resize(n_seeds);
  parallel_for(n_seeds, workers, [&](std::size_t i) {
    s.runs[i] = convergence_run(beta, k_list, t_final, seed, i, cfg, c);
  });
  ConvergenceReport pooled;
  s.all_decreasing = true;
  for (const auto& r : s.runs) {
    s.all_decreasing = s.all_decreasing && r.strictly_decreasing();
    pooled.ratios.insert(pooled.ratios.end(), r.ratios.begin(), r.ratios.end());
  }
  s.median_ratio = pooled.ratios.empty() ? 0.0 : pooled.median_ratio();
  return s;
}

UniquenessReport uniqueness_probe(const Beta& beta, long k, double t_final, double perturbation,
                                  std::uint64_t seed, const dynamics::IntegratorConfig& cfg,
                                  long interior_radius, double c,
                                  std::vector<double> sample_times) {
  if (!(perturbation >= 0.0)) throw ParameterError("uniqueness: perturbation must be >= 0");
  if (k < 1 || interior_radius < 0 || interior_radius > k) {
    throw ParameterError("uniqueness: need 0 <= interior_radius <= K");
  }
  if (!(std::isfinite(t_final) && t_final > 0.0)) {
    throw ParameterError("uniqueness: t_final must be positive");
  }
  cfg.validate();
  if (sample_times.empty()) {
    for (int j = 1; j <= 10; ++j) sample_times.push_back(t_final * j / 10.0);
    sample_times.back() = t_final;
  }
  const Window w = Window::symmetric(k);
  const Window inner = Window::symmetric(interior_radius);
  RngStream rng(seed, RngStream::family_id(family::uniqueness, 0));
  const ALField a0 = sampling::sample_white_noise(beta, w, rng);
  std::vector<Complex> v(a0.values().begin(), a0.values().end());
  v.back() += perturbation;
  const ALField a1(w, std::move(v));

  const auto pair = dynamics::integrate_stacked({a0, a1}, dynamics::Boundary::free, t_final, cfg,
                                                sample_times);
  auto fine = cfg;
  fine.rel_tol = std::max(1e-14, cfg.rel_tol / 10.0);
  fine.abs_tol = cfg.abs_tol / 10.0;
  const auto base = dynamics::integrate(a0, dynamics::Boundary::free, t_final, cfg, sample_times);
  const auto tight = dynamics::integrate(a0, dynamics::Boundary::free, t_final, fine, sample_times);

  UniquenessReport r;
  for (std::size_t j = 0; j < pair[0].size(); ++j) {
    const double d = weighted_sup_norm(window_restrict(pair[0].state(j), inner),
                                       window_restrict(pair[1].state(j), inner), c);
    r.times.push_back(pair[0].time(j));
    r.perturbation_response.push_back(d);
    r.sup_perturbation_response = std::max(r.sup_perturbation_response, d);
    r.tolerance_divergence =
        std::max(r.tolerance_divergence, weighted_sup_norm(window_restrict(base.state(j), inner),
                                                           window_restrict(tight.state(j), inner),
                                                           c));
  }
  return r;
}

}  // namespace lh::experiments
