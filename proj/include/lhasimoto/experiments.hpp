#pragma once

// Monte Carlo ensembles for measure invariance, and the truncation/uniqueness mechanism.

#include <cstdint>
#include <string>
#include <vector>

#include "lhasimoto/core.hpp"
#include "lhasimoto/dynamics.hpp"

namespace lh::experiments {

struct EnsembleSpec {
  Beta beta{1.0};
  Window window = Window::symmetric(64);
  std::size_t n_ensembles = 10000;
  double t_final = 1.0;
  std::vector<double> sample_times{0.0, 0.25, 0.5, 1.0};
  std::uint64_t seed = 0;
  dynamics::IntegratorConfig integrator{1e-6, 1e-9, 0.1};
  unsigned workers = 1;
  /// Significance for KS tests after Bonferroni correction, and the z-test width.
  double ks_alpha = 0.01;
  double z_width = 3.0;

  void validate() const;
  /// Sites with |n| <= K/2 (K = half width of the window), clipped to the window.
  [[nodiscard]] Window interior() const;
};

struct Statistic {
  std::string name;
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

struct KSTest {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

struct Verdict {
  std::string criterion;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct EnsembleReport {
  std::string experiment;
  std::vector<Statistic> statistics;
  std::vector<KSTest> ks_tests;
  std::vector<Verdict> verdicts;

  [[nodiscard]] bool pass() const;
  /// {"experiment", "pass", "verdicts": [{criterion, value, target, tolerance, pass}], ...}
  [[nodiscard]] std::string to_json() const;
  /// One line per verdict.
  [[nodiscard]] std::string to_text() const;
};

/// White-noise fields evolved by the free-boundary truncated AL flow.
EnsembleReport wn_invariance_experiment(const EnsembleSpec& spec);

/// White-noise fields plus Haar gauges, turned into spins by frame evolution.
EnsembleReport gibbs_invariance_experiment(const EnsembleSpec& spec);

/// Runs the spin pipeline of gibbs_invariance_experiment twice, with gauges O and R*O, and
/// returns the largest difference of S_n.S_{n+1} over members, sites and sample times.
double gibbs_rotation_covariance(const EnsembleSpec& spec, const Rotation& r);

struct ConvergenceReport {
  std::vector<long> ks;
  /// sup_t M_K(t) for consecutive pairs (ks[i], ks[i+1]).
  std::vector<double> sup_gaps;
  /// sup_gaps[i+1] / sup_gaps[i]
  std::vector<double> ratios;
  [[nodiscard]] bool strictly_decreasing() const;
  [[nodiscard]] double median_ratio() const;
};

/// One white-noise draw on the largest window, truncated to every K, integrated as one
/// stacked system and compared at 21 equally spaced times with weight e^(-c<n>).
ConvergenceReport truncation_convergence_experiment(const Beta& beta, std::vector<long> k_list,
                                                    double t_final, std::uint64_t seed,
                                                    const dynamics::IntegratorConfig& cfg = {},
                                                    double c = 4.0);

struct ConvergenceStudy {
  std::vector<ConvergenceReport> runs;
  bool all_decreasing = false;
  /// Median of the per-doubling ratios pooled over every run.
  double median_ratio = 0.0;
  [[nodiscard]] bool pass() const { return all_decreasing && median_ratio < 0.5; }
};

/// truncation_convergence_experiment repeated with n_seeds independent draws.
ConvergenceStudy convergence_study(const Beta& beta, const std::vector<long>& k_list,
                                   double t_final, std::uint64_t seed, std::size_t n_seeds,
                                   const dynamics::IntegratorConfig& cfg = {}, double c = 4.0,
                                   unsigned workers = 1);

struct UniquenessReport {
  std::vector<double> times;
  /// Interior weighted difference between the base run and the edge-perturbed run.
  std::vector<double> perturbation_response;
  double sup_perturbation_response = 0.0;
  /// Same norm between runs at tolerance rtol and rtol / 10.
  double tolerance_divergence = 0.0;
};

/// The field on [-K, K] is evolved as given and with `perturbation` added at site K. The
/// difference is measured on |n| <= interior_radius with weight e^(-c<n>).
UniquenessReport uniqueness_probe(const Beta& beta, long k, double t_final,
                                  double perturbation, std::uint64_t seed,
                                  const dynamics::IntegratorConfig& cfg = {},
                                  long interior_radius = 8, double c = 4.0,
                                  std::vector<double> sample_times = {});

/// Stream families, so no two experiments share random numbers.
namespace family {
inline constexpr std::uint64_t white_noise = 1;
inline constexpr std::uint64_t haar = 2;
inline constexpr std::uint64_t fresh_gibbs = 3;
inline constexpr std::uint64_t convergence = 4;
inline constexpr std::uint64_t uniqueness = 5;
inline constexpr std::uint64_t sample_cli = 6;
inline constexpr std::uint64_t tables = 7;
}  // namespace family

}  // namespace lh::experiments
