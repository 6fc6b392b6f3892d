#pragma once

// Sample statistics and Kolmogorov-Smirnov tests used by the experiments and test suites.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lh::stats {

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean
  std::size_t n = 0;
};

MeanSE mean_se(std::span<const double> xs);

/// |mean - target| <= k * se
bool within_se(const MeanSE& m, double target, double k = 3.0);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

struct KSResult {
  double statistic = 0.0;  ///< sup-distance D
  double p_value = 1.0;
  std::size_t n = 0;
};

/// One-sample test of xs against a continuous CDF (Stephens' finite-n correction).
KSResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct Correlation {
  double r = 0.0;
  double se = 0.0;  ///< sqrt((1 - r^2) / (n - 2))
};

Correlation pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y ~ a + b x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Hill estimator of the tail index from the k largest values of xs (all positive).
double hill_tail_index(std::vector<double> xs, std::size_t k);

}  // namespace lh::stats
