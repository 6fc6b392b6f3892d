#pragma once

// Dormand-Prince 5(4) with step clipping onto sample times and cubic Hermite dense output.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lh::ode {

using State = std::vector<double>;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.1;
  double initial_step = 0.0;  ///< 0 picks one from the derivative scale
  std::size_t max_steps = 50'000'000;
  double min_step = 1e-14;
  /// Called after every accepted step; may modify y (projection) and returns the change size.
  std::function<double(State& y)> project;
  /// Maps a component index to a lattice site for error messages.
  std::function<long(std::size_t)> site_of;
};

/// Endpoint data of an accepted step, enough for Hermite interpolation.
struct StepData {
  double t0, t1;
  const State* y0;
  const State* f0;
  const State* y1;
  const State* f1;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
  double max_projection = 0.0;  ///< largest value returned by Options::project
};

/// Integrates from t0 through every sample time (monotone, all on one side of t0, first may
/// equal t0). Returns the states at the sample times. Steps are clipped so that each sample
/// time is hit exactly. `on_step` sees every accepted step.
std::vector<State> solve(const Rhs& rhs, double t0, const State& y0,
                         std::span<const double> sample_times, const Options& opt,
                         Stats* stats = nullptr,
                         const std::function<void(const StepData&)>& on_step = {});

/// Cubic Hermite interpolant on [t0, t1] at t.
void hermite(double t0, const State& y0, const State& f0, double t1, const State& y1,
             const State& f1, double t, State& out);
/// Derivative of the same interpolant.
void hermite_derivative(double t0, const State& y0, const State& f0, double t1,
                        const State& y1, const State& f1, double t, State& out);

}  // namespace lh::ode
