#pragma once

// Vector fields, energies and time integration for the Ablowitz-Ladik lattice and the two
// spin chains, plus the parallel-frame evolution linking them.

#include <span>
#include <string>
#include <vector>

#include "lhasimoto/core.hpp"

namespace lh::dynamics {

enum class Model { al, lhm, heis };
enum class Boundary { free, periodic };

Model parse_model(const std::string& s);
Boundary parse_boundary(const std::string& s);
std::string to_string(Model m);
std::string to_string(Boundary b);

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;

  /// Throws ParameterError unless all positive and rel_tol >= 1e-14.
  void validate() const;
};

/// i da_n/dt = -(1+|a_n|^2)(a_{n+1}+a_{n-1}) + 2a_n. The free boundary drops missing neighbours.
ALField al_vector_field(const ALField& a, Boundary b = Boundary::free);

/// dS_n/dt = -S_n x (2S_{n+1}/(1+S_n.S_{n+1}) + 2S_{n-1}/(1+S_n.S_{n-1})).
/// Throws DegeneracyError when 1 + S_n.S_{n+1} <= hasimoto::kAntiparallelEps.
std::vector<Vec3> lhm_vector_field(const SpinField& s, Boundary b = Boundary::free);

/// dS_n/dt = -S_n x (S_{n+1} + S_{n-1}).
std::vector<Vec3> heis_vector_field(const SpinField& s, Boundary b = Boundary::free);

struct Energies {
  double h_lhm = 0.0;
  double h_al = 0.0;
  double h_heis = 0.0;
};

/// H_LHM = sum 2 log(1+|a|^2), H_AL = sum -Re(conj(a_n) a_{n+1}) + log(1+|a_n|^2),
/// H_Heis = sum 2|a|^2/(1+|a|^2). Free boundary omits the bond leaving the window.
Energies hamiltonians(const ALField& a, Boundary b = Boundary::free);

/// Spin-side energies over the bonds of s. H_AL uses the amplitudes of any parallel frame
/// (it is gauge invariant), so it is only defined for the free boundary; NaN otherwise.
Energies hamiltonians(const SpinField& s, Boundary b = Boundary::free);

struct ConservedReport {
  std::vector<std::string> names;
  std::vector<double> initial;
  /// max |H(t) - H(0)| / max(1, |H(0)|)
  std::vector<double> drift;
};

ConservedReport conserved_report(const Trajectory<ALField>& traj, Boundary b = Boundary::free);
ConservedReport conserved_report(const Trajectory<SpinField>& traj, Model m,
                                 Boundary b = Boundary::free);

struct EnergyRow {
  double t;
  std::string name;
  double value;
};
std::vector<EnergyRow> energy_series(const Trajectory<ALField>& traj, Boundary b);
std::vector<EnergyRow> energy_series(const Trajectory<SpinField>& traj, Model m, Boundary b);

struct IntegrationLog {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Largest per-step correction made by renormalization / re-orthonormalization.
  double max_renormalization = 0.0;
};

/// Output times: 0, the requested sample times and t_final, in ascending order. Sample times
/// must lie between 0 and t_final. Backward runs (t_final < 0) are stored ascending as well.
std::vector<double> output_times(double t_final, std::span<const double> sample_times);

Trajectory<ALField> integrate(const ALField& a0, Boundary b, double t_final,
                              const IntegratorConfig& cfg,
                              std::span<const double> sample_times = {},
                              IntegrationLog* log = nullptr);

/// Spin flows (lhm or heis). Spins are renormalized after each accepted step.
Trajectory<SpinField> integrate(const SpinField& s0, Model m, Boundary b, double t_final,
                                const IntegratorConfig& cfg,
                                std::span<const double> sample_times = {},
                                IntegrationLog* log = nullptr);

/// Several AL fields integrated as one system, so they share the adaptive step sequence.
/// Used when trajectories are compared with each other (nested truncations, perturbations).
std::vector<Trajectory<ALField>> integrate_stacked(const std::vector<ALField>& fields,
                                                   Boundary b, double t_final,
                                                   const IntegratorConfig& cfg,
                                                   std::span<const double> sample_times = {},
                                                   IntegrationLog* log = nullptr);

/// Zero-curvature generator A_n built from a_n and a_{n-1} (zero extension).
Mat3 zero_curvature_generator(const ALField& a, long n);

/// Site whose frame obeys dP/dt = P A: 0 when the window contains it, else window.lo.
long frame_anchor(const Window& w);

struct FrameEvolutionLog {
  double max_orthogonality_drift = 0.0;
  double max_interpolation_error = 0.0;
};

/// Error raised when a trajectory is too coarse to interpolate.
struct ResolutionError : NumericalError {
  using NumericalError::NumericalError;
};

/// Frames on [lo, hi+1] at every time of a_traj (a free-boundary AL trajectory). The anchor
/// frame solves dP/dt = P A(t) with P(0) = o, using cubic Hermite interpolation of a_traj
/// between samples; the others follow from P_{n+1} = P_n Q(a_n). Throws ResolutionError when
/// the estimated interpolation error of a sample gap exceeds max_interp_error.
Trajectory<FrameSequence> frame_evolution(const Trajectory<ALField>& a_traj, const Rotation& o,
                                          const IntegratorConfig& cfg,
                                          FrameEvolutionLog* log = nullptr,
                                          double max_interp_error = 1e-6);

struct FramedTrajectory {
  Trajectory<ALField> alpha;
  Trajectory<FrameSequence> frames;
};

/// Integrates the free AL flow and the anchor frame together as one system.
FramedTrajectory evolve_with_frames(const ALField& a0, const Rotation& o, double t_final,
                                    const IntegratorConfig& cfg,
                                    std::span<const double> sample_times = {},
                                    IntegrationLog* log = nullptr);

/// S_n(t) = P_n(t) e3.
Trajectory<SpinField> spins_from_frame_traj(const Trajectory<FrameSequence>& f);

struct GoodSolutionParams {
  double p = 2.0;
  double q = 1.5;
  double c = 4.0;

  void validate() const;  ///< p > q > 1, c > 0
};

struct GoodSolutionReport {
  /// int sum <n>^-q |a_n|^(2p) dt, or the spin form with (1 + S_n.S_{n+1})^-p.
  double integral_raw = 0.0;
  /// Same with the value of the constant field subtracted from every term.
  double integral_centered = 0.0;
  /// sup_t sum e^(-c<n>) |a_n|^2, or e^(-c<n>) / (1 + S_n.S_{n+1}).
  double sup_weighted_raw = 0.0;
  double sup_weighted_centered = 0.0;
  /// M_K(t) between consecutive nested truncations, when supplied.
  std::vector<std::vector<double>> truncation_gaps;
};

GoodSolutionReport good_solution_diagnostics(const Trajectory<ALField>& traj,
                                             const GoodSolutionParams& params = {});
/// Nested truncations ordered by increasing window; consecutive pairs give M_K curves.
GoodSolutionReport good_solution_diagnostics(const Trajectory<ALField>& traj,
                                             const GoodSolutionParams& params,
                                             const std::vector<Trajectory<ALField>>& nested);
GoodSolutionReport good_solution_diagnostics(const Trajectory<SpinField>& traj,
                                             const GoodSolutionParams& params = {});

/// M(t) = weighted_sup_norm(a(t), b(t), c) at the common sample times.
std::vector<double> truncation_gap(const Trajectory<ALField>& a, const Trajectory<ALField>& b,
                                   double c);

}  // namespace lh::dynamics
