#pragma once

// Shared lattice types: windows, fields, frames, RNG streams.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lh {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Error taxonomy. Every failure mode named by an operation maps to one of these.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegeneracyError : std::runtime_error {
  DegeneracyError(const std::string& what, long site_index)
      : std::runtime_error(what), site(site_index) {}
  long site;
};
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IntegrationError : NumericalError {
  IntegrationError(const std::string& what, double at_time, long at_site)
      : NumericalError(what), time(at_time), site(at_site) {}
  double time;
  long site;
};
struct WindowError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Inclusive integer interval of lattice sites.
struct Window {
  long lo = 0;
  long hi = 0;

  Window() = default;
  Window(long lo_, long hi_);
  static Window symmetric(long k) { return Window(-k, k); }

  [[nodiscard]] std::size_t length() const { return static_cast<std::size_t>(hi - lo + 1); }
  [[nodiscard]] bool contains(long n) const { return lo <= n && n <= hi; }
  [[nodiscard]] bool contains(const Window& w) const { return lo <= w.lo && w.hi <= hi; }
  [[nodiscard]] std::size_t offset(long n) const { return static_cast<std::size_t>(n - lo); }

  friend bool operator==(const Window&, const Window&) = default;
};

/// Japanese bracket <n> = sqrt(1 + n^2).
inline double japanese(long n) {
  const double x = static_cast<double>(n);
  return std::sqrt(1.0 + x * x);
}

/// Ablowitz-Ladik state: one complex amplitude per site of a window.
class ALField {
 public:
  ALField() = default;
  ALField(Window w, std::vector<Complex> values);
  static ALField zeros(Window w) { return ALField(w, std::vector<Complex>(w.length())); }

  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] std::span<const Complex> values() const { return values_; }
  [[nodiscard]] Complex at(long n) const { return values_[window_.offset(n)]; }
  /// Zero extension: sites outside the window read as 0.
  [[nodiscard]] Complex at_or_zero(long n) const {
    return window_.contains(n) ? at(n) : Complex{};
  }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  friend bool operator==(const ALField&, const ALField&) = default;

 private:
  Window window_;
  std::vector<Complex> values_;
};

/// Unit-vector field on a window.
class SpinField {
 public:
  static constexpr double kNormTolerance = 1e-12;

  SpinField() = default;
  SpinField(Window w, std::vector<Vec3> values);
  /// Rescales each vector to unit length before validating.
  static SpinField normalized(Window w, std::vector<Vec3> values);

  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] std::span<const Vec3> values() const { return values_; }
  [[nodiscard]] const Vec3& at(long n) const { return values_[window_.offset(n)]; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  friend bool operator==(const SpinField& a, const SpinField& b);

 private:
  Window window_;
  std::vector<Vec3> values_;
};

/// Element of SO(3).
class Rotation {
 public:
  static constexpr double kOrthoTolerance = 1e-10;

  Rotation() : m_(Mat3::Identity()) {}
  explicit Rotation(const Mat3& m);
  static Rotation identity() { return Rotation(); }
  /// Modified Gram-Schmidt on the columns, then validated.
  static Rotation orthonormalized(const Mat3& m);

  [[nodiscard]] const Mat3& matrix() const { return m_; }
  [[nodiscard]] Vec3 operator*(const Vec3& v) const { return m_ * v; }
  [[nodiscard]] Rotation operator*(const Rotation& r) const { return Rotation(m_ * r.m_); }
  [[nodiscard]] Rotation transpose() const { return Rotation(m_.transpose()); }
  /// max |m^T m - I|
  [[nodiscard]] double orthogonality_defect() const;

  friend bool operator==(const Rotation& a, const Rotation& b) { return a.m_ == b.m_; }

 private:
  Mat3 m_;
};

/// Max-entry orthogonality defect of an arbitrary matrix.
double orthogonality_defect(const Mat3& m);
/// Modified Gram-Schmidt on columns; returns a proper rotation if det > 0.
Mat3 gram_schmidt(const Mat3& m);

class FrameSequence {
 public:
  FrameSequence() = default;
  FrameSequence(Window w, std::vector<Rotation> frames);

  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] std::span<const Rotation> frames() const { return frames_; }
  [[nodiscard]] const Rotation& at(long n) const { return frames_[window_.offset(n)]; }
  [[nodiscard]] std::size_t size() const { return frames_.size(); }

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;

 private:
  Window window_;
  std::vector<Rotation> frames_;
};

/// Inverse temperature, strictly positive.
class Beta {
 public:
  explicit Beta(double value);
  [[nodiscard]] double value() const { return value_; }

 private:
  double value_;
};

template <typename State>
concept WindowedState = requires(const State& s) {
  { s.window() } -> std::convertible_to<Window>;
};

/// Time-stamped sequence of states sharing a window. Times are strictly increasing.
template <WindowedState State>
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<double> times, std::vector<State> states)
      : times_(std::move(times)), states_(std::move(states)) {
    if (times_.size() != states_.size()) {
      throw ParameterError("trajectory: times and states differ in length");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1])) {
        throw ParameterError("trajectory: times must be strictly increasing");
      }
      if (!(states_[i].window() == states_[0].window())) {
        throw ParameterError("trajectory: states must share one window");
      }
    }
  }

  void push_back(double t, State s) {
    if (!times_.empty()) {
      if (!(t > times_.back())) throw ParameterError("trajectory: non-increasing time");
      if (!(s.window() == states_.front().window())) {
        throw ParameterError("trajectory: states must share one window");
      }
    }
    times_.push_back(t);
    states_.push_back(std::move(s));
  }

  [[nodiscard]] std::span<const double> times() const { return times_; }
  [[nodiscard]] std::span<const State> states() const { return states_; }
  [[nodiscard]] const State& state(std::size_t i) const { return states_[i]; }
  [[nodiscard]] double time(std::size_t i) const { return times_[i]; }
  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] bool empty() const { return times_.empty(); }
  [[nodiscard]] const State& front() const { return states_.front(); }
  [[nodiscard]] const State& back() const { return states_.back(); }

 private:
  std::vector<double> times_;
  std::vector<State> states_;
};

/// Deterministic random stream keyed by (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal (Box-Muller; no cached second variate).
  double normal();
  /// Uniform point on the unit sphere.
  Vec3 unit_vector();

  /// Stream id for member `index` of a named family, so families never collide.
  static std::uint64_t family_id(std::uint64_t family, std::uint64_t index);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Copy of the field restricted to w. Throws RangeError unless w lies inside the field window.
ALField window_restrict(const ALField& f, const Window& w);
SpinField window_restrict(const SpinField& f, const Window& w);

/// sum_n exp(-c <n>) |a_n - b_n|^2 over the union of windows, zero-extending both fields.
double weighted_sup_norm(const ALField& a, const ALField& b, double c);
/// Same with b identically zero.
double weighted_sup_norm(const ALField& a, double c);

}  // namespace lh
