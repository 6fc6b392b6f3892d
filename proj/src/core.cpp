#include "lhasimoto/core.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace lh {

Window::Window(long lo_, long hi_) : lo(lo_), hi(hi_) {
  if (lo > hi) {
    throw ParameterError("window: lo (" + std::to_string(lo) + ") exceeds hi (" +
                         std::to_string(hi) + ")");
  }
}

ALField::ALField(Window w, std::vector<Complex> values)
    : window_(w), values_(std::move(values)) {
  if (values_.size() != window_.length()) {
    throw ParameterError("ALField: value count does not match window length");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw DomainError("ALField: non-finite amplitude at site " +
                        std::to_string(window_.lo + static_cast<long>(i)));
    }
  }
}

SpinField::SpinField(Window w, std::vector<Vec3> values)
    : window_(w), values_(std::move(values)) {
  if (values_.size() != window_.length()) {
    throw ParameterError("SpinField: vector count does not match window length");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double norm = values_[i].norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
      throw DomainError("SpinField: non-unit spin at site " +
                        std::to_string(window_.lo + static_cast<long>(i)));
    }
  }
}

SpinField SpinField::normalized(Window w, std::vector<Vec3> values) {
  for (auto& v : values) v.normalize();
  return SpinField(w, std::move(values));
}

bool operator==(const SpinField& a, const SpinField& b) {
  if (!(a.window_ == b.window_)) return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    if (a.values_[i] != b.values_[i]) return false;
  }
  return true;
}

double orthogonality_defect(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Mat3 gram_schmidt(const Mat3& m) {
  Mat3 q = m;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < j; ++k) {
      q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    }
    q.col(j).normalize();
  }
  return q;
}

Rotation::Rotation(const Mat3& m) : m_(m) {
  if (!m_.allFinite()) throw DomainError("Rotation: non-finite entries");
  if (lh::orthogonality_defect(m_) > kOrthoTolerance) {
    throw DomainError("Rotation: matrix is not orthogonal");
  }
  if (!(m_.determinant() > 0.0)) throw DomainError("Rotation: determinant is not positive");
}

Rotation Rotation::orthonormalized(const Mat3& m) { return Rotation(gram_schmidt(m)); }

double Rotation::orthogonality_defect() const { return lh::orthogonality_defect(m_); }

FrameSequence::FrameSequence(Window w, std::vector<Rotation> frames)
    : window_(w), frames_(std::move(frames)) {
  if (frames_.size() != window_.length()) {
    throw ParameterError("FrameSequence: frame count does not match window length");
  }
}

Beta::Beta(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError("beta must be positive and finite");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(stream_id ^ 0x5851f42d4c957f2dULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::uniform() {
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Vec3 RngStream::unit_vector() {
  const double z = 2.0 * uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

std::uint64_t RngStream::family_id(std::uint64_t family, std::uint64_t index) {
  return splitmix64(family * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL) ^ index;
}

namespace {

template <typename Field, typename Value>
Field restrict_impl(const Field& f, const Window& w, std::span<const Value> values) {
  if (!f.window().contains(w)) {
    throw RangeError("window_restrict: [" + std::to_string(w.lo) + "," + std::to_string(w.hi) +
                     "] is not inside [" + std::to_string(f.window().lo) + "," +
                     std::to_string(f.window().hi) + "]");
  }
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(f.window().offset(w.lo));
  return Field(w, std::vector<Value>(first, first + static_cast<std::ptrdiff_t>(w.length())));
}

}  // namespace

ALField window_restrict(const ALField& f, const Window& w) {
  return restrict_impl<ALField, Complex>(f, w, f.values());
}

SpinField window_restrict(const SpinField& f, const Window& w) {
  return restrict_impl<SpinField, Vec3>(f, w, f.values());
}

double weighted_sup_norm(const ALField& a, const ALField& b, double c) {
  if (!(c > 0.0)) throw ParameterError("weighted_sup_norm: weight exponent must be positive");
  const long lo = std::min(a.window().lo, b.window().lo);
  const long hi = std::max(a.window().hi, b.window().hi);
  double sum = 0.0;
  for (long n = lo; n <= hi; ++n) {
    sum += std::exp(-c * japanese(n)) * std::norm(a.at_or_zero(n) - b.at_or_zero(n));
  }
  return sum;
}

double weighted_sup_norm(const ALField& a, double c) {
  return weighted_sup_norm(a, ALField::zeros(Window(a.window().lo, a.window().lo)), c);
}

}  // namespace lh
