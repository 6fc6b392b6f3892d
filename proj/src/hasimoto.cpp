#include "lhasimoto/hasimoto.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lh::hasimoto {

using std::numbers::pi;

ThetaGamma::ThetaGamma(Window w, std::vector<double> theta_, std::vector<double> gamma_)
    : window(w), theta(std::move(theta_)), gamma(std::move(gamma_)) {
  if (theta.size() != w.length() || gamma.size() != w.length()) {
    throw ParameterError("ThetaGamma: theta/gamma lengths must match the window");
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const long n = w.lo + static_cast<long>(i);
    if (!(theta[i] > 0.0 && theta[i] < pi)) {
      throw DomainError("ThetaGamma: theta outside (0, pi) at site " + std::to_string(n));
    }
    if (!(gamma[i] > -pi && gamma[i] <= pi)) {
      throw DomainError("ThetaGamma: gamma outside (-pi, pi] at site " + std::to_string(n));
    }
  }
}

double ThetaGamma::big_gamma(long n) const {
  double s = 0.0;
  for (long l = window.lo; l <= n; ++l) s += gamma_at(l);
  return s;
}

ThetaGamma theta_gamma_from_spins(const SpinField& s) {
  const Window& sw = s.window();
  if (sw.length() < 2) throw ParameterError("theta_gamma_from_spins: need at least two spins");
  const Window w(sw.lo, sw.hi - 1);
  std::vector<double> theta;
  std::vector<double> gamma;
  theta.reserve(w.length());
  gamma.reserve(w.length());
  for (long n = w.lo; n <= w.hi; ++n) {
    const Vec3 c = s.at(n).cross(s.at(n + 1));
    const double sin2 = c.squaredNorm();
    if (sin2 <= kParallelEps) {
      throw DegeneracyError("theta_gamma_from_spins: spins " + std::to_string(n) + " and " +
                                std::to_string(n + 1) + " are (anti)parallel",
                            n);
    }
    theta.push_back(std::atan2(std::sqrt(sin2), s.at(n).dot(s.at(n + 1))));
    if (n == w.lo) {
      gamma.push_back(0.0);
      continue;
    }
    const Vec3 prev = s.at(n - 1).cross(s.at(n));
    const double re = prev.dot(c);
    const double im = s.at(n - 1).dot(c);
    double g = std::atan2(im, re);
    if (g <= -pi) g = pi;
    gamma.push_back(g);
  }
  return ThetaGamma(w, std::move(theta), std::move(gamma));
}

ALField alpha_from_theta_gamma(const ThetaGamma& tg) {
  std::vector<Complex> out;
  out.reserve(tg.window.length());
  double big_gamma = 0.0;
  for (long n = tg.window.lo; n <= tg.window.hi; ++n) {
    big_gamma += tg.gamma_at(n);
    out.push_back(std::polar(std::tan(0.5 * tg.theta_at(n)), -big_gamma));
  }
  return ALField(tg.window, std::move(out));
}

SpinField reconstruct_spins(const Vec3& s0, const Vec3& s1, const ThetaGamma& tg) {
  return reconstruct_spins(tg.window.lo, s0, s1, tg);
}

SpinField reconstruct_spins(long anchor, const Vec3& s_anchor, const Vec3& s_next,
                            const ThetaGamma& tg) {
  const Window& w = tg.window;
  if (!w.contains(anchor)) throw RangeError("reconstruct_spins: anchor outside theta window");
  if (std::abs(s_anchor.norm() - 1.0) > 1e-10 || std::abs(s_next.norm() - 1.0) > 1e-10) {
    throw ConsistencyError("reconstruct_spins: seed spins must be unit vectors");
  }
  const double angle = std::atan2(s_anchor.cross(s_next).norm(), s_anchor.dot(s_next));
  if (std::abs(angle - tg.theta_at(anchor)) > 1e-8) {
    throw ConsistencyError("reconstruct_spins: seed spins do not subtend theta at site " +
                           std::to_string(anchor));
  }
  const Window sw(w.lo, w.hi + 1);
  std::vector<Vec3> s(sw.length());
  auto at = [&](long n) -> Vec3& { return s[sw.offset(n)]; };
  at(anchor) = s_anchor;
  at(anchor + 1) = s_next;
  for (long n = anchor + 1; n <= w.hi; ++n) {
    const double th = tg.theta_at(n);
    const double th_prev = tg.theta_at(n - 1);
    const double g = tg.gamma_at(n);
    const Vec3 b = at(n - 1).cross(at(n));
    Vec3 next = std::cos(th) * at(n) +
                std::sin(th) / std::sin(th_prev) * (std::sin(g) * b + std::cos(g) * b.cross(at(n)));
    at(n + 1) = next.normalized();
  }
  for (long n = anchor; n > w.lo; --n) {
    // recover S_{n-1} from S_n, S_{n+1}
    const double th = tg.theta_at(n);
    const double th_prev = tg.theta_at(n - 1);
    const double g = tg.gamma_at(n);
    const Vec3 b = at(n).cross(at(n + 1));
    Vec3 prev = std::cos(th_prev) * at(n) +
                std::sin(th_prev) / std::sin(th) * (std::sin(g) * b - std::cos(g) * b.cross(at(n)));
    at(n - 1) = prev.normalized();
  }
  return SpinField::normalized(sw, std::move(s));
}

Mat3 generator_from_alpha(Complex z) {
  Mat3 q = Mat3::Zero();
  const double r = std::abs(z);
  if (r == 0.0) return q;
  const double f = 2.0 * std::atan(r) / r;
  q(0, 2) = f * z.real();
  q(1, 2) = -f * z.imag();
  q(2, 0) = -f * z.real();
  q(2, 1) = f * z.imag();
  return q;
}

Mat3 q_matrix(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double m = x * x + y * y;
  const double re2 = x * x - y * y;
  const double im2 = 2.0 * x * y;
  const double inv = 1.0 / (1.0 + m);
  Mat3 q;
  q << (1.0 - re2) * inv, im2 * inv, 2.0 * x * inv,
       im2 * inv, (1.0 + re2) * inv, -2.0 * y * inv,
       -2.0 * x * inv, 2.0 * y * inv, (1.0 - m) * inv;
  return q;
}

Rotation rotation_from_alpha(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("rotation_from_alpha: non-finite argument");
  }
  return Rotation(q_matrix(z));
}

Vec3 stereographic_column(Complex z) {
  const double m = std::norm(z);
  return Vec3(2.0 * z.real(), -2.0 * z.imag(), 1.0 - m) / (1.0 + m);
}

Complex alpha_from_column(const Vec3& v) {
  const Complex num(v.x(), -v.y());
  if (v.z() >= 0.0) return num / (1.0 + v.z());
  // 1 + v3 = (v1^2 + v2^2)/(1 - v3) on the sphere, without cancellation
  return num * (1.0 - v.z()) / (v.x() * v.x() + v.y() * v.y());
}

FrameTransform alphas_from_spins_frame(const SpinField& s, const Rotation& p0) {
  const Window& sw = s.window();
  if (sw.length() < 2) throw ParameterError("alphas_from_spins_frame: need at least two spins");
  if ((p0 * Vec3::UnitZ() - s.at(sw.lo)).cwiseAbs().maxCoeff() > 1e-8) {
    throw ConsistencyError("alphas_from_spins_frame: S_lo differs from p0 e3");
  }
  const Window aw(sw.lo, sw.hi - 1);
  std::vector<Complex> alpha;
  std::vector<Rotation> frames;
  alpha.reserve(aw.length());
  frames.reserve(sw.length());
  Mat3 p = p0.matrix();
  frames.emplace_back(p);
  for (long n = aw.lo; n <= aw.hi; ++n) {
    if (1.0 + s.at(n).dot(s.at(n + 1)) <= kAntiparallelEps) {
      throw DegeneracyError("alphas_from_spins_frame: spins " + std::to_string(n) + " and " +
                                std::to_string(n + 1) + " are antiparallel",
                            n);
    }
    const Vec3 v = (p.transpose() * s.at(n + 1)).normalized();
    const Complex a = alpha_from_column(v);
    alpha.push_back(a);
    p = p * q_matrix(a);
    if ((n - aw.lo + 1) % kReorthoInterval == 0) p = gram_schmidt(p);
    frames.emplace_back(p);
  }
  return {ALField(aw, std::move(alpha)), FrameSequence(sw, std::move(frames))};
}

std::vector<Mat3> frame_chain(std::span<const Complex> alpha, long lo, long anchor,
                              const Mat3& o) {
  const long hi = lo + static_cast<long>(alpha.size()) - 1;
  const Window fw(lo, hi + 1);
  if (!fw.contains(anchor)) throw RangeError("frame_chain: anchor outside frame window");
  std::vector<Mat3> p(fw.length());
  p[fw.offset(anchor)] = o;
  int count = 0;
  for (long n = anchor; n <= hi; ++n) {
    Mat3 next = p[fw.offset(n)] * q_matrix(alpha[static_cast<std::size_t>(n - lo)]);
    if (++count % kReorthoInterval == 0) next = gram_schmidt(next);
    p[fw.offset(n + 1)] = next;
  }
  count = 0;
  for (long n = anchor - 1; n >= lo; --n) {
    Mat3 prev = p[fw.offset(n + 1)] * q_matrix(alpha[static_cast<std::size_t>(n - lo)]).transpose();
    if (++count % kReorthoInterval == 0) prev = gram_schmidt(prev);
    p[fw.offset(n)] = prev;
  }
  return p;
}

SpinTransform spins_from_alphas(const ALField& a, const Rotation& o, std::optional<long> anchor) {
  const Window& aw = a.window();
  const long anc = anchor.value_or(aw.lo);
  const auto mats = frame_chain(a.values(), aw.lo, anc, o.matrix());
  const Window fw(aw.lo, aw.hi + 1);
  std::vector<Rotation> frames;
  std::vector<Vec3> spins;
  frames.reserve(mats.size());
  spins.reserve(mats.size());
  for (const auto& m : mats) {
    frames.emplace_back(m);
    spins.push_back(m.col(2));
  }
  return {SpinField::normalized(fw, std::move(spins)), FrameSequence(fw, std::move(frames))};
}

}  // namespace lh::hasimoto
