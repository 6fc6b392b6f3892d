#include "lhasimoto/brackets.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "lhasimoto/hasimoto.hpp"
#include "lhasimoto/sampling.hpp"

namespace lh::brackets {

namespace {

// Generator polynomials over a window, reading 0 outside it.
struct Gens {
  Window w;

  [[nodiscard]] BracketPoly zero() const { return BracketPoly(w); }
  [[nodiscard]] BracketPoly one() const { return BracketPoly::constant(w, 1); }
  [[nodiscard]] BracketPoly X(long n) const {
    return w.contains(n) ? BracketPoly::gen(w, x(n)) : zero();
  }
  [[nodiscard]] BracketPoly Y(long n) const {
    return w.contains(n) ? BracketPoly::gen(w, y(n)) : zero();
  }
  /// 1 + |a_n|^2
  [[nodiscard]] BracketPoly rho(long n) const { return one() + X(n) * X(n) + Y(n) * Y(n); }
  /// (1 + |a_n|^2) / 2
  [[nodiscard]] BracketPoly half_rho(long n) const { return rho(n) * mpq_class(1, 2); }
};

// {x_n, y_m} for the amplitude table.
BracketPoly alpha_xy(const Gens& G, long n, long m) {
  if (n >= m + 2) return -(G.half_rho(m) * G.Y(n) * (G.Y(m - 1) - G.Y(m + 1)));
  if (n == m + 1) {
    return -(G.half_rho(m) * (G.Y(n) * (G.Y(m - 1) - G.Y(m + 1)) + G.half_rho(n)));
  }
  if (n == m) {
    return G.half_rho(n) - G.half_rho(n) * (G.X(n) * G.X(n - 1) + G.Y(n) * G.Y(n - 1));
  }
  if (n == m - 1) {
    return -(G.half_rho(n) * (G.X(m) * (G.X(n - 1) - G.X(n + 1)) + G.half_rho(m)));
  }
  return -(G.half_rho(n) * G.X(m) * (G.X(n - 1) - G.X(n + 1)));
}

// {x_n, x_m} for n >= m + 1.
BracketPoly alpha_xx_upper(const Gens& G, long n, long m) {
  return -(G.half_rho(m) * G.Y(n) * (G.X(m - 1) - G.X(m + 1)));
}

// {y_n, y_m} for n >= m + 1.
BracketPoly alpha_yy_upper(const Gens& G, long n, long m) {
  return G.half_rho(m) * G.X(n) * (G.Y(m - 1) - G.Y(m + 1));
}

BracketPoly alpha_entry(const Gens& G, Gen a, Gen b) {
  const long n = a.site;
  const long m = b.site;
  if (a.part == Part::re && b.part == Part::im) return alpha_xy(G, n, m);
  if (a.part == Part::im && b.part == Part::re) return -alpha_xy(G, m, n);
  if (n == m) return G.zero();
  if (a.part == Part::re) {
    return n > m ? alpha_xx_upper(G, n, m) : -alpha_xx_upper(G, m, n);
  }
  return n > m ? alpha_yy_upper(G, n, m) : -alpha_yy_upper(G, m, n);
}

BracketPoly standard_entry(const Gens& G, Gen a, Gen b) {
  if (a.site != b.site || a.part == b.part) return G.zero();
  return a.part == Part::re ? G.rho(a.site) : -G.rho(a.site);
}

Gen gen_at(const Window& w, std::size_t i) {
  return {w.lo + static_cast<long>(i / 2), static_cast<Part>(i % 2)};
}

}  // namespace

BracketTable::BracketTable(TableKind kind, Window w, EdgeMode mode)
    : kind_(kind), window_(w), mode_(mode) {
  const std::size_t ng = 2 * w.length();
  table_.assign(ng * ng, BracketPoly(w));
  const Gens G{w};
  for (std::size_t i = 0; i < ng; ++i) {
    const Gen a = gen_at(w, i);
    for (std::size_t j = 0; j < ng; ++j) {
      const Gen b = gen_at(w, j);
      if (mode == EdgeMode::strict &&
          (a.site == w.lo || a.site == w.hi || b.site == w.lo || b.site == w.hi)) {
        continue;
      }
      table_[i * ng + j] = kind == TableKind::alpha ? alpha_entry(G, a, b) : standard_entry(G, a, b);
    }
  }
}

std::string BracketTable::name() const {
  return kind_ == TableKind::alpha ? "alpha" : "standard";
}

std::size_t BracketTable::slot(Gen g) const {
  if (!window_.contains(g.site)) {
    throw WindowError("bracket: generator " + to_string(g) + " outside the table window");
  }
  if (mode_ == EdgeMode::strict && (g.site == window_.lo || g.site == window_.hi)) {
    throw WindowError("bracket: generator " + to_string(g) +
                      " touches the window edge; its neighbours are undefined");
  }
  return 2 * window_.offset(g.site) + static_cast<std::size_t>(g.part);
}

const BracketPoly& BracketTable::generator_bracket(Gen a, Gen b) const {
  const std::size_t ng = 2 * window_.length();
  return table_[slot(a) * ng + slot(b)];
}

void BracketTable::require_support(const BracketPoly& p, long margin) const {
  if (!(p.window() == window_) && !p.is_zero()) {
    throw WindowError("bracket: polynomial window differs from the table window");
  }
  if (mode_ == EdgeMode::zero_extend) return;
  for (const auto& g : p.variables()) {
    if (g.site < window_.lo + margin || g.site > window_.hi - margin) {
      throw WindowError("bracket: generator " + to_string(g) + " within " +
                        std::to_string(margin) + " site(s) of the window edge");
    }
  }
}

BracketPoly bracket(const BracketPoly& f, const BracketPoly& g, const BracketTable& t) {
  t.require_support(f);
  t.require_support(g);
  BracketPoly out(t.window());
  if (f.is_zero() || g.is_zero()) return out;
  const auto vf = f.variables();
  const auto vg = g.variables();
  std::vector<BracketPoly> dg;
  dg.reserve(vg.size());
  for (const auto& v : vg) dg.push_back(g.derivative(v));
  for (const auto& u : vf) {
    const BracketPoly df = f.derivative(u);
    for (std::size_t j = 0; j < vg.size(); ++j) {
      const BracketPoly& tb = t.generator_bracket(u, vg[j]);
      if (tb.is_zero()) continue;
      out += df * dg[j] * tb;
    }
  }
  return out;
}

BracketPoly jacobi_residual(const BracketPoly& f, const BracketPoly& g, const BracketPoly& h,
                            const BracketTable& t) {
  t.require_support(f, 2);
  t.require_support(g, 2);
  t.require_support(h, 2);
  return bracket(f, bracket(g, h, t), t) + bracket(g, bracket(h, f, t), t) +
         bracket(h, bracket(f, g, t), t);
}

BracketPoly compatibility_residual(const BracketPoly& f, const BracketPoly& g,
                                   const BracketPoly& h, const BracketTable& alpha,
                                   const BracketTable& standard) {
  if (alpha.kind() != TableKind::alpha || standard.kind() != TableKind::standard) {
    throw ParameterError("compatibility_residual: expected (alpha, standard) tables");
  }
  for (const auto* p : {&f, &g, &h}) {
    alpha.require_support(*p, 2);
    standard.require_support(*p, 2);
  }
  auto mixed = [&](const BracketPoly& a, const BracketPoly& b, const BracketPoly& c) {
    return bracket(a, bracket(b, c, standard), alpha) + bracket(a, bracket(b, c, alpha), standard);
  };
  return mixed(f, g, h) + mixed(g, h, f) + mixed(h, f, g);
}

BracketPoly compatibility_residual(const BracketPoly& f, const BracketPoly& g,
                                   const BracketPoly& h) {
  const BracketTable a(TableKind::alpha, f.window());
  const BracketTable s(TableKind::standard, f.window());
  return compatibility_residual(f, g, h, a, s);
}

namespace {

template <typename Residual>
TripleReport all_triples(long radius, Residual residual) {
  const Window w(-radius - 2, radius + 2);
  std::vector<Gen> gens;
  for (long n = -radius; n <= radius; ++n) {
    gens.push_back(x(n));
    gens.push_back(y(n));
  }
  TripleReport r;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i; j < gens.size(); ++j) {
      for (std::size_t k = j; k < gens.size(); ++k) {
        const auto res = residual(BracketPoly::gen(w, gens[i]), BracketPoly::gen(w, gens[j]),
                                  BracketPoly::gen(w, gens[k]));
        ++r.triples;
        if (!res.is_zero()) {
          ++r.nonzero;
          if (r.failures.size() < 8) {
            r.failures.push_back(to_string(gens[i]) + ", " + to_string(gens[j]) + ", " +
                                 to_string(gens[k]) + ": " + res.to_string());
          }
        }
      }
    }
  }
  return r;
}

}  // namespace

TripleReport jacobi_all_triples(TableKind kind, long radius) {
  const BracketTable t(kind, Window(-radius - 2, radius + 2));
  return all_triples(radius, [&](const BracketPoly& f, const BracketPoly& g,
                                 const BracketPoly& h) { return jacobi_residual(f, g, h, t); });
}

TripleReport compatibility_all_triples(long radius) {
  const Window w(-radius - 2, radius + 2);
  const BracketTable a(TableKind::alpha, w);
  const BracketTable s(TableKind::standard, w);
  return all_triples(radius, [&](const BracketPoly& f, const BracketPoly& g,
                                 const BracketPoly& h) {
    return compatibility_residual(f, g, h, a, s);
  });
}

ComplexPoly hamilton_case(const Window& w, long n, long k) {
  const Gens G{w};
  const BracketPoly an_re = G.X(n);
  const BracketPoly an_im = G.Y(n);
  ComplexPoly out{G.zero(), G.zero()};
  // Re[conj(a_k) (a_{k-1} - a_{k+1})]
  auto drift = [&] {
    return G.X(k) * (G.X(k - 1) - G.X(k + 1)) + G.Y(k) * (G.Y(k - 1) - G.Y(k + 1));
  };
  if (n >= k + 2) {
    const auto r = drift() * mpq_class(-2);
    out.re = r * an_re;
    out.im = r * an_im;
  } else if (n == k + 1) {
    const auto r = drift() * mpq_class(-2);
    out.re = r * an_re - G.rho(n) * G.X(k);
    out.im = r * an_im - G.rho(n) * G.Y(k);
  } else if (n == k) {
    const auto r = (G.X(k) * G.X(k - 1) + G.Y(k) * G.Y(k - 1)) * mpq_class(-2);
    out.re = r * an_re + an_re * mpq_class(2);
    out.im = r * an_im + an_im * mpq_class(2);
  } else if (n == k - 1) {
    out.re = -(G.rho(n) * G.X(k));
    out.im = -(G.rho(n) * G.Y(k));
  }
  return out;
}

HamiltonReport hamilton_check(const Window& w) {
  if (w.length() < 5) throw WindowError("hamilton_check: window needs at least 5 sites");
  const BracketTable t(TableKind::alpha, w, EdgeMode::zero_extend);
  const Gens G{w};
  HamiltonReport r;
  r.window = w;
  for (long n = w.lo; n <= w.hi; ++n) {
    ComplexPoly total{G.zero(), G.zero()};
    for (long k = w.lo; k <= w.hi; ++k) {
      const BracketPoly mk = G.X(k) * G.X(k) + G.Y(k) * G.Y(k);
      const auto bx = bracket(G.X(n), mk, t);
      const auto by = bracket(G.Y(n), mk, t);
      // 2i({x_n, m_k} + i{y_n, m_k})
      const ComplexPoly lhs{by * mpq_class(-2), bx * mpq_class(2)};
      const ComplexPoly c = hamilton_case(w, n, k);
      const ComplexPoly rhs{G.rho(k) * c.re, G.rho(k) * c.im};
      ++r.cases_checked;
      if (!(lhs == rhs)) {
        ++r.case_failures;
        if (r.failures.size() < 8) {
          r.failures.push_back("case n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
      }
      total.re += c.re;
      total.im += c.im;
    }
    const ComplexPoly al{
        -(G.rho(n) * (G.X(n + 1) + G.X(n - 1))) + G.X(n) * mpq_class(2),
        -(G.rho(n) * (G.Y(n + 1) + G.Y(n - 1))) + G.Y(n) * mpq_class(2)};
    ++r.sites_checked;
    if (!(total == al)) {
      ++r.sum_failures;
      if (r.failures.size() < 8) r.failures.push_back("sum at n=" + std::to_string(n));
    }
  }
  return r;
}

namespace {

double wrapped(double d, bool angular) {
  return angular ? std::remainder(d, 2.0 * std::numbers::pi) : d;
}

}  // namespace

std::vector<Vec3> spin_gradient(const SpinObservable& f, const SpinField& s) {
  constexpr double h1 = 1e-5;
  constexpr double h2 = 1e-6;
  const Window& w = s.window();
  std::vector<Vec3> base(s.values().begin(), s.values().end());
  const double f0 = f.fn(s);
  std::vector<Vec3> grad(base.size(), Vec3::Zero());
  auto eval = [&](std::size_t k, int c, double h) {
    std::vector<Vec3> v = base;
    v[k](c) += h;
    v[k].normalize();
    return f.fn(SpinField(w, std::move(v)));
  };
  for (std::size_t k = 0; k < base.size(); ++k) {
    for (int c = 0; c < 3; ++c) {
      const double p1 = eval(k, c, h1);
      const double m1 = eval(k, c, -h1);
      const double d1 = (wrapped(p1 - f0, f.angular) - wrapped(m1 - f0, f.angular)) / (2 * h1);
      if (d1 == 0.0 && p1 == f0 && m1 == f0) continue;
      const double p2 = eval(k, c, h2);
      const double m2 = eval(k, c, -h2);
      const double d2 = (wrapped(p2 - f0, f.angular) - wrapped(m2 - f0, f.angular)) / (2 * h2);
      grad[k](c) = (h1 * h1 * d2 - h2 * h2 * d1) / (h1 * h1 - h2 * h2);
    }
  }
  return grad;
}

double spin_bracket_numeric(const SpinObservable& f, const SpinObservable& g,
                            const SpinField& s) {
  const auto gf = spin_gradient(f, s);
  const auto gg = spin_gradient(g, s);
  double sum = 0.0;
  for (std::size_t k = 0; k < gf.size(); ++k) {
    sum += gf[k].dot(s.values()[k].cross(gg[k]));
  }
  return sum;
}

namespace observables {

SpinObservable theta(long n) {
  return {[n](const SpinField& s) { return hasimoto::theta_gamma_from_spins(s).theta_at(n); },
          false};
}

SpinObservable gamma(long n) {
  return {[n](const SpinField& s) { return hasimoto::theta_gamma_from_spins(s).gamma_at(n); },
          true};
}

SpinObservable big_gamma(long n) {
  return {[n](const SpinField& s) { return hasimoto::theta_gamma_from_spins(s).big_gamma(n); },
          true};
}

SpinObservable re_alpha(long n) {
  return {[n](const SpinField& s) {
            return hasimoto::alpha_from_theta_gamma(hasimoto::theta_gamma_from_spins(s))
                .at(n)
                .real();
          },
          false};
}

SpinObservable im_alpha(long n) {
  return {[n](const SpinField& s) {
            return hasimoto::alpha_from_theta_gamma(hasimoto::theta_gamma_from_spins(s))
                .at(n)
                .imag();
          },
          false};
}

SpinObservable cos_theta(long n) {
  return {[n](const SpinField& s) { return s.at(n).dot(s.at(n + 1)); }, false};
}

}  // namespace observables

bool TableReport::pass() const {
  if (rows.empty() || samples == 0) return false;
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

namespace {

struct RowSpec {
  std::string table;
  std::string row;
  SpinObservable f;
  SpinObservable g;
  std::function<double(const hasimoto::ThetaGamma&, const std::vector<double>&)> rhs;
};

std::string shifted(const char* base, long d) {
  std::string s = std::string(base) + "_{n";
  if (d > 0) s += "+";
  return s + std::to_string(d) + "}";
}

double cosec(double a) { return 1.0 / std::sin(a); }
double cot(double a) { return std::cos(a) / std::sin(a); }

std::vector<RowSpec> table_rows(long c, const BracketTable& at) {
  using namespace observables;
  using TG = hasimoto::ThetaGamma;
  using V = std::vector<double>;
  std::vector<RowSpec> rows;
  const long n = c;
  auto th = [](const TG& t, long i) { return t.theta_at(i); };
  auto ga = [](const TG& t, long i) { return t.gamma_at(i); };

  // {f, theta_n}
  const std::string t1 = "theta-table {f, theta_n}";
  rows.push_back({t1, "gamma_{n-1}", gamma(n - 1), theta(n), [=](const TG& t, const V&) {
                    return -cosec(th(t, n - 1)) * std::cos(ga(t, n));
                  }});
  rows.push_back({t1, "theta_{n-1}", theta(n - 1), theta(n),
                  [=](const TG& t, const V&) { return std::sin(ga(t, n)); }});
  rows.push_back({t1, "gamma_n", gamma(n), theta(n), [=](const TG& t, const V&) {
                    return cot(0.5 * th(t, n)) + cot(th(t, n - 1)) * std::cos(ga(t, n));
                  }});
  rows.push_back({t1, "theta_n", theta(n), theta(n), [](const TG&, const V&) { return 0.0; }});
  rows.push_back({t1, "gamma_{n+1}", gamma(n + 1), theta(n), [=](const TG& t, const V&) {
                    return -cot(0.5 * th(t, n)) - cot(th(t, n + 1)) * std::cos(ga(t, n + 1));
                  }});
  rows.push_back({t1, "theta_{n+1}", theta(n + 1), theta(n),
                  [=](const TG& t, const V&) { return -std::sin(ga(t, n + 1)); }});
  rows.push_back({t1, "gamma_{n+2}", gamma(n + 2), theta(n), [=](const TG& t, const V&) {
                    return cosec(th(t, n + 1)) * std::cos(ga(t, n + 1));
                  }});
  for (long d : {-3L, -2L, 3L}) {
    rows.push_back({t1, shifted("gamma", d) + " (zero)", gamma(n + d), theta(n),
                    [](const TG&, const V&) { return 0.0; }});
  }
  for (long d : {-2L, 2L}) {
    rows.push_back({t1, shifted("theta", d) + " (zero)", theta(n + d), theta(n),
                    [](const TG&, const V&) { return 0.0; }});
  }

  // {f, gamma_n}
  const std::string t2 = "gamma-table {f, gamma_n}";
  rows.push_back({t2, "gamma_{n-2}", gamma(n - 2), gamma(n), [=](const TG& t, const V&) {
                    return -std::sin(ga(t, n - 1)) * cosec(th(t, n - 2)) * cosec(th(t, n - 1));
                  }});
  rows.push_back({t2, "gamma_{n-1}", gamma(n - 1), gamma(n), [=](const TG& t, const V&) {
                    return (cot(th(t, n - 2)) * std::sin(ga(t, n - 1)) +
                            cot(th(t, n)) * std::sin(ga(t, n))) *
                           cosec(th(t, n - 1));
                  }});
  rows.push_back({t2, "gamma_n", gamma(n), gamma(n), [](const TG&, const V&) { return 0.0; }});
  rows.push_back({t2, "gamma_{n+1}", gamma(n + 1), gamma(n), [=](const TG& t, const V&) {
                    return -(cot(th(t, n - 1)) * std::sin(ga(t, n)) +
                             cot(th(t, n + 1)) * std::sin(ga(t, n + 1))) *
                           cosec(th(t, n));
                  }});
  rows.push_back({t2, "gamma_{n+2}", gamma(n + 2), gamma(n), [=](const TG& t, const V&) {
                    return std::sin(ga(t, n + 1)) * cosec(th(t, n)) * cosec(th(t, n + 1));
                  }});
  for (long d : {-3L, 3L}) {
    rows.push_back({t2, shifted("gamma", d) + " (zero)", gamma(n + d), gamma(n), [](const TG&, const V&) { return 0.0; }});
  }

  // {Gamma(m), theta_k}
  const long k = c;
  const std::string t3 = "Gamma-theta {Gamma(m), theta_k}";
  auto tan_half = [](double a) { return std::tan(0.5 * a); };
  for (long d : {2L, 3L}) {
    rows.push_back({t3, "m=k+" + std::to_string(d), big_gamma(k + d), theta(k),
                    [=](const TG& t, const V&) {
                      return -tan_half(th(t, k - 1)) * std::cos(ga(t, k)) +
                             tan_half(th(t, k + 1)) * std::cos(ga(t, k + 1));
                    }});
  }
  rows.push_back({t3, "m=k+1", big_gamma(k + 1), theta(k), [=](const TG& t, const V&) {
                    return -tan_half(th(t, k - 1)) * std::cos(ga(t, k)) -
                           cot(th(t, k + 1)) * std::cos(ga(t, k + 1));
                  }});
  rows.push_back({t3, "m=k", big_gamma(k), theta(k), [=](const TG& t, const V&) {
                    return -tan_half(th(t, k - 1)) * std::cos(ga(t, k)) + cot(0.5 * th(t, k));
                  }});
  rows.push_back({t3, "m=k-1", big_gamma(k - 1), theta(k), [=](const TG& t, const V&) {
                    return -cosec(th(t, k - 1)) * std::cos(ga(t, k));
                  }});
  rows.push_back({t3, "m=k-2", big_gamma(k - 2), theta(k),
                  [](const TG&, const V&) { return 0.0; }});

  // {Gamma(p), Gamma(m)}
  const long m = c;
  const std::string t4 = "Gamma-Gamma {Gamma(p), Gamma(m)}";
  rows.push_back({t4, "p=m+1", big_gamma(m + 1), big_gamma(m), [=](const TG& t, const V&) {
                    return (tan_half(th(t, m - 1)) * std::sin(ga(t, m)) -
                            cot(th(t, m + 1)) * std::sin(ga(t, m + 1))) *
                           cosec(th(t, m));
                  }});
  for (long d : {2L, 3L}) {
    rows.push_back({t4, "p=m+" + std::to_string(d), big_gamma(m + d), big_gamma(m),
                    [=](const TG& t, const V&) {
                      return (tan_half(th(t, m - 1)) * std::sin(ga(t, m)) +
                              tan_half(th(t, m + 1)) * std::sin(ga(t, m + 1))) *
                             cosec(th(t, m));
                    }});
  }

  // amplitude table, every case
  auto poly_row = [&at](Gen a, Gen b) {
    const BracketPoly* p = &at.generator_bracket(a, b);
    return [p](const TG&, const V& v) { return p->evaluate(v); };
  };
  auto obs = [](Gen g) { return g.part == Part::re ? re_alpha(g.site) : im_alpha(g.site); };
  const std::string t5 = "alpha-table";
  for (long d = -3; d <= 3; ++d) {
    const Gen a = x(m + d);
    const Gen b = y(m);
    rows.push_back({t5, "{x_{m" + std::string(d >= 0 ? "+" : "") + std::to_string(d) +
                            "}, y_m}",
                    obs(a), obs(b), poly_row(a, b)});
  }
  for (long d : {1L, 2L}) {
    rows.push_back({t5, "{x_{m+" + std::to_string(d) + "}, x_m}", obs(x(m + d)), obs(x(m)),
                    poly_row(x(m + d), x(m))});
    rows.push_back({t5, "{y_{m+" + std::to_string(d) + "}, y_m}", obs(y(m + d)), obs(y(m)),
                    poly_row(y(m + d), y(m))});
  }
  rows.push_back({t5, "{x_m, x_m}", obs(x(m)), obs(x(m)), poly_row(x(m), x(m))});
  return rows;
}

}  // namespace

TableReport verify_bracket_tables(std::size_t n_samples, RngStream& rng, double beta,
                                  double tolerance) {
  if (n_samples < 1) throw ParameterError("verify_bracket_tables: need n_samples >= 1");
  // spins on [0, 13]: theta on [0, 12], gamma gauge-free on [1, 12]
  const Window spins(0, 13);
  const Window amps(0, 12);
  const long centre = 6;
  const BracketTable at(TableKind::alpha, amps);
  auto rows = table_rows(centre, at);
  TableReport report;
  report.tolerance = tolerance;
  report.rows.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    report.rows[i].table = rows[i].table;
    report.rows[i].row = rows[i].row;
  }
  const Beta b(beta);
  while (report.samples < n_samples) {
    const SpinField s = sampling::sample_gibbs_chain(b, spins, rng);
    hasimoto::ThetaGamma tg;
    try {
      tg = hasimoto::theta_gamma_from_spins(s);
    } catch (const DegeneracyError&) {
      ++report.resampled;
      continue;
    }
    const ALField a = hasimoto::alpha_from_theta_gamma(tg);
    std::vector<double> vals;
    for (const auto& z : a.values()) {
      vals.push_back(z.real());
      vals.push_back(z.imag());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double lhs = spin_bracket_numeric(rows[i].f, rows[i].g, s);
      const double rhs = rows[i].rhs(tg, vals);
      auto& r = report.rows[i];
      r.max_discrepancy = std::max(r.max_discrepancy, std::abs(lhs - rhs));
      r.max_magnitude = std::max(r.max_magnitude, std::abs(rhs));
    }
    ++report.samples;
  }
  for (auto& r : report.rows) r.pass = r.max_discrepancy <= tolerance;
  return report;
}

std::string table_hash() {
  const Window w(-2, 2);
  std::uint64_t hsh = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      hsh ^= ch;
      hsh *= 1099511628211ULL;
    }
  };
  for (auto kind : {TableKind::alpha, TableKind::standard}) {
    const BracketTable t(kind, w, EdgeMode::zero_extend);
    feed(t.name());
    for (std::size_t i = 0; i < 2 * w.length(); ++i) {
      for (std::size_t j = 0; j < 2 * w.length(); ++j) {
        const Gen a = gen_at(w, i);
        const Gen b = gen_at(w, j);
        feed(to_string(a) + "," + to_string(b) + "=" + t.generator_bracket(a, b).to_string() +
             ";");
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hsh));
  return buf;
}

}  // namespace lh::brackets
