#include "lhasimoto/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace lh::brackets {

std::string to_string(const Gen& g) {
  return std::string(g.part == Part::re ? "x" : "y") + "[" + std::to_string(g.site) + "]";
}

BracketPoly::BracketPoly(Window w) : window_(w) {}

BracketPoly BracketPoly::constant(Window w, const mpq_class& c) {
  BracketPoly p(w);
  p.add_term(Monomial(2 * w.length(), 0), c);
  return p;
}

BracketPoly BracketPoly::gen(Window w, Gen g) {
  BracketPoly p(w);
  Monomial m(2 * w.length(), 0);
  m[p.index(g)] = 1;
  p.add_term(m, 1);
  return p;
}

std::size_t BracketPoly::index(Gen g) const {
  if (!window_.contains(g.site)) {
    throw WindowError("BracketPoly: generator " + lh::brackets::to_string(g) +
                      " outside the window");
  }
  return 2 * window_.offset(g.site) + static_cast<std::size_t>(g.part);
}

int BracketPoly::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

std::vector<Gen> BracketPoly::variables() const {
  std::vector<bool> used(2 * window_.length(), false);
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) used[i] = true;
    }
  }
  std::vector<Gen> out;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i]) out.push_back({window_.lo + static_cast<long>(i / 2), static_cast<Part>(i % 2)});
  }
  return out;
}

BracketPoly BracketPoly::derivative(Gen g) const {
  const std::size_t k = index(g);
  BracketPoly out(window_);
  for (const auto& [m, c] : terms_) {
    if (m[k] == 0) continue;
    Monomial d = m;
    --d[k];
    out.add_term(d, c * m[k]);
  }
  return out;
}

double BracketPoly::evaluate(std::span<const double> values) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) t *= values[i];
    }
    s += t;
  }
  return s;
}

mpq_class BracketPoly::evaluate(std::span<const mpq_class> values) const {
  mpq_class s = 0;
  for (const auto& [m, c] : terms_) {
    mpq_class t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) t *= values[i];
    }
    s += t;
  }
  return s;
}

std::string BracketPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      os << "*" << lh::brackets::to_string({window_.lo + static_cast<long>(i / 2),
                                            static_cast<Part>(i % 2)});
      if (m[i] > 1) os << "^" << static_cast<int>(m[i]);
    }
  }
  return os.str();
}

void BracketPoly::add_term(const Monomial& m, const mpq_class& c_in) {
  mpq_class c(c_in);
  c.canonicalize();
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void BracketPoly::check_window(const BracketPoly& o) const {
  if (!(window_ == o.window_)) throw WindowError("BracketPoly: mismatched windows");
}

BracketPoly& BracketPoly::operator+=(const BracketPoly& o) {
  check_window(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

BracketPoly& BracketPoly::operator-=(const BracketPoly& o) {
  check_window(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

BracketPoly& BracketPoly::operator*=(const mpq_class& c_in) {
  mpq_class c(c_in);
  c.canonicalize();
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

BracketPoly operator*(const BracketPoly& a, const BracketPoly& b) {
  a.check_window(b);
  BracketPoly out(a.window_);
  BracketPoly::Monomial m(2 * a.window_.length());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      }
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

bool operator==(const BracketPoly& a, const BracketPoly& b) {
  if (a.terms_.empty() && b.terms_.empty()) return true;
  return a.window_ == b.window_ && a.terms_ == b.terms_;
}

}  // namespace lh::brackets
