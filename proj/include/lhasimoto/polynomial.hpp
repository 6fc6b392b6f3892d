#pragma once

// Sparse polynomials with exact rational coefficients in the generators
// x_n = Re a_n, y_n = Im a_n over a fixed window.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lhasimoto/core.hpp"

namespace lh::brackets {

enum class Part : std::uint8_t { re = 0, im = 1 };

struct Gen {
  long site = 0;
  Part part = Part::re;

  friend bool operator==(const Gen&, const Gen&) = default;
  friend auto operator<=>(const Gen&, const Gen&) = default;
};

inline Gen x(long n) { return {n, Part::re}; }
inline Gen y(long n) { return {n, Part::im}; }
std::string to_string(const Gen& g);

class BracketPoly {
 public:
  /// Exponents indexed by 2 * (site - lo) + part.
  using Monomial = std::vector<std::uint8_t>;
  using Terms = std::map<Monomial, mpq_class>;

  BracketPoly() = default;
  explicit BracketPoly(Window w);
  static BracketPoly constant(Window w, const mpq_class& c);
  static BracketPoly gen(Window w, Gen g);

  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] int degree() const;

  /// Generators with a nonzero exponent somewhere, ascending.
  [[nodiscard]] std::vector<Gen> variables() const;
  [[nodiscard]] BracketPoly derivative(Gen g) const;

  /// values[2 * (site - lo) + part]
  [[nodiscard]] double evaluate(std::span<const double> values) const;
  [[nodiscard]] mpq_class evaluate(std::span<const mpq_class> values) const;

  [[nodiscard]] std::string to_string() const;

  BracketPoly& operator+=(const BracketPoly& o);
  BracketPoly& operator-=(const BracketPoly& o);
  BracketPoly& operator*=(const mpq_class& c);
  friend BracketPoly operator+(BracketPoly a, const BracketPoly& b) { return a += b; }
  friend BracketPoly operator-(BracketPoly a, const BracketPoly& b) { return a -= b; }
  friend BracketPoly operator-(BracketPoly a) { return a *= mpq_class(-1); }
  friend BracketPoly operator*(BracketPoly a, const mpq_class& c) { return a *= c; }
  friend BracketPoly operator*(const mpq_class& c, BracketPoly a) { return a *= c; }
  friend BracketPoly operator*(const BracketPoly& a, const BracketPoly& b);
  friend bool operator==(const BracketPoly& a, const BracketPoly& b);

  [[nodiscard]] std::size_t index(Gen g) const;

 private:
  void add_term(const Monomial& m, const mpq_class& c);
  void check_window(const BracketPoly& o) const;

  Window window_;
  Terms terms_;
};

}  // namespace lh::brackets
