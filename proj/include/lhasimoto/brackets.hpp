#pragma once

// The two Poisson structures on the amplitude generators, exact bracket algebra over them,
// and a finite-difference evaluator of the spin-level bracket used to check the tables.

#include <functional>
#include <string>
#include <vector>

#include "lhasimoto/core.hpp"
#include "lhasimoto/polynomial.hpp"

namespace lh::brackets {

enum class TableKind { alpha, standard };

/// strict: generators on the window edge are rejected (their neighbours are undefined).
/// zero_extend: generators outside the window read as 0, so every site may be used.
enum class EdgeMode { strict, zero_extend };

class BracketTable {
 public:
  BracketTable(TableKind kind, Window w, EdgeMode mode = EdgeMode::strict);

  [[nodiscard]] TableKind kind() const { return kind_; }
  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] EdgeMode mode() const { return mode_; }
  [[nodiscard]] std::string name() const;

  /// {a, b}. Throws WindowError for edge generators in strict mode.
  [[nodiscard]] const BracketPoly& generator_bracket(Gen a, Gen b) const;
  /// Throws WindowError unless every generator of p may be bracketed.
  void require_support(const BracketPoly& p, long margin = 1) const;

 private:
  [[nodiscard]] std::size_t slot(Gen g) const;

  TableKind kind_;
  Window window_;
  EdgeMode mode_;
  std::vector<BracketPoly> table_;  ///< 2L x 2L, row-major by generator index
};

/// Extension of the generator table by bilinearity and the Leibniz rule.
BracketPoly bracket(const BracketPoly& f, const BracketPoly& g, const BracketTable& t);

/// {f,{g,h}} + {g,{h,f}} + {h,{f,g}}. Supports must keep two sites from the edge (strict).
BracketPoly jacobi_residual(const BracketPoly& f, const BracketPoly& g, const BracketPoly& h,
                            const BracketTable& t);

/// Cyclic sum of {F,{G,H}_0} + {F,{G,H}}_0 for the alpha table {,} and standard table {,}_0.
BracketPoly compatibility_residual(const BracketPoly& f, const BracketPoly& g,
                                   const BracketPoly& h, const BracketTable& alpha,
                                   const BracketTable& standard);
/// Same with strict tables built on f's window.
BracketPoly compatibility_residual(const BracketPoly& f, const BracketPoly& g,
                                   const BracketPoly& h);

struct TripleReport {
  std::size_t triples = 0;
  std::size_t nonzero = 0;
  std::vector<std::string> failures;  ///< first few offending triples
  [[nodiscard]] bool pass() const { return triples > 0 && nonzero == 0; }
};

/// Every multiset {a, b, c} of generators with |site| <= radius, on the window
/// [-radius-2, radius+2].
TripleReport jacobi_all_triples(TableKind kind, long radius = 3);
TripleReport compatibility_all_triples(long radius = 3);

struct HamiltonReport {
  Window window;
  std::size_t cases_checked = 0;
  std::size_t case_failures = 0;
  std::size_t sites_checked = 0;
  std::size_t sum_failures = 0;
  std::vector<std::string> failures;
  [[nodiscard]] bool pass() const {
    return cases_checked > 0 && case_failures == 0 && sum_failures == 0;
  }
};

/// Complex polynomial as a pair (re, im).
struct ComplexPoly {
  BracketPoly re;
  BracketPoly im;
  friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;
};

/// i{a_n, 2 log(1 + |a_k|^2)} as given case by case (polynomial in every case).
ComplexPoly hamilton_case(const Window& w, long n, long k);

/// Checks, with the zero-extended alpha table on w, that
///   2i{a_n, m_k} = (1 + m_k) * hamilton_case(n, k)   for all n, k in w, m_k = |a_k|^2,
/// and that sum_k hamilton_case(n, k) is the AL right-hand side at every n.
/// Throws WindowError when w has fewer than 5 sites.
HamiltonReport hamilton_check(const Window& w);

/// Scalar function of a spin field. Angular observables are differenced modulo 2 pi.
struct SpinObservable {
  std::function<double(const SpinField&)> fn;
  bool angular = false;
};

/// Ambient gradient of F(S/|S|) at every site, by central differences with Richardson
/// extrapolation over the steps 1e-5 and 1e-6.
std::vector<Vec3> spin_gradient(const SpinObservable& f, const SpinField& s);

/// {F, G} = sum_n grad_n F . (S_n x grad_n G).
double spin_bracket_numeric(const SpinObservable& f, const SpinObservable& g,
                            const SpinField& s);

namespace observables {
SpinObservable theta(long n);
SpinObservable gamma(long n);
/// Gamma anchored at the window start.
SpinObservable big_gamma(long n);
SpinObservable re_alpha(long n);
SpinObservable im_alpha(long n);
SpinObservable cos_theta(long n);
}  // namespace observables

struct TableRow {
  std::string table;
  std::string row;
  double max_discrepancy = 0.0;
  double max_magnitude = 0.0;
  bool pass = false;
};

struct TableReport {
  std::size_t samples = 0;
  std::size_t resampled = 0;
  double tolerance = 1e-6;
  std::vector<TableRow> rows;
  [[nodiscard]] bool pass() const;
};

/// Checks every theta/gamma row, the Gamma brackets and every case of the amplitude table
/// against spin_bracket_numeric at n_samples Gibbs configurations.
TableReport verify_bracket_tables(std::size_t n_samples, RngStream& rng, double beta = 1.0,
                                  double tolerance = 1e-6);

/// FNV-1a digest of both generator tables, as 16 hex digits.
std::string table_hash();

}  // namespace lh::brackets
