#pragma once

// Bounded-precision p-adic arithmetic: residues modulo p^e, Smith form over
// Z/p^e, Newton lifting at a smooth point, a Greenberg-style lifter for
// singular systems, and the k-generation minor scan for products of
// exponentials of nilpotent matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlat/arith.hpp"

namespace qlat {

/// v_p of a residue. A zero residue at precision e only tells v >= e, which
/// is reported with exact = false.
struct PadicValuation {
  int v = 0;
  bool exact = true;
  std::string str() const { return exact ? std::to_string(v) : ">=" + std::to_string(v); }
  friend bool operator==(const PadicValuation&, const PadicValuation&) = default;
};

class PadicScalar {
 public:
  PadicScalar(Int p, int e, const Int& value);

  const Int& p() const { return p_; }
  int e() const { return e_; }
  const Int& residue() const { return r_; }
  Int modulus() const { return pow(p_, static_cast<unsigned long>(e_)); }

  PadicValuation valuation() const;
  bool is_unit() const { return r_ % p_ != 0; }
  PadicScalar inverse() const;  ///< units only

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  PadicScalar operator-() const;
  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.p_ == b.p_ && a.e_ == b.e_ && a.r_ == b.r_;
  }

 private:
  Int p_;
  int e_;
  Int r_;
};

/// Matrix of residues modulo p^e, stored reduced in [0, p^e).
class PadicMatrix {
 public:
  PadicMatrix(Int p, int e, const IntMatrix& a);
  static PadicMatrix identity(Int p, int e, std::size_t n);

  const Int& p() const { return p_; }
  int e() const { return e_; }
  Int modulus() const { return pow(p_, static_cast<unsigned long>(e_)); }
  std::size_t rows() const { return a_.rows(); }
  std::size_t cols() const { return a_.cols(); }
  const IntMatrix& residues() const { return a_; }
  PadicScalar at(std::size_t i, std::size_t j) const { return PadicScalar(p_, e_, a_(i, j)); }

  friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);
  friend bool operator==(const PadicMatrix& a, const PadicMatrix& b) {
    return a.p_ == b.p_ && a.e_ == b.e_ && a.a_ == b.a_;
  }

 private:
  Int p_;
  int e_;
  IntMatrix a_;
};

struct PadicSmith {
  PadicMatrix u, d, v;                    ///< u * a * v = d mod p^e
  std::vector<PadicValuation> valuations;  ///< of the min(rows, cols) diagonal entries
};

/// Smith form over Z/p^e. Diagonal residues are exact powers p^k (or 0),
/// nondecreasing in k.
PadicSmith smith_normal_form(const PadicMatrix& a);

// ---- polynomial systems -------------------------------------------------

struct Monomial {
  Int coef;
  std::vector<int> exps;
};

/// Sparse integer polynomial in `vars` variables. Terms are kept combined and
/// sorted by exponent vector with zero coefficients dropped.
class Poly {
 public:
  Poly() = default;
  Poly(std::size_t vars, std::vector<Monomial> terms);
  static Poly variable(std::size_t vars, std::size_t i);
  static Poly constant(std::size_t vars, const Int& c);

  std::size_t vars() const { return vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int degree() const;
  Int height() const;

  Int eval(const IntVector& x) const;
  Poly derivative(std::size_t i) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);

 private:
  std::size_t vars_ = 0;
  std::vector<Monomial> terms_;
};

/// f_1..f_r in m variables; degree and height are recomputed from the terms.
struct PolySystem {
  std::size_t vars = 0;
  std::vector<Poly> polys;

  PolySystem(std::size_t vars, std::vector<Poly> polys);
  int degree() const;
  Int height() const;
  IntVector eval(const IntVector& x) const;
  IntMatrix jacobian(const IntVector& x) const;  ///< r x m
};

/// Smallest v_p over the values, capped at `cap` (also returned for all-zero).
int min_valuation(const IntVector& values, const Int& p, int cap);

/// Newton iteration at a point where the Jacobian (r = m) has valuation k and
/// f(x0) = 0 mod p^{2k+1}. Returns x = x0 + d with 0 <= d_i < p^{max(target_e, k+1)},
/// f(x) = 0 mod p^target_e and d = 0 mod p^{k+1}. MarginError otherwise.
IntVector newton_lift(const PolySystem& f, const IntVector& x0, const Int& p, int target_e);

/// Jacobian valuation k at x0 as used by newton_lift (MarginError if singular).
int newton_margin(const PolySystem& f, const IntVector& x0, const Int& p);

struct GreenbergResult {
  std::optional<IntVector> w;  ///< residues mod p^working_e
  int working_e = 0;           ///< 3k
  int agreement = 0;           ///< largest c with w' = w mod p^c (capped at working_e)
  std::optional<Rat> exponent; ///< achieved A = k / agreement
  std::string method;          ///< "unchanged", "newton" or "search"
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;  ///< true when nothing was found because the budget ran out
};

/// Lift an approximate zero w (f(w) = 0 mod p^k) to a zero modulo p^{3k}
/// staying as close to w as the search allows. An empty `w` in the result is
/// a budget statement unless budget_exhausted is false, in which case no zero
/// mod p^{3k} agrees with w mod p.
GreenbergResult greenberg_lift(const PolySystem& f, const IntVector& w, const Int& p, int k,
                               std::uint64_t budget = 200000);

// ---- k-generation -------------------------------------------------------

/// exp(t N) for a nilpotent N, exact rational entries.
RatMatrix nilpotent_exp(const IntMatrix& n, const Rat& t = 1);

struct KGeneration {
  std::optional<int> k;  ///< smallest v_p of an m_dim-minor found
  IntVector witness;     ///< the t achieving it
  std::uint64_t points = 0;
};

/// Scans t over a deterministic grid of small integer points (by height, at
/// most `budget` points) for the derivative of t -> exp(t_1 v_1)...exp(t_s v_s)
/// having an m_dim-minor of small valuation.
KGeneration k_generation_check(const std::vector<IntMatrix>& nilpotents, const Int& p, std::size_t m_dim,
                               std::uint64_t budget);

}  // namespace qlat
