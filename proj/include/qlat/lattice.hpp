#pragma once

// Positive definite integral quadratic lattices: invariants, short vectors,
// Minkowski reduction, isometry testing and automorphism groups.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "qlat/arith.hpp"

namespace qlat {

/// Coordinates of a lattice vector in the lattice basis. Enumerated vectors
/// are short, so 64-bit coordinates suffice; overflow is checked.
using Coord = std::int64_t;
using ZVec = std::vector<Coord>;

/// Caps guarding the enumeration kernels. Defaults can be overridden from the
/// environment (QLAT_CAP_SHORT_VECTORS, QLAT_CAP_CLASSES, QLAT_CAP_MODP,
/// QLAT_CAP_NODES).
struct Caps {
  std::uint64_t short_vectors = 20'000'000;
  std::uint64_t classes = 500;
  std::uint64_t modp = 50'000'000;  ///< bound on p^(e*n*m) for brute-force counting
  std::uint64_t nodes = 20'000'000;  ///< search nodes for backtracking / lifting

  static Caps from_env();
};

const Caps& default_caps();
void set_default_caps(const Caps& caps);

/// Q(x) = sum_{i<=j} m_ij x_i x_j, stored canonically as the doubled Gram
/// matrix E (E_ii = 2 m_ii, E_ij = m_ij), so that Q(x) = x^T E x / 2.
class QuadLattice {
 public:
  QuadLattice() = default;

  /// Upper-triangular coefficient matrix (entries below the diagonal ignored).
  static QuadLattice from_coeffs(const IntMatrix& upper);
  /// Doubled Gram matrix E. Must be symmetric, even on the diagonal, positive definite.
  static QuadLattice from_gram2(const IntMatrix& e);
  /// Gram matrix B of the bilinear form with B(x,x) = Q(x); E = 2B.
  static QuadLattice from_gram(const IntMatrix& b);
  /// Diagonal form a_1 x_1^2 + ... + a_n x_n^2.
  static QuadLattice diagonal(const std::vector<long>& a);
  static QuadLattice identity(std::size_t n);

  std::size_t rank() const { return e_.rows(); }
  const IntMatrix& gram2() const { return e_; }
  IntMatrix coeffs() const;

  Int value(const IntVector& x) const;
  Int value(const ZVec& x) const;
  /// x^T E y.
  Int bilinear(const ZVec& x, const ZVec& y) const;

  /// U^T E U for an integer matrix U with rank() rows.
  IntMatrix pullback(const IntMatrix& u) const;

  friend bool operator==(const QuadLattice& a, const QuadLattice& b) { return a.e_ == b.e_; }
  friend bool operator!=(const QuadLattice& a, const QuadLattice& b) { return !(a == b); }
  friend bool operator<(const QuadLattice& a, const QuadLattice& b) { return a.e_ < b.e_; }

 private:
  explicit QuadLattice(IntMatrix e) : e_(std::move(e)) {}
  static void validate(const IntMatrix& e);
  IntMatrix e_;
};

/// Base-change witness with det = +-1.
class UnimodularChange {
 public:
  UnimodularChange() = default;
  explicit UnimodularChange(IntMatrix u);
  static UnimodularChange identity(std::size_t n) { return UnimodularChange(IntMatrix::identity(n)); }

  const IntMatrix& matrix() const { return u_; }
  int det() const { return det_; }
  UnimodularChange inverse() const;
  QuadLattice apply(const QuadLattice& l) const;  ///< lattice with Gram U^T E U

  friend UnimodularChange operator*(const UnimodularChange& a, const UnimodularChange& b) {
    return UnimodularChange(a.u_ * b.u_);
  }
  friend bool operator==(const UnimodularChange& a, const UnimodularChange& b) { return a.u_ == b.u_; }
  friend bool operator<(const UnimodularChange& a, const UnimodularChange& b) { return a.u_ < b.u_; }

 private:
  IntMatrix u_;
  int det_ = 1;
};

struct Discriminant {
  Int det_e;  ///< det(E), canonical integer invariant
  Rat disc;   ///< det(E/2) = det(E) / 2^n
};

Discriminant discriminant(const QuadLattice& l);

struct ShortVector {
  ZVec x;
  Int norm;  ///< Q(x)
};

/// All x with 0 < Q(x) <= bound, one per +-pair (first nonzero coordinate
/// positive), sorted by Q(x) then lexicographically.
std::vector<ShortVector> short_vectors(const QuadLattice& l, const Int& bound,
                                       std::uint64_t cap = default_caps().short_vectors);

/// Visits every x with 0 < Q(x) <= bound once per +-pair (the sign with the
/// last nonzero coordinate positive), in no particular order. The callback
/// receives Q(x). Throws ResourceError after `cap` vectors.
void for_each_short_vector(const QuadLattice& l, std::int64_t bound,
                           const std::function<void(const ZVec&, std::int64_t)>& visit,
                           std::uint64_t cap = default_caps().short_vectors);

Int minimum(const QuadLattice& l);

struct Reduced {
  QuadLattice lattice;
  UnimodularChange change;  ///< lattice.gram2() = U^T E U
};

/// Minkowski reduction: Q(v_1) <= ... <= Q(v_n), each v_i of least norm among
/// vectors extending v_1..v_{i-1} to a basis; consequently |E_ij| <= Q(v_i)
/// for i < j. Signs are normalised so that E_{i,i+1} >= 0.
Reduced minkowski_reduce(const QuadLattice& l);

/// True iff the two displayed reduction inequalities hold.
bool satisfies_reduction_conditions(const QuadLattice& l);

std::optional<UnimodularChange> isometric(const QuadLattice& a, const QuadLattice& b);

struct AutomorphismGroup {
  std::vector<UnimodularChange> generators;
  Int order;
};

AutomorphismGroup automorphisms(const QuadLattice& l);

/// Every element of Aut(l) (in the basis of l), sorted row-major.
std::vector<UnimodularChange> automorphism_elements(const QuadLattice& l);

/// Cheap isometry invariants used to bucket lattices before the full test:
/// rank, det(E), counts of vectors of each norm up to `bound`.
std::vector<Int> theta_prefix(const QuadLattice& l, std::int64_t bound);

}  // namespace qlat
