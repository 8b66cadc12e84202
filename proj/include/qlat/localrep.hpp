#pragma once

// Local (primitive) representability of one lattice by another over Z_p.

#include <optional>
#include <vector>

#include "qlat/lattice.hpp"

namespace qlat {

struct LocalCertificate {
  Int p;
  int e = 0;                         ///< precision at which the search stopped
  std::optional<IntMatrix> witness;  ///< n x m, entries in [0, p^e)
  bool verdict = false;
  bool liftable = false;  ///< witness passes the Hensel margin 2*kappa + 1 <= e
  int kappa = -1;         ///< ord_p of the best maximal Jacobian minor at the witness
};

/// Number of n x m matrices T over Z/p^e with T^T E_L T = E_M mod p^e.
Int count_solutions_mod(const QuadLattice& m, const QuadLattice& l, const Int& p, int e,
                        std::uint64_t cap = default_caps().modp);

/// Precision used before escalation: ord_p(4 detE_L detE_M) + 3.
int base_precision(const QuadLattice& m, const QuadLattice& l, const Int& p);

/// Decides whether some primitive T over Z_p has Q_L(T x) = Q_M(x).
/// Throws ResourceError past the node cap and PrecisionError when the search
/// is still undecided after escalating the precision.
LocalCertificate is_locally_primitively_representable(const QuadLattice& m, const QuadLattice& l, const Int& p,
                                                      const Caps& caps = default_caps());

struct LocalReport {
  bool verdict = false;
  std::vector<LocalCertificate> certificates;  ///< primes dividing 2 detE_L detE_M, increasing
};

LocalReport locally_primitively_representable_everywhere(const QuadLattice& m, const QuadLattice& l,
                                                         const Caps& caps = default_caps());

/// Not necessarily primitive variant for rank(M) = 1: <t> is represented over
/// Z_p iff some <t / p^(2j)> is represented primitively.
LocalCertificate is_locally_representable(const QuadLattice& m, const QuadLattice& l, const Int& p,
                                          const Caps& caps = default_caps());

LocalReport locally_representable_everywhere(const QuadLattice& m, const QuadLattice& l,
                                             const Caps& caps = default_caps());

/// Primes at which the local test is actually run.
std::vector<Int> relevant_primes(const QuadLattice& m, const QuadLattice& l);

/// Re-checks a witness: congruence of every Q-coefficient mod p^e and rank m mod p.
bool check_local_witness(const QuadLattice& m, const QuadLattice& l, const Int& p, int e, const IntMatrix& t);

/// ord_p of the gcd of the maximal minors of a mod p^e (sum of the p-adic
/// elementary divisor valuations); returns e when the rank drops mod p^e.
int maximal_minor_valuation(const IntMatrix& a, const Int& p, int e);

}  // namespace qlat
