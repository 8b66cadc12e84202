#pragma once

// Exact linear algebra over Z and Q: determinants, Smith and Hermite forms,
// saturated kernels. Shared by lattice-core, represent and heights.

#include <optional>

#include "qlat/arith.hpp"

namespace qlat::zla {

/// Exact determinant (fraction-free Bareiss elimination).
Int det(const IntMatrix& a);
Rat det(const RatMatrix& a);

/// Rank over Q.
std::size_t rank(const IntMatrix& a);

/// Inverse over Q; throws PreconditionError when singular.
RatMatrix inverse(const RatMatrix& a);
RatMatrix to_rat(const IntMatrix& a);

struct SmithForm {
  IntMatrix u;  ///< rows x rows, unimodular
  IntMatrix d;  ///< rows x cols, diagonal, d_1 | d_2 | ..., non-negative
  IntMatrix v;  ///< cols x cols, unimodular
  std::size_t rank = 0;
  std::vector<Int> invariant_factors() const;  ///< the first `rank` diagonal entries
};

/// U * A * V = D with D in Smith normal form.
SmithForm smith(const IntMatrix& a);

/// Column Hermite basis of the Z-span of the columns of `gens`: returns an
/// n x r matrix whose columns are a basis (r = rank).
IntMatrix column_basis(const IntMatrix& gens);

/// Saturated basis (as columns) of {x in Z^cols : A x = 0}.
IntMatrix kernel(const IntMatrix& a);

/// True iff the columns span a saturated sublattice of rank = cols, i.e. all
/// invariant factors are 1.
bool is_primitive(const IntMatrix& t);

/// Unimodular matrix whose first column is the primitive vector `x`.
IntMatrix complete_to_unimodular(const IntVector& x);

/// Solves U^{-1} for unimodular U exactly.
IntMatrix unimodular_inverse(const IntMatrix& u);

}  // namespace qlat::zla
