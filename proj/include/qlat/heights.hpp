#pragma once

// Contents of rational vectors, saturated integral kernels, the Lie algebra of
// the orthogonal group of a lattice and of pointwise stabilizers, and heights
// of those subalgebras via primitive wedge vectors.

#include <string>
#include <vector>

#include "qlat/lattice.hpp"

namespace qlat {

/// A height or content. The real value is sqrt(squared); squared is exact.
struct HeightReport {
  Rat squared;
  std::string decimal;  ///< sqrt(squared) to 12 digits
  /// content only: the product of the finite-place norms and the squared
  /// Euclidean norm of the input; finite^2 * arch_sq = squared.
  Rat finite_part = 1;
  Rat arch_sq = 0;
  IntVector primitive;  ///< content: the primitive integer vector on the line of w
};

HeightReport content(const RatVector& w);

struct KernelBasis {
  std::vector<IntVector> basis;  ///< LLL-reduced, sorted by Euclidean norm
  Rat product_height_sq;         ///< prod |v_i|^2
};

/// Saturated integral basis of ker(A) for a full-row-rank k x l matrix, k < l.
KernelBasis kernel_basis_integral(const IntMatrix& a);

struct LieBasis {
  std::vector<IntMatrix> basis;  ///< n x n matrices
  HeightReport height;           ///< of the primitive wedge of the basis
};

/// Saturated integral basis of {X : X E + E X^T = 0}, dimension n(n-1)/2.
LieBasis lie_so(const QuadLattice& q);

/// The part of lie_so(q) killing every column of w (n x r, independent
/// columns; r may be 0).
LieBasis stabilizer_height(const QuadLattice& q, const IntMatrix& w);

/// Squared Euclidean norm of the primitive wedge of the columns of b
/// (independent integer columns): det(B^T B) / (product of invariant factors)^2.
Rat wedge_height_sq(const IntMatrix& b);

}  // namespace qlat
