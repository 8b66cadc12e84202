#pragma once

// Genus enumeration by Kneser neighbors, genus membership through the
// discriminant quadratic form, and the spin-genus partition.

#include <vector>

#include "qlat/lattice.hpp"

namespace qlat {

/// Discriminant form of the even lattice (Z^n, E): generators of E^{-1}Z^n / Z^n
/// with their orders, the bilinear values b(g_i, g_j) mod 1 off the diagonal and
/// q(g_i) = b(g_i, g_i) mod 2 on the diagonal.
struct DiscriminantForm {
  std::vector<Int> orders;
  RatMatrix gram;
};

DiscriminantForm discriminant_form(const QuadLattice& l);

/// L1 (x) Z_p and L2 (x) Z_p are isometric. Requires equal rank and det(E).
bool locally_isometric(const QuadLattice& a, const QuadLattice& b, const Int& p);

/// Equal rank and determinant, and isometric at every prime dividing 2 det(E).
bool same_genus(const QuadLattice& a, const QuadLattice& b);

/// Every p-neighbor of l (one per isotropic line mod p), Minkowski reduced,
/// without deduplication.
std::vector<QuadLattice> neighbor_lattices(const QuadLattice& l, const Int& p);

/// p-neighbors of l, reduced and deduplicated up to isometry. p odd, p not dividing det(E).
std::vector<QuadLattice> neighbors(const QuadLattice& l, const Int& p);

/// Smallest odd primes not dividing det(E), increasing.
std::vector<Int> admissible_primes(const QuadLattice& l, std::size_t count);

struct GenusClass {
  QuadLattice lattice;  ///< Minkowski-reduced representative
  Int aut_order;
  Rat weight;           ///< 1 / #Aut
  int block = -1;       ///< spin block index, -1 until spin_partition
};

struct NeighborEdge {
  std::size_t from, to;
  std::size_t prime;  ///< index into GenusPartition::primes
};

struct GenusPartition {
  QuadLattice base;
  std::vector<GenusClass> classes;  ///< ordered by (minimum, reduced Gram)
  std::size_t base_class = 0;
  Rat omega_gen;
  std::vector<Int> primes;          ///< neighbor primes used for the closure
  std::vector<NeighborEdge> edges;  ///< neighbor graph, one edge per (class, prime, neighbor class)
  std::vector<std::vector<std::size_t>> spin_blocks;  ///< empty until spin_partition
  std::vector<Rat> omega_spn;
};

GenusPartition genus_classes(const QuadLattice& l, const Caps& caps = default_caps());

/// Fills spin_blocks / omega_spn from the neighbor graph. Rank >= 3.
GenusPartition spin_partition(GenusPartition g);

/// Index of the class isometric to l, or classes.size() if none.
std::size_t find_class(const GenusPartition& g, const QuadLattice& l);

}  // namespace qlat
