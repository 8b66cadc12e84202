#pragma once

// Shared helpers for the unit tests: deterministic random lattices and
// unimodular matrices, plus small brute-force oracles.

#include <cstdint>
#include <random>

#include "qlat/lattice.hpp"
#include "qlat/zlinalg.hpp"

namespace qlat::testing {

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Product of random elementary column operations and sign flips.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 6, int spread = 2) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  for (int s = 0; s < steps; ++s) {
    std::size_t i = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(n) - 1));
    std::size_t j = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(n) - 2));
    if (j >= i) ++j;
    Int q(static_cast<long>(draw(rng, -spread, spread)));
    for (std::size_t r = 0; r < n; ++r) u(r, j) += q * u(r, i);
    if (draw(rng, 0, 3) == 0)
      for (std::size_t r = 0; r < n; ++r) u(r, i) = -u(r, i);
  }
  return u;
}

/// Random positive definite lattice: small diagonally dominant Gram, then a
/// random unimodular change of basis.
inline QuadLattice random_lattice(std::mt19937_64& rng, std::size_t n, int diag_max = 6, bool scramble = true) {
  for (;;) {
    IntMatrix e(n, n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
      e(i, i) = 2 * Int(static_cast<long>(draw(rng, 1, diag_max)));
      for (std::size_t j = i + 1; j < n; ++j) e(i, j) = e(j, i) = Int(static_cast<long>(draw(rng, -1, 1)));
    }
    try {
      QuadLattice l = QuadLattice::from_gram2(e);
      if (!scramble) return l;
      return UnimodularChange(random_unimodular(rng, n)).apply(l);
    } catch (const PreconditionError&) {
    }
  }
}

/// Brute force: every x in the box |x_i| <= r with 0 < Q(x) <= bound, first
/// nonzero coordinate positive.
inline std::vector<std::pair<ZVec, Int>> box_vectors(const QuadLattice& l, Coord r, const Int& bound) {
  std::vector<std::pair<ZVec, Int>> out;
  const std::size_t n = l.rank();
  ZVec x(n, -r);
  for (;;) {
    bool zero = true, positive = false;
    for (Coord c : x)
      if (c != 0) {
        positive = c > 0;
        zero = false;
        break;
      }
    if (!zero && positive) {
      Int q = l.value(x);
      if (q <= bound) out.emplace_back(x, q);
    }
    std::size_t k = 0;
    while (k < n && x[k] == r) x[k++] = -r;
    if (k == n) break;
    ++x[k];
  }
  return out;
}

}  // namespace qlat::testing
