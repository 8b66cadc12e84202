#pragma once

// Seeded instance supply for the local-global experiments.

#include <cstdint>
#include <vector>

#include "qlat/lattice.hpp"

namespace qlat {

struct CorpusInstance {
  QuadLattice m, l;
  bool locally_ok = false;  ///< M locally primitively represented by L everywhere
};

/// `count` pairs (M, L) from a mt19937_64 stream seeded with `seed`. L is a
/// Minkowski-reduced rank-n lattice with detE_L <= det_bound, M has rank m and
/// diagonal entries Q_M(e_i) drawn from [detE_L, 2 detE_L]. Needs n >= m + 3.
std::vector<CorpusInstance> gen_corpus(std::uint64_t seed, std::size_t m, std::size_t n, const Int& det_bound,
                                       std::size_t count, const Caps& caps = default_caps());

/// Only the L part of the stream above (no local test), for genus experiments.
std::vector<QuadLattice> corpus_lattices(std::uint64_t seed, std::size_t n, const Int& det_bound, std::size_t count);

}  // namespace qlat
