#include "qlat/corpus.hpp"

#include <random>

#include "qlat/localrep.hpp"

namespace qlat {

namespace {

// portable draw; std distributions differ between standard libraries
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

QuadLattice next_lattice(std::mt19937_64& rng, std::size_t n, const Int& det_bound) {
  // largest d with (2d)^n <= 2 det_bound, at least 1
  std::int64_t dmax = 1;
  while (pow(Int(2 * (dmax + 1)), static_cast<unsigned long>(n)) <= 2 * det_bound) ++dmax;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    IntMatrix e(n, n, Int(0));
    std::vector<std::int64_t> a(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = draw(rng, 1, dmax);
      e(i, i) = Int(2 * a[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::int64_t b = std::min(a[i], a[j]);
        e(i, j) = e(j, i) = Int(static_cast<long>(draw(rng, -b, b)));
      }
    try {
      QuadLattice l = QuadLattice::from_gram2(e);
      if (discriminant(l).det_e > det_bound) continue;
      return minkowski_reduce(l).lattice;
    } catch (const PreconditionError&) {
    }
  }
  throw PreconditionError("det_bound too small to generate lattices of rank " + std::to_string(n));
}

}  // namespace

std::vector<QuadLattice> corpus_lattices(std::uint64_t seed, std::size_t n, const Int& det_bound, std::size_t count) {
  if (n == 0) throw PreconditionError("rank must be positive");
  std::mt19937_64 rng(seed);
  std::vector<QuadLattice> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(next_lattice(rng, n, det_bound));
  return out;
}

std::vector<CorpusInstance> gen_corpus(std::uint64_t seed, std::size_t m, std::size_t n, const Int& det_bound,
                                       std::size_t count, const Caps& caps) {
  if (m == 0 || n < m + 3) throw PreconditionError("corpus needs n >= m + 3 and m >= 1");
  std::vector<CorpusInstance> out;
  if (count == 0) return out;
  auto ls = corpus_lattices(seed, n, det_bound, count);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (const auto& l : ls) {
    const std::int64_t d = to_i64(discriminant(l).det_e);
    QuadLattice mm;
    for (;;) {
      IntMatrix e(m, m, Int(0));
      for (std::size_t i = 0; i < m; ++i) e(i, i) = Int(2 * draw(rng, d, 2 * d));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) e(i, j) = e(j, i) = Int(static_cast<long>(draw(rng, -d / 2, d / 2)));
      try {
        mm = QuadLattice::from_gram2(e);
        break;
      } catch (const PreconditionError&) {
      }
    }
    CorpusInstance inst{mm, l, locally_primitively_representable_everywhere(mm, l, caps).verdict};
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace qlat
