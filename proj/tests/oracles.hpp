#pragma once

// Brute-force oracles for the genus tests. Kept apart from the library code
// paths: reduced forms are enumerated directly, local equivalence uses Jordan
// invariants at odd p and value counts modulo powers of two at p = 2.

#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "qlat/lattice.hpp"

namespace qlat::oracle {

using I64 = std::int64_t;
using I128 = __int128;

inline I128 det_small(std::vector<std::vector<I128>> a) {
  const std::size_t n = a.size();
  I128 sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return n == 0 ? 1 : sign * a[n - 1][n - 1];
}

inline I128 leading_det(const std::vector<std::vector<I64>>& e, std::size_t k) {
  std::vector<std::vector<I128>> a(k, std::vector<I128>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = e[i][j];
  return det_small(a);
}

/// Every doubled Gram matrix with det = d_e satisfying: even increasing
/// diagonal, 2|E_ij| <= E_ii for i < j, E_1j >= 0, positive definite and the
/// Minkowski product bound prod E_ii <= lambda_n det E. Each class has a
/// Minkowski-reduced member, and those satisfy all of these.
inline std::vector<IntMatrix> reduced_forms(std::size_t n, I64 d_e) {
  static const std::array<std::pair<I64, I64>, 6> lambda{{{1, 1}, {1, 1}, {4, 3}, {2, 1}, {4, 1}, {8, 1}}};
  if (n < 1 || n > 5) throw PreconditionError("oracle supports ranks 1..5");
  const I128 bound_num = static_cast<I128>(lambda[n].first) * d_e;
  const I128 bound_den = lambda[n].second;
  std::vector<std::vector<I64>> e(n, std::vector<I64>(n, 0));
  std::vector<IntMatrix> out;

  auto emit = [&] {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = Int(static_cast<long>(e[i][j]));
    out.push_back(m);
  };

  // off-diagonal entries of column k, then continue
  auto rec = [&](auto&& self, std::size_t k, I128 prod) -> void {
    if (k == n) return;
    const bool last = k + 1 == n;
    I64 lo = k == 0 ? 2 : e[k - 1][k - 1];
    auto offdiag = [&](auto&& inner, std::size_t i) -> void {
      if (i == k) {
        if (last) {
          e[k][k] = 0;
          I128 d0 = leading_det(e, n);
          I128 lead = leading_det(e, n - 1);
          I128 num = static_cast<I128>(d_e) - d0;
          if (lead <= 0 || num <= 0 || num % lead != 0) return;
          I128 ekk = num / lead;
          if (ekk % 2 != 0 || ekk < lo) return;
          if (prod * ekk * bound_den > bound_num) return;
          e[k][k] = static_cast<I64>(ekk);
          emit();
          e[k][k] = 0;
        } else {
          if (leading_det(e, k + 1) <= 0) return;
          self(self, k + 1, prod * e[k][k]);
        }
        return;
      }
      const I64 r = e[i][i] / 2;
      for (I64 v = i == 0 ? 0 : -r; v <= r; ++v) {
        e[i][k] = e[k][i] = v;
        inner(inner, i + 1);
      }
      e[i][k] = e[k][i] = 0;
    };
    if (last) {
      offdiag(offdiag, 0);
      return;
    }
    const std::size_t rest = n - k;
    for (I64 d = lo;; d += 2) {
      I128 p = prod;
      for (std::size_t t = 0; t < rest; ++t) p *= d;
      if (p * bound_den > bound_num) break;
      e[k][k] = d;
      offdiag(offdiag, 0);
    }
    e[k][k] = 0;
  };
  if (n == 1) {
    if (d_e % 2 == 0 && d_e > 0) {
      e[0][0] = d_e;
      emit();
    }
    return out;
  }
  rec(rec, 0, 1);
  return out;
}

/// Odd p: (scale exponent, dimension, Legendre symbol of the unit determinant)
/// for each Jordan constituent of E over Z_p.
inline std::vector<std::tuple<int, int, int>> odd_jordan(const IntMatrix& e, long p) {
  const std::size_t n = e.rows();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(e(i, j));
  std::vector<Rat> diag;
  std::vector<bool> done(n, false);
  const Int P(p);
  for (std::size_t step = 0; step < n; ++step) {
    int best = 1 << 30;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (done[j] || a[i][j] == 0) continue;
        int v = valuation(a[i][j], P);
        if (v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi != bj) {
      // e_i <- e_i + e_j makes the diagonal carry the minimal valuation
      for (std::size_t k = 0; k < n; ++k)
        if (!done[k]) a[bi][k] += a[bj][k];
      for (std::size_t k = 0; k < n; ++k)
        if (!done[k]) a[k][bi] += a[k][bj];
    }
    const std::size_t piv = bi;
    const Rat d = a[piv][piv];
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || i == piv) continue;
      Rat f = a[i][piv] / d;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) a[i][j] -= f * a[piv][j];
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!done[j] && j != piv) a[piv][j] = a[j][piv] = 0;
    done[piv] = true;
    diag.push_back(d);
  }
  std::map<int, std::pair<int, int>> by_scale;
  for (const Rat& d : diag) {
    int v = valuation(d, P);
    Rat u = d;
    if (v > 0) u /= Rat(pow(P, static_cast<unsigned long>(v)));
    if (v < 0) u *= Rat(pow(P, static_cast<unsigned long>(-v)));
    Int num = mod(Int(u.get_num()) * Int(u.get_den()), P);
    int leg = mpz_legendre(num.get_mpz_t(), P.get_mpz_t());
    auto& slot = by_scale[v];
    if (slot.first == 0) slot.second = 1;
    slot.first += 1;
    slot.second *= leg;
  }
  std::vector<std::tuple<int, int, int>> out;
  for (const auto& [v, ds] : by_scale) out.emplace_back(v, ds.first, ds.second);
  return out;
}

/// Number of x mod 2^r with Q(x) = a mod 2^r, for every a. Computed on a
/// 2-adic splitting of E into 1x1 and 2x2 blocks, convolved block by block.
inline std::vector<I64> two_adic_counts(const IntMatrix& e, int r) {
  const std::size_t n = e.rows();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(e(i, j));
  const Int two(2);
  std::vector<bool> done(n, false);
  std::vector<std::vector<std::vector<Rat>>> blocks;
  for (;;) {
    int best = 1 << 30;
    std::size_t bi = n, bj = n;
    bool diag_hit = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (done[j] || a[i][j] == 0) continue;
        int v = valuation(a[i][j], two);
        if (v < best || (v == best && i == j && !diag_hit)) {
          best = v;
          bi = i;
          bj = j;
          diag_hit = i == j;
        }
      }
    }
    if (bi == n) break;
    std::vector<std::size_t> piv = bi == bj ? std::vector<std::size_t>{bi} : std::vector<std::size_t>{bi, bj};
    // inverse of the pivot block
    std::vector<std::vector<Rat>> inv;
    if (piv.size() == 1) {
      inv = {{1 / a[bi][bi]}};
    } else {
      Rat det = a[bi][bi] * a[bj][bj] - a[bi][bj] * a[bj][bi];
      inv = {{a[bj][bj] / det, -a[bi][bj] / det}, {-a[bj][bi] / det, a[bi][bi] / det}};
    }
    std::vector<std::vector<Rat>> blk(piv.size(), std::vector<Rat>(piv.size()));
    for (std::size_t s = 0; s < piv.size(); ++s)
      for (std::size_t t = 0; t < piv.size(); ++t) blk[s][t] = a[piv[s]][piv[t]];
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || i == bi || i == bj) continue;
      // row i minus (a[i][piv] inv) a[piv][*]
      std::vector<Rat> f(piv.size(), Rat(0));
      for (std::size_t s = 0; s < piv.size(); ++s)
        for (std::size_t t = 0; t < piv.size(); ++t) f[s] += a[i][piv[t]] * inv[t][s];
      for (std::size_t j = 0; j < n; ++j) {
        if (done[j]) continue;
        for (std::size_t s = 0; s < piv.size(); ++s) a[i][j] -= f[s] * a[piv[s]][j];
      }
    }
    for (std::size_t s : piv) {
      done[s] = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == s) continue;
        if (!done[j]) a[s][j] = a[j][s] = 0;
      }
    }
    blocks.push_back(blk);
  }

  const I64 mod_r = I64(1) << r;
  const Int big = Int(2) * Int(static_cast<long>(mod_r));
  auto rep = [&](const Rat& x) -> I64 {
    Int den_inv = inverse_mod(Int(x.get_den()), big);
    return mod(Int(x.get_num()) * den_inv, big).get_si();
  };
  static std::map<std::tuple<int, I64, I64, I64>, std::vector<I64>> cache;
  std::vector<I64> total(static_cast<std::size_t>(mod_r), 0);
  total[0] = 1;
  for (const auto& blk : blocks) {
    const std::size_t k = blk.size();
    std::vector<std::vector<I64>> m(k, std::vector<I64>(k));
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t t = 0; t < k; ++t) m[s][t] = rep(blk[s][t]);
    auto key = k == 1 ? std::make_tuple(r, m[0][0], I64(-1), I64(-1)) : std::make_tuple(r, m[0][0], m[0][1], m[1][1]);
    auto hit = cache.find(key);
    if (hit == cache.end()) {
    std::vector<I64> local(static_cast<std::size_t>(mod_r), 0);
    if (k == 1) {
      for (I64 x = 0; x < mod_r; ++x) {
        I128 v = static_cast<I128>(m[0][0]) * x * x / 2;
        local[static_cast<std::size_t>(v % mod_r)]++;
      }
    } else {
      for (I64 x = 0; x < mod_r; ++x)
        for (I64 y = 0; y < mod_r; ++y) {
          I128 v = (static_cast<I128>(m[0][0]) * x * x + static_cast<I128>(m[1][1]) * y * y) / 2 +
                   static_cast<I128>(m[0][1]) * x * y;
          local[static_cast<std::size_t>(v % mod_r)]++;
        }
    }
    hit = cache.emplace(key, std::move(local)).first;
    }
    const std::vector<I64>& local = hit->second;
    std::vector<I64> next(static_cast<std::size_t>(mod_r), 0);
    for (I64 u = 0; u < mod_r; ++u)
      if (total[u])
        for (I64 w = 0; w < mod_r; ++w)
          if (local[w]) next[static_cast<std::size_t>((u + w) % mod_r)] += total[u] * local[w];
    total = std::move(next);
  }
  return total;
}

/// Same local invariants as the target at every prime dividing 2 det E
/// (determinants are assumed equal). Odd primes first, they are cheaper.
inline bool same_local_invariants(const IntMatrix& e, const IntMatrix& target) {
  const Int d = discriminant(QuadLattice::from_gram2(target)).det_e;
  for (const Int& p : prime_divisors(2 * d))
    if (p != 2 && odd_jordan(e, p.get_si()) != odd_jordan(target, p.get_si())) return false;
  const int r = valuation(d, Int(2)) + 3;
  return two_adic_counts(e, r) == two_adic_counts(target, r);
}

/// Isometry classes of the genus of l: reduced forms of equal det, filtered
/// by the local key, bucketed by isometry. Returns one member per class.
inline std::vector<QuadLattice> genus(const QuadLattice& l) {
  const I64 d = to_i64(discriminant(l).det_e);
  std::vector<QuadLattice> classes;
  for (const IntMatrix& e : reduced_forms(l.rank(), d)) {
    if (!same_local_invariants(e, l.gram2())) continue;
    QuadLattice c = QuadLattice::from_gram2(e);
    bool seen = false;
    for (const QuadLattice& k : classes)
      if (isometric(c, k)) {
        seen = true;
        break;
      }
    if (!seen) classes.push_back(c);
  }
  return classes;
}

}  // namespace qlat::oracle
