#include <doctest.h>

#include "qlat/localrep.hpp"
#include "qlat/zlinalg.hpp"
#include "support.hpp"

using namespace qlat;

namespace {

QuadLattice unary(long a) { return QuadLattice::diagonal({a}); }

// Primitive x mod p^e with Q(x) = t mod p^e, by direct enumeration.
long primitive_count(const QuadLattice& l, long t, long p, int e) {
  long q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  const std::size_t n = l.rank();
  ZVec x(n, 0);
  long count = 0;
  for (;;) {
    bool prim = false;
    for (Coord c : x) prim = prim || c % p != 0;
    if (prim) {
      Int v = l.value(x) - t;
      if (mod(v, Int(q)) == 0) ++count;
    }
    std::size_t a = 0;
    while (a < n && x[a] == q - 1) x[a++] = 0;
    if (a == n) break;
    ++x[a];
  }
  return count;
}

// Some primitive integral x with Q(x) = t in a small box.
bool global_primitive(const QuadLattice& l, long t) {
  for (const auto& s : short_vectors(l, Int(t))) {
    if (s.norm != t) continue;
    Int g = 0;
    for (Coord c : s.x) g = gcd(g, Int(static_cast<long>(c)));
    if (g == 1) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("count_solutions_mod examples") {
  CHECK(count_solutions_mod(unary(1), unary(1), 3, 1) == 2);
  CHECK(count_solutions_mod(unary(2), unary(1), 3, 1) == 0);
  CHECK_THROWS_AS(unary(0), PreconditionError);
  CHECK_THROWS_AS(count_solutions_mod(unary(1), QuadLattice::identity(4), 7, 3, 1000), ResourceError);
}

TEST_CASE("count_solutions_mod agrees with a direct count") {
  // x^2 + y^2 = 1 mod p has p - (-1|p) solutions; 2(x^2+y^2) = 2 mod p as E-congruence
  CHECK(count_solutions_mod(unary(1), QuadLattice::identity(2), 5, 1) == 4);
  CHECK(count_solutions_mod(unary(1), QuadLattice::identity(2), 7, 1) == 8);
  // E-congruence mod 4: 2(x^2 + y^2) = 2 mod 4 means x^2 + y^2 odd
  CHECK(count_solutions_mod(unary(1), QuadLattice::identity(2), 2, 2) == 8);
  // M = L rank 2: orthogonal group of x^2 + y^2 over Z/3 has order 8
  CHECK(count_solutions_mod(QuadLattice::identity(2), QuadLattice::identity(2), 3, 1) == 8);
}

TEST_CASE("maximal minor valuation") {
  IntMatrix a{{Int(2), Int(4)}, {Int(6), Int(8)}};
  // det = -8, entries gcd 2
  CHECK(maximal_minor_valuation(a, 2, 10) == 3);
  CHECK(maximal_minor_valuation(a, 2, 2) == 2);
  CHECK(maximal_minor_valuation(IntMatrix{{Int(3), Int(5), Int(9)}}, 3, 4) == 0);
  CHECK(maximal_minor_valuation(IntMatrix{{Int(9), Int(0)}}, 3, 4) == 2);
  CHECK(maximal_minor_valuation(IntMatrix{{Int(0), Int(0)}}, 3, 4) == 4);
}

TEST_CASE("local representability: fixed examples") {
  QuadLattice k = QuadLattice::diagonal({1, 1, 25, 25});
  auto c = is_locally_primitively_representable(unary(3), k, 2);
  CHECK(c.verdict);
  CHECK(c.liftable);
  REQUIRE(c.witness.has_value());
  CHECK(check_local_witness(unary(3), k, 2, c.e, *c.witness));

  auto c5 = is_locally_primitively_representable(unary(5), QuadLattice::identity(3), 5);
  CHECK(c5.verdict);
  REQUIRE(c5.witness.has_value());
  CHECK(*c5.witness == IntMatrix{{Int(0)}, {Int(1)}, {Int(2)}});

  QuadLattice l = QuadLattice::from_coeffs(IntMatrix{{Int(2), Int(1)}, {Int(0), Int(3)}});
  auto self = is_locally_primitively_representable(l, l, 2);
  CHECK(self.verdict);
  CHECK(*self.witness == IntMatrix::identity(2));

  CHECK(locally_primitively_representable_everywhere(unary(3), k).verdict);
  CHECK(locally_primitively_representable_everywhere(unary(1), QuadLattice::identity(4)).verdict);

  auto seven = locally_primitively_representable_everywhere(unary(7), QuadLattice::identity(3));
  CHECK_FALSE(seven.verdict);
  REQUIRE(seven.certificates.size() == 2);
  CHECK(seven.certificates[0].p == 2);
  CHECK_FALSE(seven.certificates[0].verdict);
  CHECK(seven.certificates[1].p == 7);
  CHECK(seven.certificates[1].verdict);
  CHECK(count_solutions_mod(unary(7), QuadLattice::identity(3), 2, 4) == 0);
}

TEST_CASE("primitive obstruction for four squares mod 8") {
  // A primitive sum of four squares is never 0 mod 8.
  QuadLattice k = QuadLattice::diagonal({1, 1, 25, 25});
  CHECK(primitive_count(k, 24, 2, 3) == 0);
  CHECK_FALSE(is_locally_primitively_representable(unary(24), k, 2).verdict);
  CHECK_FALSE(is_locally_primitively_representable(unary(48), k, 2).verdict);
  CHECK(is_locally_primitively_representable(unary(12), k, 2).verdict);
}

TEST_CASE("local verdicts agree with direct oracles") {
  std::mt19937_64 rng(41);
  int checked_false = 0, checked_true = 0;
  for (int trial = 0; trial < 25; ++trial) {
    QuadLattice l = qlat::testing::random_lattice(rng, 3 + trial % 2, 4, false);
    for (long t = 1; t <= 24; ++t) {
      QuadLattice m = unary(t);
      for (const Int& p : relevant_primes(m, l)) {
        if (p > 7) continue;
        auto c = is_locally_primitively_representable(m, l, p);
        if (c.verdict) {
          REQUIRE(c.witness.has_value());
          CHECK(check_local_witness(m, l, p, c.e, *c.witness));
          CHECK(2 * c.kappa + 1 <= c.e);
          ++checked_true;
        } else {
          // a dead search means no primitive solution at some small level
          bool empty = false;
          long pp = p.get_si();
          for (int e = 1; e <= 5 && !empty; ++e) {
            long q = 1;
            for (int i = 0; i < e * static_cast<int>(l.rank()); ++i) q *= pp;
            if (q > 200000) break;
            empty = primitive_count(l, t, pp, e) == 0;
          }
          CHECK(empty);
          CHECK_FALSE(global_primitive(l, t));
          ++checked_false;
        }
      }
      if (global_primitive(l, t)) CHECK(locally_primitively_representable_everywhere(m, l).verdict);
    }
  }
  CHECK(checked_false > 0);
  CHECK(checked_true > 0);
}

TEST_CASE("rank two targets") {
  QuadLattice i4 = QuadLattice::identity(4);
  QuadLattice m = QuadLattice::diagonal({1, 1});
  CHECK(locally_primitively_representable_everywhere(m, i4).verdict);
  QuadLattice m2 = QuadLattice::from_coeffs(IntMatrix{{Int(1), Int(1)}, {Int(0), Int(3)}});
  auto rep = locally_primitively_representable_everywhere(m2, i4);
  for (const auto& c : rep.certificates)
    if (c.verdict) CHECK(check_local_witness(m2, i4, c.p, c.e, *c.witness));
}

TEST_CASE("unramified primes are automatically fine") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    QuadLattice l = qlat::testing::random_lattice(rng, 4, 5);
    long t = qlat::testing::draw(rng, 1, 60);
    Int bad = 2 * discriminant(l).det_e * 2 * t;
    Int p = 3;
    int skipped = 0;
    while (skipped < 1 + trial % 3) {
      p = next_prime(p + 1);
      if (bad % p != 0) ++skipped;
    }
    CHECK(is_locally_primitively_representable(unary(t), l, p).verdict);
  }
}

TEST_CASE("non-primitive local representability in rank one") {
  QuadLattice k = QuadLattice::diagonal({1, 1, 25, 25});
  for (long kk = 0; kk <= 4; ++kk) CHECK(locally_representable_everywhere(unary(3L << kk), k).verdict);
  auto c = is_locally_representable(unary(48), k, 2);
  REQUIRE(c.witness.has_value());
  Int q = pow(Int(2), static_cast<unsigned long>(c.e));
  IntMatrix g = k.pullback(*c.witness);
  CHECK(mod(g(0, 0) / 2 - 48, q) == 0);
  // 7 * 4 is not a sum of three squares 2-adically either
  CHECK_FALSE(is_locally_representable(unary(28), QuadLattice::identity(3), 2).verdict);
  CHECK_THROWS_AS(is_locally_representable(QuadLattice::identity(2), k, 2), PreconditionError);
}

TEST_CASE("odd primes: verdicts against enumeration on p-heavy lattices") {
  std::mt19937_64 rng(47);
  int negatives = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const long p = trial % 2 ? 3 : 5;
    // diagonal blocks scaled by powers of p, then scrambled
    std::vector<long> diag;
    for (int i = 0; i < 3; ++i) {
      long u = qlat::testing::draw(rng, 1, p - 1);
      long s = qlat::testing::draw(rng, 0, 2);
      for (int j = 0; j < s; ++j) u *= p;
      diag.push_back(u);
    }
    QuadLattice l = QuadLattice::from_gram2(QuadLattice::diagonal(diag).pullback(qlat::testing::random_unimodular(rng, 3)));
    for (long t = 1; t <= 60; ++t) {
      auto c = is_locally_primitively_representable(unary(t), l, Int(p));
      if (c.verdict) {
        REQUIRE(c.witness.has_value());
        CHECK(check_local_witness(unary(t), l, Int(p), c.e, *c.witness));
        CHECK(2 * c.kappa + 1 <= c.e);
        continue;
      }
      ++negatives;
      bool empty = false;
      for (int e = 1; e <= 4 && !empty; ++e) empty = primitive_count(l, t, p, e) == 0;
      CHECK(empty);
    }
  }
  CHECK(negatives > 0);
}

TEST_CASE("odd primes: fallback witness when the search budget is tiny") {
  std::mt19937_64 rng(53);
  Caps tight = default_caps();
  tight.nodes = 1;
  int seen = 0;
  for (int trial = 0; trial < 20; ++trial) {
    QuadLattice l = qlat::testing::random_lattice(rng, 4, 9);
    for (long t = 1; t <= 30; ++t)
      for (const Int& p : relevant_primes(unary(t), l)) {
        if (p == 2) continue;
        auto c = is_locally_primitively_representable(unary(t), l, p, tight);
        CHECK(c.verdict == is_locally_primitively_representable(unary(t), l, p).verdict);
        if (!c.verdict) continue;
        ++seen;
        REQUIRE(c.witness.has_value());
        CHECK(check_local_witness(unary(t), l, p, c.e, *c.witness));
        CHECK(2 * c.kappa + 1 <= c.e);
      }
  }
  CHECK(seen > 0);
}

TEST_CASE("odd primes: large p needs no residue enumeration") {
  const long p = 101;
  QuadLattice l = QuadLattice::diagonal({1, p * p, p * p});
  Caps tight = default_caps();
  tight.nodes = 10;
  CHECK_FALSE(is_locally_primitively_representable(unary(3 * p), l, Int(p), tight).verdict);
  auto yes = is_locally_primitively_representable(unary(4), l, Int(p), tight);
  CHECK(yes.verdict);
  CHECK(check_local_witness(unary(4), l, Int(p), yes.e, *yes.witness));
  QuadLattice m = QuadLattice::diagonal({1, p, p});
  auto deep = is_locally_primitively_representable(unary(3 * p), m, Int(p), tight);
  CHECK(deep.verdict);
  CHECK(check_local_witness(unary(3 * p), m, Int(p), deep.e, *deep.witness));
}
