#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "qlat/genus.hpp"
#include "support.hpp"

using namespace qlat;

namespace {

QuadLattice binary(long a, long b, long c) {
  return QuadLattice::from_coeffs(IntMatrix{{Int(a), Int(b)}, {Int(0), Int(c)}});
}

bool same_class_sets(const std::vector<QuadLattice>& a, const std::vector<QuadLattice>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool hit = false;
    for (std::size_t j = 0; j < b.size() && !hit; ++j)
      if (!used[j] && isometric(x, b[j])) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

std::vector<QuadLattice> reps(const GenusPartition& g) {
  std::vector<QuadLattice> out;
  for (const auto& c : g.classes) out.push_back(c.lattice);
  return out;
}

}  // namespace

TEST_CASE("discriminant form of I_n") {
  DiscriminantForm d = discriminant_form(QuadLattice::identity(3));
  REQUIRE(d.orders.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.orders[i] == 2);
    CHECK(d.gram(i, i) == Rat(1, 2));
  }
  // unimodular even lattice of rank 2 does not exist; x^2 + xy + y^2 has |A| = 3
  DiscriminantForm a2 = discriminant_form(binary(1, 1, 1));
  REQUIRE(a2.orders.size() == 1);
  CHECK(a2.orders[0] == 3);
  CHECK(a2.gram(0, 0) == Rat(2, 3));
}

TEST_CASE("same_genus on binary forms") {
  // det 20: x^2 + 5y^2 and 2x^2 + 2xy + 3y^2 lie in different genera
  CHECK_FALSE(same_genus(binary(1, 0, 5), binary(2, 2, 3)));
  // det 23: one genus with the principal form and 2x^2 + xy + 3y^2
  CHECK(same_genus(binary(1, 1, 6), binary(2, 1, 3)));
  CHECK(same_genus(binary(2, 1, 3), binary(2, -1, 3)));
  CHECK_FALSE(same_genus(binary(1, 0, 1), binary(1, 0, 2)));
}

TEST_CASE("same_genus agrees with Jordan-invariant oracle") {
  for (long d : {48L, 72L, 100L, 108L, 160L, 200L}) {
    auto forms = oracle::reduced_forms(3, d);
    for (std::size_t i = 0; i < forms.size(); ++i)
      for (std::size_t j = i; j < forms.size() && j < i + 6; ++j) {
        QuadLattice a = QuadLattice::from_gram2(forms[i]), b = QuadLattice::from_gram2(forms[j]);
        CHECK(same_genus(a, b) == oracle::same_local_invariants(forms[i], forms[j]));
      }
  }
}

TEST_CASE("neighbors") {
  auto n4 = neighbors(QuadLattice::identity(4), 3);
  REQUIRE(n4.size() == 1);
  CHECK(isometric(n4[0], QuadLattice::identity(4)).has_value());
  CHECK(neighbors(QuadLattice::diagonal({5}), 3).empty());
  QuadLattice k = QuadLattice::diagonal({1, 1, 25, 25});
  auto nk = neighbors(k, 3);
  bool other = false;
  for (const auto& x : nk) {
    CHECK(same_genus(x, k));
    if (!isometric(x, k)) other = true;
  }
  CHECK(other);
  CHECK_THROWS_AS(neighbors(k, 5), PreconditionError);
  CHECK_THROWS_AS(neighbors(k, 2), PreconditionError);
}

TEST_CASE("neighbor index is p on both sides") {
  // L and L' share a sublattice of index p in each; in particular det is preserved
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 8; ++trial) {
    QuadLattice l = testing::random_lattice(rng, 3 + trial % 2, 4);
    Int p = admissible_primes(l, 1)[0];
    for (const auto& x : neighbor_lattices(l, p)) CHECK(discriminant(x).det_e == discriminant(l).det_e);
  }
}

TEST_CASE("genus of small unimodular-like lattices") {
  auto g4 = genus_classes(QuadLattice::identity(4));
  REQUIRE(g4.classes.size() == 1);
  CHECK(g4.classes[0].aut_order == 384);
  CHECK(g4.omega_gen == Rat(1, 384));
  auto g2 = genus_classes(QuadLattice::identity(2));
  REQUIRE(g2.classes.size() == 1);
  CHECK(g2.classes[0].aut_order == 8);
  auto g23 = genus_classes(binary(1, 1, 6));
  CHECK(g23.classes.size() == 2);
}

TEST_CASE("genus matches the brute-force oracle") {
  std::vector<QuadLattice> cases{QuadLattice::identity(2), QuadLattice::identity(3), QuadLattice::identity(4),
                                 binary(1, 1, 6),          binary(2, 1, 3),         QuadLattice::diagonal({1, 1, 5}),
                                 QuadLattice::diagonal({1, 2, 7}), QuadLattice::diagonal({1, 1, 1, 7}),
                                 QuadLattice::diagonal({1, 3, 9})};
  std::mt19937_64 rng(59);
  for (int i = 0; i < 6; ++i) cases.push_back(testing::random_lattice(rng, 3, 4));
  for (const auto& l : cases) {
    auto g = genus_classes(l);
    auto o = oracle::genus(l);
    INFO(l.gram2());
    CHECK(same_class_sets(reps(g), o));
  }
}

TEST_CASE("genus invariants") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 6; ++trial) {
    QuadLattice l = testing::random_lattice(rng, 3 + trial % 2, 5);
    auto g = genus_classes(l);
    Rat total = 0;
    for (const auto& c : g.classes) {
      total += 1 / (g.omega_gen * Rat(c.aut_order));
      CHECK(same_genus(c.lattice, l));
      CHECK(satisfies_reduction_conditions(c.lattice));
    }
    CHECK(total == 1);
    for (std::size_t a = 0; a < g.classes.size(); ++a)
      for (std::size_t b = a + 1; b < g.classes.size(); ++b)
        CHECK_FALSE(isometric(g.classes[a].lattice, g.classes[b].lattice).has_value());
    // closure started from the last class finds the same set
    auto again = genus_classes(g.classes.back().lattice);
    CHECK(same_class_sets(reps(g), reps(again)));
    CHECK(find_class(g, l) == g.base_class);
  }
}

TEST_CASE("spin partition is a partition with matching weights") {
  for (const auto& l : {QuadLattice::identity(4), QuadLattice::diagonal({1, 1, 25, 25}), QuadLattice::diagonal({1, 3, 9, 27}),
                        QuadLattice::diagonal({1, 1, 16})}) {
    auto g = spin_partition(genus_classes(l));
    std::vector<int> seen(g.classes.size(), 0);
    Rat total = 0;
    for (std::size_t b = 0; b < g.spin_blocks.size(); ++b) {
      Rat w = 0;
      for (std::size_t c : g.spin_blocks[b]) {
        ++seen[c];
        w += g.classes[c].weight;
        CHECK(g.classes[c].block == static_cast<int>(b));
      }
      CHECK(w == g.omega_spn[b]);
      total += w;
    }
    CHECK(total == g.omega_gen);
    for (int s : seen) CHECK(s == 1);
  }
  auto g4 = spin_partition(genus_classes(QuadLattice::identity(4)));
  CHECK(g4.spin_blocks.size() == 1);
  CHECK_THROWS_AS(spin_partition(genus_classes(QuadLattice::identity(2))), PreconditionError);
}
