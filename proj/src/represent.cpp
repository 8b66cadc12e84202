#include "qlat/represent.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <numeric>

#include "qlat/zlinalg.hpp"

namespace qlat {

namespace {

std::int64_t gcd_of(const ZVec& x) {
  std::int64_t g = 0;
  for (Coord c : x) g = std::gcd(g, c < 0 ? -c : c);
  return g;
}

Rat weighted_average(const std::vector<Int>& counts, const std::vector<std::size_t>& members, const GenusPartition& g) {
  Rat sum = 0, omega = 0;
  for (std::size_t c : members) {
    sum += Rat(counts[c]) * g.classes[c].weight;
    omega += g.classes[c].weight;
  }
  return sum / omega;
}

template <class F>
auto per_class(const GenusPartition& g, F f) {
  using R = decltype(f(g.classes[0].lattice));
  std::vector<std::future<R>> jobs;
  for (const auto& c : g.classes) jobs.push_back(std::async(std::launch::async, f, std::cref(c.lattice)));
  std::vector<R> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::vector<std::size_t> all_classes(const GenusPartition& g) {
  std::vector<std::size_t> v(g.classes.size());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

RepReport assemble(const GenusPartition& g, std::vector<RepCount> per_class) {
  RepReport rep;
  std::vector<Int> prim;
  for (const auto& c : per_class) prim.push_back(c.r);
  rep.r = per_class[g.base_class].r;
  rep.r_all = per_class[g.base_class].r_all;
  rep.r_gen = weighted_average(prim, all_classes(g), g);
  for (const auto& block : g.spin_blocks) rep.r_spn_blocks.push_back(weighted_average(prim, block, g));
  if (!g.spin_blocks.empty()) rep.r_spn = rep.r_spn_blocks[static_cast<std::size_t>(g.classes[g.base_class].block)];
  rep.per_class = std::move(per_class);
  return rep;
}

}  // namespace

std::vector<Representation> representations(const QuadLattice& m, const QuadLattice& l, bool primitive_only,
                                            std::uint64_t cap) {
  if (m.rank() > l.rank()) throw PreconditionError("rank(M) must not exceed rank(L)");
  const std::size_t n = l.rank(), k = m.rank();
  const IntMatrix& em = m.gram2();
  std::int64_t top = 0;
  for (std::size_t j = 0; j < k; ++j) top = std::max(top, to_i64(em(j, j) / 2));

  std::map<std::int64_t, std::vector<ZVec>> by_norm;
  for (std::size_t j = 0; j < k; ++j) by_norm[to_i64(em(j, j) / 2)];
  for_each_short_vector(
      l, top,
      [&](const ZVec& x, std::int64_t q) {
        auto it = by_norm.find(q);
        if (it == by_norm.end()) return;
        ZVec neg(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
        it->second.push_back(x);
        it->second.push_back(neg);
      },
      cap);
  for (auto& [q, v] : by_norm) std::sort(v.begin(), v.end());

  std::vector<Representation> out;
  std::vector<const ZVec*> cols(k);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == k) {
      Representation r;
      r.t = IntMatrix(n, k);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < k; ++b) r.t(a, b) = Int(static_cast<long>((*cols[b])[a]));
      r.primitive = k == 1 ? gcd_of(*cols[0]) == 1 : zla::is_primitive(r.t);
      if (r.primitive || !primitive_only) out.push_back(std::move(r));
      if (out.size() > cap) throw ResourceError("representation count exceeds the cap");
      return;
    }
    for (const ZVec& x : by_norm[to_i64(em(j, j) / 2)]) {
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) ok = l.bilinear(*cols[i], x) == em(i, j);
      if (!ok) continue;
      cols[j] = &x;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const Representation& a, const Representation& b) { return a.t < b.t; });
  return out;
}

RepCount count_representations(const QuadLattice& m, const QuadLattice& l) {
  RepCount c;
  if (m.rank() == 1) {
    const std::int64_t t = to_i64(m.gram2()(0, 0) / 2);
    RankOneTable tab = rank_one_counts(l, t);
    c.r = tab.r[static_cast<std::size_t>(t)];
    c.r_all = tab.r_all[static_cast<std::size_t>(t)];
    return c;
  }
  c.r = 0;
  c.r_all = 0;
  for (const auto& rep : representations(m, l, false)) {
    ++c.r_all;
    if (rep.primitive) ++c.r;
  }
  return c;
}

RankOneTable rank_one_counts(const QuadLattice& l, std::int64_t tmax) {
  if (tmax < 0) throw PreconditionError("tmax must be non-negative");
  RankOneTable tab;
  tab.r.assign(static_cast<std::size_t>(tmax + 1), Int(0));
  tab.r_all.assign(static_cast<std::size_t>(tmax + 1), Int(0));
  tab.r[0] = 0;
  tab.r_all[0] = 1;  // the zero vector
  if (tmax == 0) return tab;
  std::vector<std::int64_t> all(static_cast<std::size_t>(tmax + 1), 0), prim(static_cast<std::size_t>(tmax + 1), 0);
  for_each_short_vector(l, tmax, [&](const ZVec& x, std::int64_t q) {
    all[static_cast<std::size_t>(q)] += 2;
    if (gcd_of(x) == 1) prim[static_cast<std::size_t>(q)] += 2;
  });
  for (std::size_t t = 1; t < all.size(); ++t) {
    tab.r_all[t] = Int(static_cast<long>(all[t]));
    tab.r[t] = Int(static_cast<long>(prim[t]));
  }
  return tab;
}

RepReport rep_numbers(const QuadLattice& m, const GenusPartition& g) {
  if (g.classes.empty()) throw PreconditionError("empty genus partition");
  if (m.rank() > g.base.rank()) throw PreconditionError("rank(M) must not exceed rank(L)");
  auto per = per_class(g, [&m](const QuadLattice& l) { return count_representations(m, l); });
  return assemble(g, std::move(per));
}

std::vector<RepReport> rank_one_reports(const GenusPartition& g, std::int64_t tmax) {
  auto tabs = per_class(g, [tmax](const QuadLattice& l) { return rank_one_counts(l, tmax); });
  std::vector<RepReport> out;
  for (std::int64_t t = 1; t <= tmax; ++t) {
    std::vector<RepCount> per;
    for (const auto& tab : tabs) per.push_back({tab.r[static_cast<std::size_t>(t)], tab.r_all[static_cast<std::size_t>(t)]});
    out.push_back(assemble(g, std::move(per)));
  }
  return out;
}

LgpVerdict verify_lgp(const QuadLattice& m, const QuadLattice& l) {
  if (l.rank() < m.rank() + 3) throw PreconditionError("verify_lgp needs rank(L) >= rank(M) + 3");
  LgpVerdict v;
  v.local = locally_primitively_representable_everywhere(m, l);
  v.locally_ok = v.local.verdict;
  v.min_m = minimum(m);
  v.det_e_l = discriminant(l).det_e;
  GenusPartition g = genus_classes(l);
  v.genus_size = g.classes.size();
  RepReport rep = rep_numbers(m, g);
  bool all_positive = true;
  for (const auto& c : rep.per_class) {
    v.per_class_r.push_back(c.r);
    if (c.r == 0) all_positive = false;
  }
  v.every_class_represents = !v.locally_ok || all_positive;
  return v;
}

std::vector<RatioRow> ratio_experiment(const GenusPartition& g, const std::vector<std::int64_t>& t_values) {
  std::vector<RatioRow> rows;
  if (t_values.empty()) return rows;
  if (g.base.rank() < 4) throw PreconditionError("ratio experiment needs rank(L) >= 4");
  std::int64_t tmax = 0;
  for (std::int64_t t : t_values) {
    if (t < 1) throw PreconditionError("t must be positive");
    tmax = std::max(tmax, t);
  }
  auto tabs = per_class(g, [tmax](const QuadLattice& l) { return rank_one_counts(l, tmax); });
  for (std::int64_t t : t_values) {
    RatioRow row;
    row.t = t;
    const QuadLattice m = QuadLattice::diagonal({static_cast<long>(t)});
    if (!locally_primitively_representable_everywhere(m, g.base).verdict) {
      row.skipped = true;
      row.reason = "not locally primitively representable";
      rows.push_back(row);
      continue;
    }
    std::vector<Int> prim;
    for (const auto& tab : tabs) prim.push_back(tab.r[static_cast<std::size_t>(t)]);
    row.r = prim[g.base_class];
    row.r_gen = weighted_average(prim, all_classes(g), g);
    if (row.r_gen == 0) {
      row.skipped = true;
      row.reason = "r_gen = 0";
      rows.push_back(row);
      continue;
    }
    Rat q = Rat(row.r) / row.r_gen - 1;
    row.rel_error = q < 0 ? Rat(-q) : q;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qlat
