#include "qlat/genus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "qlat/zlinalg.hpp"

namespace qlat {

namespace {

Rat frac_mod(const Rat& x, const Int& m) { return x - Rat(m * floor(x / Rat(m))); }

// p-primary part of a discriminant form: generators of order p^exps[i].
struct PrimaryPart {
  std::vector<int> exps;
  RatMatrix gram;
};

PrimaryPart primary_part(const DiscriminantForm& d, const Int& p) {
  std::vector<std::size_t> idx;
  std::vector<Int> scale;
  PrimaryPart part;
  for (std::size_t i = 0; i < d.orders.size(); ++i) {
    if (d.orders[i] % p != 0) continue;
    int a = valuation(d.orders[i], p);
    idx.push_back(i);
    part.exps.push_back(a);
    scale.push_back(d.orders[i] / pow(p, static_cast<unsigned long>(a)));
  }
  part.gram = RatMatrix(idx.size(), idx.size(), Rat(0));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Rat v = d.gram(idx[i], idx[j]) * Rat(scale[i] * scale[j]);
      part.gram(i, j) = frac_mod(v, i == j ? Int(2) : Int(1));
    }
  return part;
}

struct Element {
  std::vector<Int> y;
  int order_exp;
  Rat q;
};

Rat pair_value(const RatMatrix& g, const std::vector<Int>& x, const std::vector<Int>& y) {
  Rat s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) s += Rat(x[i] * y[j]) * g(i, j);
  }
  return s;
}

Rat quad_value(const RatMatrix& g, const std::vector<Int>& x) {
  Rat s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    s += Rat(x[i] * x[i]) * g(i, i);
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j] != 0) s += 2 * Rat(x[i] * x[j]) * g(i, j);
  }
  return frac_mod(s, 2);
}

std::vector<Element> elements(const PrimaryPart& a, const Int& p) {
  std::vector<Element> out;
  const std::size_t k = a.exps.size();
  std::vector<Int> mods(k), y(k, Int(0));
  for (std::size_t i = 0; i < k; ++i) mods[i] = pow(p, static_cast<unsigned long>(a.exps[i]));
  for (;;) {
    int ord = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (y[i] != 0) ord = std::max(ord, a.exps[i] - valuation(y[i], p));
    out.push_back({y, ord, quad_value(a.gram, y)});
    std::size_t i = 0;
    while (i < k && y[i] == mods[i] - 1) y[i++] = 0;
    if (i == k) break;
    ++y[i];
  }
  return out;
}

// A map of generators preserving b and q is injective because b is
// nondegenerate; equal group orders make it bijective.
bool isomorphic(const PrimaryPart& a, const PrimaryPart& b, const Int& p) {
  std::vector<int> ea = a.exps, eb = b.exps;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  if (ea != eb) return false;
  const std::size_t k = a.exps.size();
  if (k == 0) return true;
  std::vector<Element> target = elements(b, p);
  std::vector<std::vector<const Element*>> cand(k);
  for (std::size_t i = 0; i < k; ++i)
    for (const Element& e : target)
      if (e.order_exp == a.exps[i] && e.q == a.gram(i, i)) cand[i].push_back(&e);
  std::vector<const Element*> image(k);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    for (const Element* e : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = frac_mod(pair_value(b.gram, e->y, image[j]->y) - a.gram(i, j), 1) == 0;
      if (!ok) continue;
      image[i] = e;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

QuadLattice lattice_from_basis(const QuadLattice& l, const IntMatrix& basis, const Int& p) {
  IntMatrix g = l.pullback(basis);
  const Int p2 = p * p;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (g(i, j) % p2 != 0) throw std::logic_error("neighbor Gram is not integral");
      g(i, j) /= p2;
    }
  return QuadLattice::from_gram2(g);
}

class ClassIndex {
 public:
  explicit ClassIndex(std::int64_t theta_bound) : bound_(theta_bound) {}

  // Returns (index, true) for a new class.
  std::pair<std::size_t, bool> insert(const QuadLattice& reduced) {
    auto exact = by_gram_.find(reduced.gram2());
    if (exact != by_gram_.end()) return {exact->second, false};
    std::vector<Int> key = theta_prefix(reduced, bound_);
    auto& bucket = buckets_[key];
    for (std::size_t c : bucket)
      if (isometric(reduced, reps_[c])) {
        by_gram_.emplace(reduced.gram2(), c);
        return {c, false};
      }
    std::size_t c = reps_.size();
    reps_.push_back(reduced);
    bucket.push_back(c);
    by_gram_.emplace(reduced.gram2(), c);
    return {c, true};
  }

  const std::vector<QuadLattice>& reps() const { return reps_; }

 private:
  std::int64_t bound_;
  std::vector<QuadLattice> reps_;
  std::map<std::vector<Int>, std::vector<std::size_t>> buckets_;
  std::map<IntMatrix, std::size_t> by_gram_;
};

std::int64_t theta_bound_for(const QuadLattice& l) {
  const QuadLattice r = minkowski_reduce(l).lattice;
  Int top = 0;
  for (std::size_t i = 0; i < r.rank(); ++i) top = std::max(top, Int(r.gram2()(i, i) / 2));
  return std::clamp<std::int64_t>(to_i64(top), 2, 12);
}

}  // namespace

DiscriminantForm discriminant_form(const QuadLattice& l) {
  const IntMatrix& e = l.gram2();
  zla::SmithForm s = zla::smith(e);
  IntMatrix uinv = zla::unimodular_inverse(s.u);
  RatMatrix einv = zla::inverse(zla::to_rat(e));
  std::vector<std::size_t> idx;
  DiscriminantForm d;
  for (std::size_t i = 0; i < e.rows(); ++i)
    if (s.d(i, i) != 1) {
      idx.push_back(i);
      d.orders.push_back(s.d(i, i));
    }
  const std::size_t n = e.rows();
  d.gram = RatMatrix(idx.size(), idx.size(), Rat(0));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) {
      Rat v = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v += Rat(uinv(i, idx[a]) * uinv(j, idx[b])) * einv(i, j);
      d.gram(a, b) = frac_mod(v, a == b ? Int(2) : Int(1));
    }
  return d;
}

bool locally_isometric(const QuadLattice& a, const QuadLattice& b, const Int& p) {
  if (a.rank() != b.rank()) return false;
  if (discriminant(a).det_e != discriminant(b).det_e)
    throw PreconditionError("local isometry test needs equal determinants");
  return isomorphic(primary_part(discriminant_form(a), p), primary_part(discriminant_form(b), p), p);
}

bool same_genus(const QuadLattice& a, const QuadLattice& b) {
  if (a.rank() != b.rank()) return false;
  const Int d = discriminant(a).det_e;
  if (d != discriminant(b).det_e) return false;
  DiscriminantForm da = discriminant_form(a), db = discriminant_form(b);
  for (const Int& p : prime_divisors(2 * d))
    if (!isomorphic(primary_part(da, p), primary_part(db, p), p)) return false;
  return true;
}

std::vector<Int> admissible_primes(const QuadLattice& l, std::size_t count) {
  const Int d = discriminant(l).det_e;
  std::vector<Int> out;
  for (Int p = 3; out.size() < count; p = next_prime(p + 1))
    if (d % p != 0) out.push_back(p);
  return out;
}

std::vector<QuadLattice> neighbor_lattices(const QuadLattice& l, const Int& p) {
  if (p == 2 || !is_prime(p)) throw PreconditionError("neighbor prime must be an odd prime");
  if (discriminant(l).det_e % p == 0) throw PreconditionError("neighbor prime must not divide det(E)");
  if (p > 1000) throw ResourceError("neighbor prime too large");
  const std::size_t n = l.rank();
  const IntMatrix& e = l.gram2();
  std::vector<QuadLattice> out;
  if (n < 2) return out;

  // normalized line representatives: first nonzero coordinate equal to 1
  for (std::size_t lead = 0; lead < n; ++lead) {
    IntVector x(n, Int(0));
    x[lead] = 1;
    for (;;) {
      if (mod(l.value(x), p) == 0) {
        IntVector w(n, Int(0));
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) w[a] += e(a, b) * x[b];
        std::size_t j = 0;
        while (mod(w[j], p) == 0) ++j;  // E x != 0 mod p since p does not divide det
        IntVector xl = x;
        Int c = mod(-(l.value(x) / p) * inverse_mod(mod(w[j], p), p), p);
        xl[j] += p * c;
        const Int wj_inv = inverse_mod(mod(w[j], p), p);

        IntMatrix gens(n, 2 * n, Int(0));
        std::size_t col = 0;
        for (std::size_t i = 0; i < n; ++i) gens(i, col++) = p * p;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == j) continue;
          gens(i, col) = p;
          gens(j, col) = -p * mod(w[i] * wj_inv, p);
          ++col;
        }
        for (std::size_t i = 0; i < n; ++i) gens(i, col) = xl[i];
        IntMatrix basis = zla::column_basis(gens);
        out.push_back(minkowski_reduce(lattice_from_basis(l, basis, p)).lattice);
      }
      std::size_t a = n;
      while (a > lead + 1 && x[a - 1] == p - 1) x[--a] = 0;
      if (a == lead + 1) break;
      ++x[a - 1];
    }
  }
  return out;
}

std::vector<QuadLattice> neighbors(const QuadLattice& l, const Int& p) {
  std::vector<QuadLattice> raw = neighbor_lattices(l, p);
  ClassIndex index(theta_bound_for(l));
  for (const QuadLattice& r : raw) index.insert(r);
  return index.reps();
}

GenusPartition genus_classes(const QuadLattice& l, const Caps& caps) {
  if (l.rank() < 2) throw PreconditionError("genus enumeration needs rank >= 2");
  GenusPartition g;
  g.base = l;
  const QuadLattice base = minkowski_reduce(l).lattice;
  ClassIndex index(theta_bound_for(base));
  index.insert(base);

  std::vector<Int> probe = admissible_primes(l, 4);
  g.primes = {probe[0], probe[1]};
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> edges;
  std::vector<std::size_t> expanded;  // number of primes expanded per class

  auto close = [&] {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t c = 0; c < index.reps().size(); ++c) {
        if (expanded.size() <= c) expanded.push_back(0);
        while (expanded[c] < g.primes.size()) {
          const std::size_t pi = expanded[c]++;
          const QuadLattice rep = index.reps()[c];
          for (const QuadLattice& nb : neighbor_lattices(rep, g.primes[pi])) {
            auto [to, fresh] = index.insert(nb);
            edges.insert({c, to, pi});
            if (fresh) {
              changed = true;
              if (index.reps().size() > caps.classes) throw ResourceError("genus exceeds the class cap");
            }
          }
        }
      }
    }
  };
  close();
  // A prime whose spinor class lies outside the span of the first two would
  // reach classes the closure missed; probe two more primes from the base.
  for (std::size_t extra = 2; extra < probe.size(); ++extra) {
    bool fresh_found = false;
    for (const QuadLattice& nb : neighbor_lattices(base, probe[extra])) {
      auto [to, fresh] = index.insert(nb);
      if (fresh) fresh_found = true;
    }
    if (fresh_found) {
      g.primes.push_back(probe[extra]);
      close();
    }
  }
  const auto& reps = index.reps();
  for (const QuadLattice& r : reps)
    if (!same_genus(r, l)) throw std::logic_error("neighbor left the genus");

  std::vector<std::size_t> order(reps.size());
  std::vector<Int> mins(reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c) {
    order[c] = c;
    mins[c] = reps[c].gram2()(0, 0) / 2;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mins[a] != mins[b]) return mins[a] < mins[b];
    return reps[a].gram2() < reps[b].gram2();
  });
  std::vector<std::size_t> pos(reps.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;

  g.omega_gen = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    GenusClass c;
    c.lattice = reps[order[k]];
    c.aut_order = automorphisms(c.lattice).order;
    c.weight = make_rat(1, c.aut_order);
    g.omega_gen += c.weight;
    g.classes.push_back(std::move(c));
  }
  g.base_class = pos[0];
  for (const auto& [from, to, pi] : edges) g.edges.push_back({pos[from], pos[to], pi});
  std::sort(g.edges.begin(), g.edges.end(), [](const NeighborEdge& a, const NeighborEdge& b) {
    return std::tie(a.from, a.prime, a.to) < std::tie(b.from, b.prime, b.to);
  });
  return g;
}

GenusPartition spin_partition(GenusPartition g) {
  if (g.base.rank() < 3) throw PreconditionError("spin partition needs rank >= 3");
  const std::size_t k = g.primes.size();
  if (k > 16) throw ResourceError("too many neighbor primes for parity labels");
  const std::size_t nc = g.classes.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nc);
  for (const auto& e : g.edges) adj[e.from].push_back({e.to, e.prime});

  // States (class, parity of the steps taken at each prime). Two labels at the
  // same class differ by an element of the kernel of the spinor-class map.
  std::vector<std::set<unsigned>> labels(nc);
  std::vector<std::pair<std::size_t, unsigned>> queue{{g.base_class, 0u}};
  labels[g.base_class].insert(0u);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [c, v] = queue[head];
    for (auto [to, pi] : adj[c]) {
      unsigned w = v ^ (1u << pi);
      if (labels[to].insert(w).second) queue.push_back({to, w});
    }
  }
  std::set<unsigned> h{0u};
  for (const auto& ls : labels) {
    if (ls.empty()) throw UnresolvedError("class not reached by the neighbor graph");
    for (unsigned v : ls) {
      unsigned d = v ^ *ls.begin();
      if (h.count(d)) continue;
      std::set<unsigned> grown = h;
      for (unsigned x : h) grown.insert(x ^ d);
      h = std::move(grown);
    }
  }
  auto canonical = [&](unsigned v) {
    unsigned best = v;
    for (unsigned x : h) best = std::min(best, v ^ x);
    return best;
  };
  std::map<unsigned, int> block_of;
  g.spin_blocks.clear();
  g.omega_spn.clear();
  for (std::size_t c = 0; c < nc; ++c) {
    unsigned key = canonical(*labels[c].begin());
    auto it = block_of.find(key);
    if (it == block_of.end()) {
      it = block_of.emplace(key, static_cast<int>(g.spin_blocks.size())).first;
      g.spin_blocks.emplace_back();
      g.omega_spn.push_back(0);
    }
    g.classes[c].block = it->second;
    g.spin_blocks[it->second].push_back(c);
    g.omega_spn[it->second] += g.classes[c].weight;
  }
  return g;
}

std::size_t find_class(const GenusPartition& g, const QuadLattice& l) {
  const QuadLattice r = minkowski_reduce(l).lattice;
  for (std::size_t c = 0; c < g.classes.size(); ++c)
    if (g.classes[c].lattice == r) return c;
  for (std::size_t c = 0; c < g.classes.size(); ++c)
    if (isometric(r, g.classes[c].lattice)) return c;
  return g.classes.size();
}

}  // namespace qlat
