#include "qlat/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <set>

#include "qlat/zlinalg.hpp"

namespace qlat {

// ---- caps ------------------------------------------------------------------

Caps Caps::from_env() {
  Caps c;
  auto read = [](const char* name, std::uint64_t& slot) {
    if (const char* v = std::getenv(name)) {
      char* end = nullptr;
      unsigned long long x = std::strtoull(v, &end, 10);
      if (end && *end == '\0' && x > 0) slot = x;
    }
  };
  read("QLAT_CAP_SHORT_VECTORS", c.short_vectors);
  read("QLAT_CAP_CLASSES", c.classes);
  read("QLAT_CAP_MODP", c.modp);
  read("QLAT_CAP_NODES", c.nodes);
  return c;
}

namespace {
Caps& caps_slot() {
  static Caps caps = Caps::from_env();
  return caps;
}
}  // namespace

const Caps& default_caps() { return caps_slot(); }
void set_default_caps(const Caps& caps) { caps_slot() = caps; }

// ---- QuadLattice -----------------------------------------------------------

void QuadLattice::validate(const IntMatrix& e) {
  if (!e.square() || e.rows() == 0) throw PreconditionError("Gram matrix must be square and non-empty");
  const std::size_t n = e.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (mod(e(i, i), 2) != 0) throw PreconditionError("doubled Gram matrix must be even on the diagonal");
    for (std::size_t j = i + 1; j < n; ++j)
      if (e(i, j) != e(j, i)) throw PreconditionError("Gram matrix must be symmetric");
  }
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = e(i, j);
    if (zla::det(lead) <= 0) throw PreconditionError("quadratic form is not positive definite");
  }
}

QuadLattice QuadLattice::from_gram2(const IntMatrix& e) {
  validate(e);
  return QuadLattice(e);
}

QuadLattice QuadLattice::from_coeffs(const IntMatrix& upper) {
  if (!upper.square()) throw PreconditionError("coefficient matrix must be square");
  const std::size_t n = upper.rows();
  IntMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    e(i, i) = 2 * upper(i, i);
    for (std::size_t j = i + 1; j < n; ++j) e(i, j) = e(j, i) = upper(i, j);
  }
  return from_gram2(e);
}

QuadLattice QuadLattice::from_gram(const IntMatrix& b) {
  IntMatrix e = b;
  for (std::size_t i = 0; i < e.rows(); ++i)
    for (std::size_t j = 0; j < e.cols(); ++j) e(i, j) *= 2;
  return from_gram2(e);
}

QuadLattice QuadLattice::diagonal(const std::vector<long>& a) {
  IntMatrix e(a.size(), a.size(), Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) e(i, i) = 2 * Int(a[i]);
  return from_gram2(e);
}

QuadLattice QuadLattice::identity(std::size_t n) { return diagonal(std::vector<long>(n, 1)); }

IntMatrix QuadLattice::coeffs() const {
  const std::size_t n = rank();
  IntMatrix c(n, n, Int(0));
  for (std::size_t i = 0; i < n; ++i) {
    c(i, i) = e_(i, i) / 2;
    for (std::size_t j = i + 1; j < n; ++j) c(i, j) = e_(i, j);
  }
  return c;
}

Int QuadLattice::value(const IntVector& x) const {
  if (x.size() != rank()) throw PreconditionError("vector length does not match lattice rank");
  Int twice = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) twice += x[i] * e_(i, j) * x[j];
  return twice / 2;
}

Int QuadLattice::value(const ZVec& x) const {
  IntVector v(x.begin(), x.end());
  return value(v);
}

Int QuadLattice::bilinear(const ZVec& x, const ZVec& y) const {
  if (x.size() != rank() || y.size() != rank()) throw PreconditionError("vector length does not match lattice rank");
  Int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += Int(x[i]) * e_(i, j) * Int(y[j]);
  return s;
}

IntMatrix QuadLattice::pullback(const IntMatrix& u) const {
  if (u.rows() != rank()) throw PreconditionError("base change has wrong number of rows");
  return u.transpose() * e_ * u;
}

// ---- UnimodularChange ------------------------------------------------------

UnimodularChange::UnimodularChange(IntMatrix u) : u_(std::move(u)) {
  if (!u_.square()) throw PreconditionError("base change must be square");
  Int d = zla::det(u_);
  if (d != 1 && d != -1) throw PreconditionError("base change is not unimodular (det = " + d.get_str() + ")");
  det_ = d == 1 ? 1 : -1;
}

UnimodularChange UnimodularChange::inverse() const { return UnimodularChange(zla::unimodular_inverse(u_)); }

QuadLattice UnimodularChange::apply(const QuadLattice& l) const { return QuadLattice::from_gram2(l.pullback(u_)); }

Discriminant discriminant(const QuadLattice& l) {
  Int d = zla::det(l.gram2());
  return {d, make_rat(d, ipow(2, l.rank()))};
}

// ---- short vectors ---------------------------------------------------------

namespace {

struct Ldl {
  std::vector<Rat> d;
  RatMatrix mu;
};

Ldl ldl(const IntMatrix& e) {
  const std::size_t n = e.rows();
  RatMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = make_rat(e(i, j), 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j);
      q(i, j) /= q(i, i);
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }
  Ldl out{std::vector<Rat>(n), q};
  for (std::size_t i = 0; i < n; ++i) out.d[i] = q(i, i);
  return out;
}

std::vector<std::int64_t> gram_i64(const IntMatrix& e) {
  std::vector<std::int64_t> g(e.rows() * e.cols());
  for (std::size_t i = 0; i < e.rows(); ++i)
    for (std::size_t j = 0; j < e.cols(); ++j) {
      Int v = e(i, j);
      if (abs(v) > Int("1000000000000")) throw ResourceError("Gram entry too large for enumeration");
      g[i * e.cols() + j] = v.get_si();
    }
  return g;
}

// Q(x) exactly in 128-bit arithmetic.
__int128 q_value(const std::vector<std::int64_t>& g, std::size_t n, const ZVec& x) {
  __int128 s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    __int128 row = static_cast<__int128>(g[i * n + i] / 2) * x[i];
    for (std::size_t j = i + 1; j < n; ++j) row += static_cast<__int128>(g[i * n + j]) * x[j];
    s += row * x[i];
  }
  return s;
}

void canonical_sign(ZVec& x) {
  for (Coord c : x) {
    if (c == 0) continue;
    if (c < 0)
      for (Coord& y : x) y = -y;
    return;
  }
}

}  // namespace

void for_each_short_vector(const QuadLattice& l, std::int64_t bound,
                           const std::function<void(const ZVec&, std::int64_t)>& visit, std::uint64_t cap) {
  if (bound <= 0) return;
  const std::size_t n = l.rank();
  const Ldl f = ldl(l.gram2());
  const auto g = gram_i64(l.gram2());
  ZVec x(n, 0);
  std::vector<Rat> rem(n + 1);
  rem[n] = bound;
  std::uint64_t count = 0;

  // integer interval {v : d (v - c)^2 <= r}
  auto range = [](const Rat& c, const Rat& s, Int& lo, Int& hi) {
    Int root = isqrt(floor(s)) + 1;
    lo = ceil(c - Rat(root));
    hi = floor(c + Rat(root));
    auto outside = [&](const Int& v) {
      Rat t = Rat(v) - c;
      return t * t > s;
    };
    while (lo <= hi && outside(lo)) ++lo;
    while (hi >= lo && outside(hi)) --hi;
  };

  std::function<void(std::size_t, bool)> level = [&](std::size_t i, bool tail_zero) {
    Rat c = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j] != 0) c -= f.mu(i, j) * Rat(x[j]);
    Rat s = rem[i + 1] / f.d[i];
    Int lo, hi;
    range(c, s, lo, hi);
    if (tail_zero) {
      Int floor_v = i == 0 ? Int(1) : Int(0);
      if (lo < floor_v) lo = floor_v;
    }
    if (lo > hi) return;
    const Coord a = to_i64(lo, "short vector coordinate"), b = to_i64(hi, "short vector coordinate");
    for (Coord v = a; v <= b; ++v) {
      x[i] = v;
      if (i == 0) {
        if (++count > cap) throw ResourceError("short vector count exceeds cap; bound infeasible");
        visit(x, static_cast<std::int64_t>(q_value(g, n, x)));
      } else {
        Rat t = Rat(v) - c;
        rem[i] = rem[i + 1] - f.d[i] * t * t;
        level(i - 1, tail_zero && v == 0);
      }
    }
    x[i] = 0;
  };
  level(n - 1, true);
}

std::vector<ShortVector> short_vectors(const QuadLattice& l, const Int& bound, std::uint64_t cap) {
  if (bound < 0) throw PreconditionError("short_vectors bound must be non-negative");
  std::vector<ShortVector> out;
  for_each_short_vector(
      l, to_i64(bound, "bound"),
      [&](const ZVec& x, std::int64_t q) {
        ShortVector sv{x, Int(static_cast<long>(q))};
        canonical_sign(sv.x);
        out.push_back(std::move(sv));
      },
      cap);
  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.x < b.x;
  });
  return out;
}

// ---- reduction -------------------------------------------------------------

namespace {

// Column operation b_j <- b_j + q b_i applied to Gram and basis.
void add_column(IntMatrix& e, IntMatrix& u, std::size_t j, std::size_t i, const Int& q) {
  const std::size_t n = e.rows();
  for (std::size_t k = 0; k < n; ++k) e(k, j) += q * e(k, i);
  for (std::size_t k = 0; k < n; ++k) e(j, k) += q * e(i, k);
  for (std::size_t k = 0; k < u.rows(); ++k) u(k, j) += q * u(k, i);
}

void swap_basis(IntMatrix& e, IntMatrix& u, std::size_t a, std::size_t b) {
  e.swap_rows(a, b);
  e.swap_cols(a, b);
  u.swap_cols(a, b);
}

void negate_basis(IntMatrix& e, IntMatrix& u, std::size_t a) {
  const std::size_t n = e.rows();
  for (std::size_t k = 0; k < n; ++k) {
    e(a, k) = -e(a, k);
    e(k, a) = -e(k, a);
  }
  for (std::size_t k = 0; k < u.rows(); ++k) u(k, a) = -u(k, a);
}

// Pairwise reduction of the basis vectors with index >= fixed: afterwards
// 2|E_ij| <= E_ii for every i and every j >= fixed, and the diagonal on
// [fixed, n) is non-decreasing.
void pair_reduce(IntMatrix& e, IntMatrix& u, std::size_t fixed) {
  const std::size_t n = e.rows();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = fixed; a < n; ++a) {
      std::size_t best = a;
      for (std::size_t b = a + 1; b < n; ++b)
        if (e(b, b) < e(best, best)) best = b;
      if (best != a) swap_basis(e, u, a, best);
    }
    for (std::size_t j = fixed; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        if (2 * abs(e(i, j)) <= e(i, i)) continue;
        Int q = round_half_up(make_rat(e(i, j), e(i, i)));
        add_column(e, u, j, i, Int(-q));
        changed = true;
      }
  }
}

Int gcd_tail(const ZVec& x, std::size_t from) {
  Int g = 0;
  for (std::size_t k = from; k < x.size(); ++k) g = gcd(g, Int(static_cast<long>(x[k])));
  return g;
}

}  // namespace

Reduced minkowski_reduce(const QuadLattice& l) {
  const std::size_t n = l.rank();
  IntMatrix e = l.gram2();
  IntMatrix u = IntMatrix::identity(n);
  pair_reduce(e, u, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const QuadLattice cur = QuadLattice::from_gram2(e);
    const std::int64_t bound = to_i64(e(i, i) / 2, "basis norm");
    std::int64_t best_q = bound;
    ZVec best;
    for_each_short_vector(cur, bound, [&](const ZVec& x, std::int64_t q) {
      if (q > best_q || gcd_tail(x, i) != 1) return;
      ZVec y = x;
      canonical_sign(y);
      if (q < best_q || (!best.empty() && y < best)) {
        best_q = q;
        best = std::move(y);
      }
    });
    if (!best.empty()) {
      IntVector tail(best.begin() + static_cast<long>(i), best.end());
      IntMatrix c = zla::complete_to_unimodular(tail);
      IntMatrix w = IntMatrix::identity(n);
      for (std::size_t r = 0; r < n; ++r) w(r, i) = Int(static_cast<long>(best[r]));
      for (std::size_t col = i + 1; col < n; ++col)
        for (std::size_t r = 0; r < n; ++r) w(r, col) = r < i ? Int(0) : c(r - i, col - i);
      e = w.transpose() * e * w;
      u = u * w;
    }
    pair_reduce(e, u, i + 1);
  }
  for (std::size_t i = 1; i < n; ++i)
    if (e(i - 1, i) < 0) negate_basis(e, u, i);
  return {QuadLattice::from_gram2(e), UnimodularChange(u)};
}

bool satisfies_reduction_conditions(const QuadLattice& l) {
  const IntMatrix& e = l.gram2();
  for (std::size_t i = 0; i < l.rank(); ++i) {
    if (i + 1 < l.rank() && e(i, i) > e(i + 1, i + 1)) return false;
    for (std::size_t j = i + 1; j < l.rank(); ++j)
      if (2 * abs(e(i, j)) > e(i, i)) return false;
  }
  return true;
}

Int minimum(const QuadLattice& l) {
  IntMatrix e = l.gram2();
  IntMatrix u = IntMatrix::identity(l.rank());
  pair_reduce(e, u, 0);
  const QuadLattice r = QuadLattice::from_gram2(e);
  std::int64_t best = to_i64(e(0, 0) / 2, "basis norm");
  for_each_short_vector(r, best, [&](const ZVec&, std::int64_t q) { best = std::min(best, q); });
  return Int(static_cast<long>(best));
}

// ---- isometry search -------------------------------------------------------

namespace {

// Backtracking search for matrices V with V^T A V = B (A, B reduced doubled
// Grams of equal rank). `emit` receives the columns of V and returns false to
// stop the search.
class IsometrySearch {
 public:
  IsometrySearch(const QuadLattice& a, const IntMatrix& b, std::uint64_t cap) : n_(a.rank()), b_(b), cap_(cap) {
    std::int64_t top = 0;
    for (std::size_t j = 0; j < n_; ++j) top = std::max(top, to_i64(b(j, j) / 2, "norm"));
    g_ = gram_i64(a.gram2());
    for_each_short_vector(a, top, [&](const ZVec& x, std::int64_t q) {
      ZVec neg(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) neg[k] = -x[k];
      bucket_[q].push_back(x);
      bucket_[q].push_back(std::move(neg));
    });
    for (auto& [q, vs] : bucket_) {
      std::sort(vs.begin(), vs.end());
      auto& imgs = images_[q];
      for (const ZVec& v : vs) {
        ZVec img(n_, 0);
        for (std::size_t r = 0; r < n_; ++r)
          for (std::size_t c = 0; c < n_; ++c) img[r] += g_[r * n_ + c] * v[c];
        imgs.push_back(std::move(img));
      }
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) target_.push_back(to_i64(b(i, j), "Gram entry"));
  }

  void run(const std::function<bool(const std::vector<const ZVec*>&)>& emit) {
    cols_.assign(n_, nullptr);
    imgs_.assign(n_, nullptr);
    emit_ = &emit;
    nodes_ = 0;
    stop_ = false;
    dfs(0);
  }

 private:
  void dfs(std::size_t j) {
    if (stop_) return;
    if (j == n_) {
      if (!(*emit_)(cols_)) stop_ = true;
      return;
    }
    auto it = bucket_.find(target_[j * n_ + j] / 2);
    if (it == bucket_.end()) return;
    const auto& vs = it->second;
    const auto& im = images_.at(it->first);
    for (std::size_t c = 0; c < vs.size() && !stop_; ++c) {
      if (++nodes_ > cap_) throw ResourceError("isometry search exceeds node cap");
      bool ok = true;
      for (std::size_t k = 0; k < j && ok; ++k) {
        __int128 dot = 0;
        for (std::size_t r = 0; r < n_; ++r) dot += static_cast<__int128>(im[c][r]) * (*cols_[k])[r];
        ok = dot == target_[k * n_ + j];
      }
      if (!ok) continue;
      cols_[j] = &vs[c];
      imgs_[j] = &im[c];
      dfs(j + 1);
    }
  }

  std::size_t n_;
  IntMatrix b_;
  std::uint64_t cap_;
  std::vector<std::int64_t> g_, target_;
  std::map<std::int64_t, std::vector<ZVec>> bucket_, images_;
  std::vector<const ZVec*> cols_, imgs_;
  const std::function<bool(const std::vector<const ZVec*>&)>* emit_ = nullptr;
  std::uint64_t nodes_ = 0;
  bool stop_ = false;
};

IntMatrix columns_to_matrix(const std::vector<const ZVec*>& cols) {
  const std::size_t n = cols.size();
  IntMatrix v(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) v(i, j) = Int(static_cast<long>((*cols[j])[i]));
  return v;
}

}  // namespace

std::optional<UnimodularChange> isometric(const QuadLattice& a, const QuadLattice& b) {
  if (a.rank() != b.rank()) return std::nullopt;
  if (zla::det(a.gram2()) != zla::det(b.gram2())) return std::nullopt;
  const Reduced ra = minkowski_reduce(a), rb = minkowski_reduce(b);
  std::optional<IntMatrix> found;
  IsometrySearch search(ra.lattice, rb.lattice.gram2(), default_caps().nodes);
  search.run([&](const std::vector<const ZVec*>& cols) {
    found = columns_to_matrix(cols);
    return false;
  });
  if (!found) return std::nullopt;
  IntMatrix u = ra.change.matrix() * (*found) * rb.change.inverse().matrix();
  UnimodularChange w(u);
  if (w.apply(a) != b) throw Error("internal: isometry witness failed verification");
  return w;
}

std::vector<UnimodularChange> automorphism_elements(const QuadLattice& l) {
  const Reduced r = minkowski_reduce(l);
  const IntMatrix& uc = r.change.matrix();
  const IntMatrix uinv = r.change.inverse().matrix();
  std::vector<UnimodularChange> out;
  IsometrySearch search(r.lattice, r.lattice.gram2(), default_caps().nodes);
  search.run([&](const std::vector<const ZVec*>& cols) {
    out.emplace_back(uc * columns_to_matrix(cols) * uinv);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

AutomorphismGroup automorphisms(const QuadLattice& l) {
  std::vector<UnimodularChange> all = automorphism_elements(l);
  std::set<IntMatrix> group{IntMatrix::identity(l.rank())};
  std::vector<UnimodularChange> gens;
  for (const UnimodularChange& g : all) {
    if (group.count(g.matrix())) continue;
    gens.push_back(g);
    // closure of the subgroup generated so far
    std::vector<IntMatrix> frontier(group.begin(), group.end());
    while (!frontier.empty()) {
      std::vector<IntMatrix> next;
      for (const IntMatrix& h : frontier)
        for (const UnimodularChange& s : gens) {
          IntMatrix p = h * s.matrix();
          if (group.insert(p).second) next.push_back(std::move(p));
        }
      frontier = std::move(next);
    }
  }
  if (group.size() != all.size()) throw Error("internal: automorphism closure mismatch");
  return {gens, Int(static_cast<unsigned long>(all.size()))};
}

std::vector<Int> theta_prefix(const QuadLattice& l, std::int64_t bound) {
  std::vector<Int> t;
  t.push_back(Int(static_cast<unsigned long>(l.rank())));
  t.push_back(zla::det(l.gram2()));
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bound) + 1, 0);
  for_each_short_vector(l, bound, [&](const ZVec&, std::int64_t q) { ++counts[static_cast<std::size_t>(q)]; });
  for (std::size_t k = 1; k < counts.size(); ++k) t.push_back(Int(static_cast<unsigned long>(counts[k])));
  return t;
}

}  // namespace qlat
