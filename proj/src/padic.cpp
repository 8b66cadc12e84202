#include "qlat/padic.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <thread>

#include "qlat/zlinalg.hpp"

namespace qlat {

namespace {

void check_prime_precision(const Int& p, int e) {
  if (!is_prime(p)) throw PreconditionError("p must be prime, got " + p.get_str());
  if (e < 1) throw PreconditionError("precision e must be >= 1");
}

void check_compatible(const PadicScalar& a, const PadicScalar& b) {
  if (a.p() != b.p() || a.e() != b.e()) throw PreconditionError("p-adic operands differ in p or precision");
}

Int residue_of(const Rat& q, const Int& mod_pe) {
  Int den(q.get_den());
  return mod(Int(q.get_num()) * inverse_mod(den, mod_pe), mod_pe);
}

}  // namespace

// ---- scalars and matrices ------------------------------------------------

PadicScalar::PadicScalar(Int p, int e, const Int& value) : p_(std::move(p)), e_(e) {
  check_prime_precision(p_, e_);
  r_ = mod(value, modulus());
}

PadicValuation PadicScalar::valuation() const {
  if (r_ == 0) return {e_, false};
  return {qlat::valuation(r_, p_), true};
}

PadicScalar PadicScalar::inverse() const {
  if (!is_unit()) throw PreconditionError("inverse of a non-unit");
  return PadicScalar(p_, e_, inverse_mod(r_, modulus()));
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  check_compatible(a, b);
  return PadicScalar(a.p_, a.e_, a.r_ + b.r_);
}
PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
  check_compatible(a, b);
  return PadicScalar(a.p_, a.e_, a.r_ - b.r_);
}
PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  check_compatible(a, b);
  return PadicScalar(a.p_, a.e_, a.r_ * b.r_);
}
PadicScalar PadicScalar::operator-() const { return PadicScalar(p_, e_, -r_); }

PadicMatrix::PadicMatrix(Int p, int e, const IntMatrix& a) : p_(std::move(p)), e_(e), a_(a) {
  check_prime_precision(p_, e_);
  const Int q = modulus();
  for (std::size_t i = 0; i < a_.rows(); ++i)
    for (std::size_t j = 0; j < a_.cols(); ++j) a_(i, j) = mod(a_(i, j), q);
}

PadicMatrix PadicMatrix::identity(Int p, int e, std::size_t n) { return PadicMatrix(std::move(p), e, IntMatrix::identity(n)); }

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.p_ != b.p_ || a.e_ != b.e_) throw PreconditionError("p-adic operands differ in p or precision");
  return PadicMatrix(a.p_, a.e_, a.a_ * b.a_);
}

PadicSmith smith_normal_form(const PadicMatrix& in) {
  const Int& p = in.p();
  const int e = in.e();
  const Int q = in.modulus();
  const std::size_t r = in.rows(), c = in.cols();
  IntMatrix a = in.residues(), u = IntMatrix::identity(r), v = IntMatrix::identity(c);
  auto reduce_row = [&](IntMatrix& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = mod(m(i, j), q);
  };
  auto reduce_col = [&](IntMatrix& m, std::size_t j) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = mod(m(i, j), q);
  };
  const std::size_t steps = std::min(r, c);
  for (std::size_t t = 0; t < steps; ++t) {
    int best = e;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (a(i, j) != 0) {
          int w = valuation(a(i, j), p);
          if (w < best) best = w, bi = i, bj = j;
        }
    if (best == e) break;
    a.swap_rows(t, bi);
    u.swap_rows(t, bi);
    a.swap_cols(t, bj);
    v.swap_cols(t, bj);
    const Int pv = pow(p, static_cast<unsigned long>(best));
    const Int unit_inv = inverse_mod(Int(a(t, t) / pv), q);
    for (std::size_t j = 0; j < c; ++j) a(t, j) *= unit_inv;
    for (std::size_t j = 0; j < r; ++j) u(t, j) *= unit_inv;
    reduce_row(a, t);
    reduce_row(u, t);
    for (std::size_t i = t + 1; i < r; ++i) {
      if (a(i, t) == 0) continue;
      const Int f = a(i, t) / pv;
      for (std::size_t j = 0; j < c; ++j) a(i, j) -= f * a(t, j);
      for (std::size_t j = 0; j < r; ++j) u(i, j) -= f * u(t, j);
      reduce_row(a, i);
      reduce_row(u, i);
    }
    for (std::size_t j = t + 1; j < c; ++j) {
      if (a(t, j) == 0) continue;
      const Int f = a(t, j) / pv;
      for (std::size_t i = 0; i < r; ++i) a(i, j) -= f * a(i, t);
      for (std::size_t i = 0; i < c; ++i) v(i, j) -= f * v(i, t);
      reduce_col(a, j);
      reduce_col(v, j);
    }
  }
  PadicSmith out{PadicMatrix(p, e, u), PadicMatrix(p, e, a), PadicMatrix(p, e, v), {}};
  for (std::size_t t = 0; t < steps; ++t) out.valuations.push_back(out.d.at(t, t).valuation());
  return out;
}

// ---- polynomials ---------------------------------------------------------

Poly::Poly(std::size_t vars, std::vector<Monomial> terms) : vars_(vars) {
  std::map<std::vector<int>, Int> acc;
  for (auto& t : terms) {
    if (t.exps.size() != vars) throw PreconditionError("monomial exponent vector has the wrong length");
    for (int x : t.exps)
      if (x < 0) throw PreconditionError("negative exponent");
    acc[t.exps] += t.coef;
  }
  for (auto& [ex, c] : acc)
    if (c != 0) terms_.push_back({c, ex});
}

Poly Poly::variable(std::size_t vars, std::size_t i) {
  std::vector<int> ex(vars, 0);
  ex.at(i) = 1;
  return Poly(vars, {{Int(1), ex}});
}

Poly Poly::constant(std::size_t vars, const Int& c) { return Poly(vars, {{c, std::vector<int>(vars, 0)}}); }

int Poly::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int x : t.exps) s += x;
    d = std::max(d, s);
  }
  return d;
}

Int Poly::height() const {
  Int h = 0;
  for (const auto& t : terms_) h = std::max(h, abs(t.coef));
  return h;
}

Int Poly::eval(const IntVector& x) const {
  if (x.size() != vars_) throw PreconditionError("point has the wrong number of coordinates");
  Int s = 0;
  for (const auto& t : terms_) {
    Int m = t.coef;
    for (std::size_t i = 0; i < vars_; ++i)
      if (t.exps[i] > 0) m *= pow(x[i], static_cast<unsigned long>(t.exps[i]));
    s += m;
  }
  return s;
}

Poly Poly::derivative(std::size_t i) const {
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exps.at(i) == 0) continue;
    Monomial m = t;
    m.coef *= t.exps[i];
    --m.exps[i];
    out.push_back(std::move(m));
  }
  return Poly(vars_, std::move(out));
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.vars_ != b.vars_) throw PreconditionError("polynomials in different numbers of variables");
  std::vector<Monomial> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Poly(a.vars_, std::move(t));
}

Poly operator-(const Poly& a, const Poly& b) {
  if (a.vars_ != b.vars_) throw PreconditionError("polynomials in different numbers of variables");
  std::vector<Monomial> t = a.terms_;
  for (auto m : b.terms_) {
    m.coef = -m.coef;
    t.push_back(std::move(m));
  }
  return Poly(a.vars_, std::move(t));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.vars_ != b.vars_) throw PreconditionError("polynomials in different numbers of variables");
  std::vector<Monomial> t;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      Monomial m{x.coef * y.coef, x.exps};
      for (std::size_t i = 0; i < m.exps.size(); ++i) m.exps[i] += y.exps[i];
      t.push_back(std::move(m));
    }
  return Poly(a.vars_, std::move(t));
}

PolySystem::PolySystem(std::size_t v, std::vector<Poly> f) : vars(v), polys(std::move(f)) {
  if (polys.empty()) throw PreconditionError("empty polynomial system");
  for (const auto& g : polys)
    if (g.vars() != vars) throw PreconditionError("polynomial system mixes numbers of variables");
}

int PolySystem::degree() const {
  int d = 0;
  for (const auto& g : polys) d = std::max(d, g.degree());
  return d;
}

Int PolySystem::height() const {
  Int h = 0;
  for (const auto& g : polys) h = std::max(h, g.height());
  return h;
}

IntVector PolySystem::eval(const IntVector& x) const {
  IntVector out;
  for (const auto& g : polys) out.push_back(g.eval(x));
  return out;
}

IntMatrix PolySystem::jacobian(const IntVector& x) const {
  IntMatrix j(polys.size(), vars);
  for (std::size_t a = 0; a < polys.size(); ++a)
    for (std::size_t b = 0; b < vars; ++b) j(a, b) = polys[a].derivative(b).eval(x);
  return j;
}

int min_valuation(const IntVector& values, const Int& p, int cap) {
  int v = cap;
  for (const auto& x : values)
    if (x != 0) v = std::min(v, valuation(x, p));
  return v;
}

// ---- Newton --------------------------------------------------------------

namespace {

IntMatrix select_columns(const IntMatrix& a, const std::vector<std::size_t>& cols) {
  IntMatrix s(a.rows(), cols.size());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = a(i, cols[j]);
  return s;
}

int margin_on(const PolySystem& f, const IntVector& x, const Int& p, const std::vector<std::size_t>& cols) {
  Int d = zla::det(select_columns(f.jacobian(x), cols));
  if (d == 0) throw MarginError("margin violated: the Jacobian is singular at the starting point");
  return valuation(d, p);
}

// Newton moving only the variables in `cols` (|cols| = number of equations).
IntVector newton_on(const PolySystem& f, const IntVector& x0, const Int& p, int target_e,
                    const std::vector<std::size_t>& cols) {
  check_prime_precision(p, std::max(target_e, 1));
  if (x0.size() != f.vars) throw PreconditionError("starting point has the wrong number of coordinates");
  const int k = margin_on(f, x0, p, cols);
  const int start = min_valuation(f.eval(x0), p, 2 * k + 1);
  if (start < 2 * k + 1)
    throw MarginError("margin violated: f(x0) has valuation " + std::to_string(start) + " but 2k+1 = " +
                      std::to_string(2 * k + 1) + " is needed");
  const int out_e = std::max(target_e, k + 1);
  const Int out_mod = pow(p, static_cast<unsigned long>(out_e));
  const Int work = pow(p, static_cast<unsigned long>(out_e + 2 * k + 2));
  IntVector x = x0;
  for (int iter = 0; iter < 128; ++iter) {
    IntVector fx = f.eval(x);
    if (min_valuation(fx, p, target_e) >= target_e) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i] + mod(x[i] - x0[i], out_mod);
      return x;
    }
    RatMatrix jinv = zla::inverse(zla::to_rat(select_columns(f.jacobian(x), cols)));
    for (std::size_t a = 0; a < cols.size(); ++a) {
      Rat step = 0;
      for (std::size_t b = 0; b < fx.size(); ++b) step += jinv(a, b) * Rat(fx[b]);
      step.canonicalize();
      x[cols[a]] = mod(x[cols[a]] - residue_of(step, work), work);
    }
  }
  throw PrecisionError("Newton iteration did not reach the target precision");
}

std::vector<std::size_t> all_columns(std::size_t m) {
  std::vector<std::size_t> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = i;
  return c;
}

}  // namespace

int newton_margin(const PolySystem& f, const IntVector& x0, const Int& p) {
  if (f.polys.size() != f.vars) throw PreconditionError("newton_lift needs as many equations as variables");
  return margin_on(f, x0, p, all_columns(f.vars));
}

IntVector newton_lift(const PolySystem& f, const IntVector& x0, const Int& p, int target_e) {
  if (f.polys.size() != f.vars) throw PreconditionError("newton_lift needs as many equations as variables");
  if (target_e < 1) throw PreconditionError("target precision must be >= 1");
  return newton_on(f, x0, p, target_e, all_columns(f.vars));
}

// ---- Greenberg lifting -----------------------------------------------------

namespace {

int agreement_of(const IntVector& a, const IntVector& b, const Int& p, int cap) {
  IntVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return min_valuation(d, p, cap);
}

// Columns of the r x m Jacobian whose r x r minor has the smallest valuation,
// or nothing when every such minor vanishes.
std::optional<std::pair<std::vector<std::size_t>, int>> best_columns(const IntMatrix& j, const Int& p) {
  const std::size_t r = j.rows(), m = j.cols();
  if (r > m) return std::nullopt;
  std::optional<std::pair<std::vector<std::size_t>, int>> best;
  std::vector<std::size_t> pick = all_columns(r);
  for (;;) {
    Int d = zla::det(select_columns(j, pick));
    if (d != 0) {
      int v = valuation(d, p);
      if (!best || v < best->second) best = std::make_pair(pick, v);
    }
    std::size_t i = r;
    while (i > 0 && pick[i - 1] == m - r + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t a = i; a < r; ++a) pick[a] = pick[a - 1] + 1;
  }
  return best;
}

class DigitSearch {
 public:
  DigitSearch(const PolySystem& f, const IntVector& w, const Int& p, int top, std::uint64_t budget)
      : f_(f), w_(w), p_(p), top_(top), budget_(budget) {
    const std::uint64_t pp = to_i64(p);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < f.vars; ++i) {
      count *= pp;
      if (count > 1000000) throw ResourceError("digit search: p^m exceeds 10^6");
    }
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::int64_t> d(f.vars);
      std::uint64_t z = idx;
      for (std::size_t i = f.vars; i-- > 0;) {
        d[i] = static_cast<std::int64_t>(z % pp);
        z /= pp;
      }
      digits_.push_back(std::move(d));
    }
  }

  std::uint64_t nodes = 0;
  bool exhausted = false;

  std::optional<IntVector> run(int c) {
    IntVector x(w_.size());
    const Int pc = pow(p_, static_cast<unsigned long>(c));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(w_[i], pc);
    return dfs(x, c);
  }

 private:
  std::optional<IntVector> dfs(const IntVector& x, int level) {
    if (++nodes > budget_) {
      exhausted = true;
      return std::nullopt;
    }
    if (level == top_) return x;
    const Int pl = pow(p_, static_cast<unsigned long>(level));
    const Int next = pl * p_;
    std::vector<std::int64_t> own(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) own[i] = to_i64(mod(w_[i] / pl, p_));
    // digits closest to w's own digit first (Hamming distance), then lex
    std::vector<std::pair<int, std::size_t>> order;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      int h = 0;
      for (std::size_t a = 0; a < own.size(); ++a) h += digits_[i][a] != own[a];
      order.emplace_back(h, i);
    }
    std::stable_sort(order.begin(), order.end());
    for (const auto& [h, i] : order) {
      IntVector y = x;
      for (std::size_t a = 0; a < y.size(); ++a) y[a] += pl * digits_[i][a];
      bool ok = true;
      for (const auto& g : f_.polys)
        if (mod(g.eval(y), next) != 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (auto r = dfs(y, level + 1)) return r;
      if (exhausted) return std::nullopt;
    }
    return std::nullopt;
  }

  const PolySystem& f_;
  const IntVector& w_;
  Int p_;
  int top_;
  std::uint64_t budget_;
  std::vector<std::vector<std::int64_t>> digits_;
};

}  // namespace

GreenbergResult greenberg_lift(const PolySystem& f, const IntVector& w, const Int& p, int k, std::uint64_t budget) {
  check_prime_precision(p, k);
  if (w.size() != f.vars) throw PreconditionError("point has the wrong number of coordinates");
  if (min_valuation(f.eval(w), p, k) < k) throw PreconditionError("f(w) is not 0 mod p^k");
  GreenbergResult res;
  res.working_e = 3 * k;
  const int top = res.working_e;
  const Int q = pow(p, static_cast<unsigned long>(top));
  IntVector w0 = w;
  for (auto& c : w0) c = mod(c, q);
  auto finish = [&](IntVector x, const char* method) {
    res.agreement = agreement_of(x, w0, p, top);
    if (res.agreement > 0) res.exponent = Rat(k, res.agreement);
    res.w = std::move(x);
    res.method = method;
    return res;
  };

  const int now = min_valuation(f.eval(w0), p, top);
  if (now >= top) return finish(w0, "unchanged");

  // smooth locus: Newton on the best-conditioned set of variables
  if (auto cols = best_columns(f.jacobian(w0), p); cols && now >= 2 * cols->second + 1) {
    if (f.polys.size() == f.vars) return finish(newton_lift(f, w0, p, top), "newton");
    IntVector x = newton_on(f, w0, p, top, cols->first);
    for (auto& c : x) c = mod(c, q);
    return finish(std::move(x), "newton");
  }

  DigitSearch search(f, w0, p, top, budget);
  for (int c = std::min(k, top); c >= 1; --c) {
    auto x = search.run(c);
    res.nodes = search.nodes;
    if (x) return finish(std::move(*x), "search");
    if (search.exhausted) {
      res.budget_exhausted = true;
      return res;
    }
  }
  return res;
}

// ---- k-generation ----------------------------------------------------------

RatMatrix nilpotent_exp(const IntMatrix& n, const Rat& t) {
  if (!n.square()) throw PreconditionError("nilpotent_exp needs a square matrix");
  const std::size_t dim = n.rows();
  RatMatrix a = zla::to_rat(n), term = RatMatrix::identity(dim), out = RatMatrix::identity(dim);
  Rat c = 1;
  for (std::size_t j = 1; j < dim + 1; ++j) {
    term = term * a;
    bool zero = true;
    for (const auto& x : term.data()) zero = zero && x == 0;
    if (zero) return out;
    c = c * t / Rat(static_cast<long>(j));
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t s = 0; s < dim; ++s) out(r, s) += c * term(r, s);
  }
  throw PreconditionError("matrix is not nilpotent");
}

namespace {

bool p_integral(const RatMatrix& a, const Int& p) {
  for (const auto& x : a.data())
    if (Int(x.get_den()) % p == 0) return false;
  return true;
}

// min v_p over m-minors of the derivative at t, or nothing when rank < m.
std::optional<int> minor_valuation_at(const std::vector<IntMatrix>& v, const IntVector& t, const Int& p,
                                      std::size_t m_dim) {
  const std::size_t s = v.size(), n = v[0].rows();
  std::vector<RatMatrix> ex;
  for (std::size_t i = 0; i < s; ++i) {
    ex.push_back(nilpotent_exp(v[i], Rat(t[i])));
    if (!p_integral(ex.back(), p)) throw UnresolvedError("exp of a nilpotent has a non p-integral entry");
  }
  std::vector<RatMatrix> prefix(s + 1, RatMatrix::identity(n)), suffix(s + 1, RatMatrix::identity(n));
  for (std::size_t i = 0; i < s; ++i) prefix[i + 1] = prefix[i] * ex[i];
  for (std::size_t i = s; i-- > 0;) suffix[i] = ex[i] * suffix[i + 1];
  RatMatrix d(n * n, s);
  for (std::size_t i = 0; i < s; ++i) {
    RatMatrix col = prefix[i] * zla::to_rat(v[i]) * ex[i] * suffix[i + 1];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) d(a * n + b, i) = col(a, b);
  }
  Int l = 1;
  for (const auto& x : d.data()) l = lcm(l, Int(x.get_den()));
  IntMatrix di(n * n, s);
  for (std::size_t a = 0; a < n * n; ++a)
    for (std::size_t b = 0; b < s; ++b) {
      Rat x = d(a, b) * Rat(l);
      x.canonicalize();
      di(a, b) = x.get_num();
    }
  zla::SmithForm sf = zla::smith(di);
  if (sf.rank < m_dim) return std::nullopt;
  int k = 0;
  auto inv = sf.invariant_factors();
  for (std::size_t i = 0; i < m_dim; ++i) k += valuation(inv[i], p);
  return k;
}

// value order 0, 1, -1, 2, -2, ...
std::int64_t nth_value(std::int64_t i) { return i == 0 ? 0 : (i % 2 ? (i + 1) / 2 : -(i / 2)); }

std::vector<IntVector> grid(std::size_t s, std::int64_t max_height, std::uint64_t budget) {
  std::vector<IntVector> out;
  if (budget == 0) return out;
  out.push_back(IntVector(s, Int(0)));
  for (std::int64_t h = 1; h <= max_height && out.size() < budget; ++h) {
    const std::int64_t width = 2 * h + 1;
    std::vector<std::int64_t> idx(s, 0);
    for (;;) {
      bool top = false;
      for (auto i : idx) top = top || i >= 2 * h - 1;
      if (top) {
        IntVector t(s);
        for (std::size_t a = 0; a < s; ++a) t[a] = Int(static_cast<long>(nth_value(idx[a])));
        out.push_back(std::move(t));
        if (out.size() >= budget) return out;
      }
      std::size_t a = s;
      while (a > 0 && idx[a - 1] == width - 1) idx[--a] = 0;
      if (a == 0) break;
      ++idx[a - 1];
    }
  }
  return out;
}

}  // namespace

KGeneration k_generation_check(const std::vector<IntMatrix>& v, const Int& p, std::size_t m_dim, std::uint64_t budget) {
  if (v.empty()) throw PreconditionError("need at least one nilpotent matrix");
  check_prime_precision(p, 1);
  const std::size_t n = v[0].rows();
  for (const auto& x : v) {
    if (!x.square() || x.rows() != n) throw PreconditionError("nilpotents must be square of equal size");
    IntMatrix pw = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) pw = pw * x;
    for (const auto& c : pw.data())
      if (c != 0) throw PreconditionError("input matrix is not nilpotent");
  }
  if (p <= Int(static_cast<unsigned long>(n))) throw PreconditionError("k-generation check needs p > n");
  if (m_dim == 0) throw PreconditionError("m_dim must be positive");
  KGeneration out;
  if (m_dim > v.size() || m_dim > n * n) return out;

  // entries up to d^s with d the degree of each exponential factor
  const std::size_t s = v.size();
  std::int64_t hmax = 1;
  const std::int64_t d = std::max<std::int64_t>(2, static_cast<std::int64_t>(n) - 1);
  for (std::size_t i = 0; i < s && hmax < (std::int64_t{1} << 40); ++i) hmax *= d;
  const auto pts = grid(s, hmax, budget);
  out.points = pts.size();

  struct Best {
    std::optional<int> k;
    std::size_t idx = 0;
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
  const std::size_t chunk = (pts.size() + workers - 1) / workers;
  std::vector<std::future<Best>> jobs;
  for (std::size_t w = 0; w < workers && w * chunk < pts.size(); ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      Best b;
      for (std::size_t i = w * chunk; i < std::min(pts.size(), (w + 1) * chunk); ++i) {
        auto k = minor_valuation_at(v, pts[i], p, m_dim);
        if (k && (!b.k || *k < *b.k)) {
          b.k = k;
          b.idx = i;
          if (*k == 0) break;
        }
      }
      return b;
    }));
  }
  Best best;
  for (auto& j : jobs) {
    Best b = j.get();
    if (b.k && (!best.k || *b.k < *best.k)) best = b;
  }
  if (best.k) {
    out.k = best.k;
    out.witness = pts[best.idx];
  }
  return out;
}

}  // namespace qlat
