#include "qlat/localrep.hpp"

#include <algorithm>
#include <stdexcept>

#include "qlat/zlinalg.hpp"

namespace qlat {

namespace {

struct Equation {
  std::size_t i, j;
};

std::vector<Equation> equations(std::size_t m) {
  std::vector<Equation> eq;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) eq.push_back({i, j});
  return eq;
}

// E t_j for column j of t.
IntVector e_times_column(const IntMatrix& e, const IntMatrix& t, std::size_t j) {
  IntVector out(e.rows(), Int(0));
  for (std::size_t a = 0; a < e.rows(); ++a)
    for (std::size_t b = 0; b < e.rows(); ++b) out[a] += e(a, b) * t(b, j);
  return out;
}

Int dot(const IntMatrix& t, std::size_t i, const IntVector& v) {
  Int s = 0;
  for (std::size_t a = 0; a < v.size(); ++a) s += t(a, i) * v[a];
  return s;
}

// f_ii = Q_L(t_i) - Q_M(e_i), f_ij = t_i^T E_L t_j - E_M,ij.
IntVector residuals(const IntMatrix& el, const IntMatrix& em, const IntMatrix& t, const std::vector<Equation>& eqs) {
  std::vector<IntVector> et;
  for (std::size_t j = 0; j < t.cols(); ++j) et.push_back(e_times_column(el, t, j));
  IntVector f;
  for (const auto& q : eqs) {
    if (q.i == q.j)
      f.push_back(dot(t, q.i, et[q.i]) / 2 - em(q.i, q.i) / 2);
    else
      f.push_back(dot(t, q.i, et[q.j]) - em(q.i, q.j));
  }
  return f;
}

// Rows: equations; columns: variables t(a, j) at index j*n + a.
IntMatrix jacobian(const IntMatrix& el, const IntMatrix& t, const std::vector<Equation>& eqs) {
  const std::size_t n = t.rows();
  std::vector<IntVector> et;
  for (std::size_t j = 0; j < t.cols(); ++j) et.push_back(e_times_column(el, t, j));
  IntMatrix jac(eqs.size(), n * t.cols(), Int(0));
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    const auto [i, j] = eqs[r];
    for (std::size_t a = 0; a < n; ++a) {
      if (i == j) {
        jac(r, i * n + a) = et[i][a];
      } else {
        jac(r, i * n + a) = et[j][a];
        jac(r, j * n + a) = et[i][a];
      }
    }
  }
  return jac;
}

// Affine solution set of a x = b over F_p: particular solution and a kernel basis.
struct AffineSolutions {
  bool consistent = false;
  IntVector particular;
  std::vector<IntVector> kernel;
};

AffineSolutions solve_mod_p(IntMatrix a, IntVector b, const Int& p) {
  const std::size_t rows = a.rows(), cols = a.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    b[i] = mod(b[i], p);
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = mod(a(i, j), p);
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    a.swap_rows(r, piv);
    std::swap(b[r], b[piv]);
    Int inv = inverse_mod(a(r, c), p);
    for (std::size_t j = 0; j < cols; ++j) a(r, j) = mod(a(r, j) * inv, p);
    b[r] = mod(b[r] * inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Int f = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = mod(a(i, j) - f * a(r, j), p);
      b[i] = mod(b[i] - f * b[r], p);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  AffineSolutions s;
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return s;
  s.consistent = true;
  s.particular.assign(cols, Int(0));
  for (std::size_t k = 0; k < r; ++k) s.particular[pivot_cols[k]] = b[k];
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    IntVector v(cols, Int(0));
    v[free] = 1;
    for (std::size_t k = 0; k < r; ++k) v[pivot_cols[k]] = mod(-a(k, free), p);
    s.kernel.push_back(std::move(v));
  }
  return s;
}

std::size_t rank_mod_p(const IntMatrix& t, const Int& p) {
  IntMatrix a(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) a(i, j) = mod(t(i, j), p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(r, piv);
    Int inv = inverse_mod(a(r, c), p);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Int f = a(i, c) * inv;
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) = mod(a(i, j) - f * a(r, j), p);
    }
    ++r;
  }
  return r;
}

void check_inputs(const QuadLattice& m, const QuadLattice& l, const Int& p) {
  if (m.rank() == 0 || l.rank() == 0) throw PreconditionError("empty lattice");
  if (m.rank() > l.rank()) throw PreconditionError("rank(M) must not exceed rank(L)");
  if (!is_prime(p)) throw PreconditionError("p must be prime");
}

// Node budget for the witness search once the verdict is already known.
constexpr std::uint64_t kWitnessSearchNodes = 20000;

enum class Outcome { certified, dead, undecided };

class LiftSearch {
 public:
  LiftSearch(const QuadLattice& m, const QuadLattice& l, const Int& p, const Caps& caps)
      : el_(l.gram2()), em_(m.gram2()), p_(p), n_(l.rank()), m_(m.rank()), eqs_(equations(m.rank())), caps_(caps) {}

  // Walks the level-one nodes (T mod p with every residual = 0 mod p and rank
  // m mod p) in lexicographic order and lifts each in turn.
  Outcome run(int limit) {
    IntMatrix t(n_, m_, Int(0));
    bool undecided = false;
    Outcome o = extend_root(t, 0, limit, undecided);
    if (o == Outcome::certified) return o;
    return undecided ? Outcome::undecided : Outcome::dead;
  }

  Outcome explore(const IntMatrix& t, int k, int limit) {
    if (++nodes_ > caps_.nodes) throw ResourceError("local lifting search exceeds the node cap");
    IntMatrix jac = jacobian(el_, t, eqs_);
    const int kappa = maximal_minor_valuation(jac, p_, k);
    if (2 * kappa + 1 <= k) {
      witness_ = t;
      e_ = k;
      kappa_ = kappa;
      return Outcome::certified;
    }
    if (k >= limit) return Outcome::undecided;
    const Int pk = pow(p_, static_cast<unsigned long>(k));
    IntVector f = residuals(el_, em_, t, eqs_);
    IntVector rhs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -(f[i] / pk);
    AffineSolutions sol = solve_mod_p(jac, rhs, p_);
    if (!sol.consistent) return Outcome::dead;

    bool undecided = false;
    const std::size_t dim = sol.kernel.size();
    std::vector<Int> coef(dim, Int(0));
    for (;;) {
      IntMatrix child = t;
      for (std::size_t v = 0; v < n_ * m_; ++v) {
        Int d = sol.particular[v];
        for (std::size_t b = 0; b < dim; ++b) d += coef[b] * sol.kernel[b][v];
        child(v % n_, v / n_) += pk * mod(d, p_);
      }
      Outcome o = explore(child, k + 1, limit);
      if (o == Outcome::certified) return o;
      if (o == Outcome::undecided) undecided = true;
      std::size_t b = 0;
      while (b < dim && coef[b] == p_ - 1) coef[b++] = 0;
      if (b == dim) break;
      ++coef[b];
    }
    return undecided ? Outcome::undecided : Outcome::dead;
  }

  const IntMatrix& witness() const { return witness_; }
  int precision() const { return e_; }
  int kappa() const { return kappa_; }

 private:
  Outcome extend_root(IntMatrix& t, std::size_t col, int limit, bool& undecided) {
    if (col == m_) {
      Outcome o = explore(t, 1, limit);
      if (o == Outcome::undecided) undecided = true;
      return o;
    }
    std::vector<Int> digits(n_, Int(0));
    for (;;) {
      if (++nodes_ > caps_.nodes) throw ResourceError("residue enumeration exceeds the node cap");
      for (std::size_t a = 0; a < n_; ++a) t(a, col) = digits[a];
      if (column_ok(t, col) && extend_root(t, col + 1, limit, undecided) == Outcome::certified)
        return Outcome::certified;
      // lexicographic order with the first coordinate most significant
      std::size_t a = n_;
      while (a > 0 && digits[a - 1] == p_ - 1) digits[--a] = 0;
      if (a == 0) break;
      ++digits[a - 1];
    }
    for (std::size_t a = 0; a < n_; ++a) t(a, col) = 0;
    return Outcome::dead;
  }

  bool column_ok(const IntMatrix& t, std::size_t col) {
    IntVector et = e_times_column(el_, t, col);
    if (mod(dot(t, col, et) / 2 - em_(col, col) / 2, p_) != 0) return false;
    for (std::size_t i = 0; i < col; ++i)
      if (mod(dot(t, i, et) - em_(i, col), p_) != 0) return false;
    IntMatrix lead(n_, col + 1);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t j = 0; j <= col; ++j) lead(a, j) = t(a, j);
    return rank_mod_p(lead, p_) == col + 1;
  }

  IntMatrix el_, em_;
  Int p_;
  std::size_t n_, m_;
  std::vector<Equation> eqs_;
  Caps caps_;
  std::uint64_t nodes_ = 0;
  IntMatrix witness_;
  int e_ = 0;
  int kappa_ = -1;
};


// Odd p and a rank one target. Over Z_(p) the form splits as sum d_i x_i^2,
// and primitive solvability reduces to point counts over F_p, peeling one
// factor of p off the target whenever the unimodular part must vanish mod p.

int legendre(const Int& a, const Int& p) {
  Int r = mod(a, p);
  return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

// Tonelli-Shanks; a must be a nonzero square mod p.
Int sqrt_mod(const Int& a0, const Int& p) {
  const Int a = mod(a0, p);
  Int q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  auto powm = [&](const Int& b, const Int& e) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  Int z = 2;
  while (legendre(z, p) != -1) ++z;
  Int c = powm(z, q), x = powm(a, (q + 1) / 2), t = powm(a, q);
  int m = s;
  while (t != 1) {
    int i = 0;
    for (Int u = t; u != 1; u = mod(u * u, p)) ++i;
    Int b = c;
    for (int j = 0; j < m - i - 1; ++j) b = mod(b * b, p);
    x = mod(x * b, p);
    c = mod(b * b, p);
    t = mod(t * c, p);
    m = i;
  }
  return x;
}

Int residue(const Rat& q, const Int& pe) { return mod(q.get_num() * inverse_mod(q.get_den(), pe), pe); }

struct OddSplitting {
  std::vector<Rat> d;  // Q(u x) = sum d_i x_i^2
  RatMatrix u;         // columns: new basis, invertible over Z_(p)
};

OddSplitting split_at_odd_prime(const IntMatrix& e, const Int& p) {
  const std::size_t n = e.rows();
  RatMatrix b(n, n), u = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = Rat(e(i, j)) / 2;
  auto add = [&](std::size_t j, std::size_t s, const Rat& f) {  // e_j += f e_s
    for (std::size_t k = 0; k < n; ++k) b(k, j) += f * b(k, s);
    for (std::size_t k = 0; k < n; ++k) b(j, k) += f * b(s, k);
    for (std::size_t k = 0; k < n; ++k) u(k, j) += f * u(k, s);
  };
  auto swap = [&](std::size_t i, std::size_t j) {
    b.swap_rows(i, j);
    b.swap_cols(i, j);
    u.swap_cols(i, j);
  };
  for (std::size_t s = 0; s < n; ++s) {
    int best = -1;
    std::size_t bi = s, bj = s;
    for (std::size_t i = s; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        if (b(i, j) == 0) continue;
        int v = valuation(b(i, j), p);
        // ties go to the diagonal
        if (best < 0 || v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best < 0) throw PreconditionError("degenerate form");
    if (bi != bj) add(bi, bj, Rat(1));
    swap(s, bi);
    for (std::size_t j = s + 1; j < n; ++j)
      if (b(s, j) != 0) add(j, s, -b(s, j) / b(s, s));
  }
  OddSplitting out{{}, u};
  for (std::size_t i = 0; i < n; ++i) out.d.push_back(b(i, i));
  return out;
}

// Number of x in F_p^r with sum w_i x_i^2 = c, all w_i units.
Int diagonal_points(const std::vector<Int>& w, const Int& c, const Int& p) {
  const std::size_t r = w.size();
  if (r == 0) return Int(c == 0 ? 1 : 0);
  Int d = 1;
  for (const auto& x : w) d = mod(d * x, p);
  const Int sign = ((r / 2) % 2 == 0) ? Int(1) : Int(-1);  // (-1)^floor(r/2)
  const Int top = pow(p, r - 1);
  if (r % 2 == 1) {
    if (c == 0) return top;
    return top + pow(p, (r - 1) / 2) * legendre(sign * c * d, p);
  }
  const int eta = legendre(sign * d, p);
  if (c != 0) return top - pow(p, (r - 2) / 2) * eta;
  return top + (p - 1) * pow(p, (r - 2) / 2) * eta;
}

// Some y over F_p on idx with sum w_i y_i^2 = c (the zero vector allowed).
bool solve_diagonal(const std::vector<std::size_t>& idx, std::size_t from, const std::vector<Int>& w, const Int& c,
                    const Int& p, IntVector& y) {
  if (c == 0) {
    for (std::size_t k = from; k < idx.size(); ++k) y[idx[k]] = 0;
    return true;
  }
  if (from == idx.size()) return false;
  const std::size_t i = idx[from];
  if (from + 1 == idx.size()) {
    const Int a = mod(c * inverse_mod(w[i], p), p);
    if (legendre(a, p) != 1) return false;
    y[i] = sqrt_mod(a, p);
    return true;
  }
  for (Int x = 0; x < p; ++x) {
    y[i] = x;
    if (solve_diagonal(idx, from + 1, w, mod(c - w[i] * x * x, p), p, y)) return true;
  }
  return false;
}

LocalCertificate odd_rank_one(const QuadLattice& l, const Int& t, const Int& p) {
  const std::size_t n = l.rank();
  const IntMatrix& el = l.gram2();
  OddSplitting sp = split_at_odd_prime(el, p);
  std::vector<int> k(n), mult(n, 0);
  std::vector<Rat> unit(n);
  std::vector<Int> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = valuation(sp.d[i], p);
    unit[i] = sp.d[i] / Rat(pow(p, static_cast<unsigned long>(k[i])));
    w[i] = residue(unit[i], p);
  }
  std::vector<bool> in_s(n, true);
  Int tt = t;
  LocalCertificate cert;
  cert.p = p;
  for (int level = 1;; ++level) {
    std::vector<std::size_t> a_idx, a_minus_s, pivots;
    std::vector<Int> wa, wa_minus_s;
    std::optional<std::size_t> outside;
    for (std::size_t i = 0; i < n; ++i) {
      if (k[i] == 0) {
        a_idx.push_back(i);
        wa.push_back(w[i]);
        if (!in_s[i]) {
          a_minus_s.push_back(i);
          wa_minus_s.push_back(w[i]);
        }
      } else if (in_s[i] && !outside) {
        outside = i;
      }
    }
    const Int c = mod(tt, p);
    // primitive points of the unimodular part mod p, given what S requires
    Int avail = diagonal_points(wa, c, p) - (outside ? Int(c == 0 ? 1 : 0) : diagonal_points(wa_minus_s, c, p));
    if (avail > 0) {
      IntVector y(n, Int(0));
      if (outside) y[*outside] = 1;
      for (std::size_t i : a_idx)
        if (outside || in_s[i]) pivots.push_back(i);
      std::optional<std::size_t> pivot;
      for (std::size_t j : pivots) {
        std::vector<std::size_t> rest;
        for (std::size_t i : a_idx)
          if (i != j) rest.push_back(i);
        if (rest.empty()) {
          const Int a = mod(c * inverse_mod(w[j], p), p);
          if (a != 0 && legendre(a, p) == 1) {
            y[j] = sqrt_mod(a, p);
            pivot = j;
          }
        }
        for (Int x = 1; x < p && !pivot && !rest.empty(); ++x) {
          y[j] = x;
          if (solve_diagonal(rest, 0, w, mod(c - w[j] * x * x, p), p, y)) pivot = j;
        }
        if (pivot) break;
        y[j] = 0;
      }
      if (!pivot) throw std::logic_error("point count and search disagree");
      const std::size_t j = *pivot;

      // Hensel on y_j alone: its coefficient is a unit and y_j is a unit
      const int vt = valuation(t, p), vd = valuation(discriminant(l).det_e, p);
      const int big = 2 * (vt + vd) + 6;
      const Int q = pow(p, static_cast<unsigned long>(big));
      Int rest = tt;
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) rest -= pow(p, static_cast<unsigned long>(k[i])) * residue(unit[i], q) * y[i] * y[i];
      const Int target = mod(rest * inverse_mod(residue(unit[j], q), q), q);
      Int yj = y[j];
      for (int prec = 1; prec < big; prec *= 2) yj = mod(yj - (yj * yj - target) * inverse_mod(2 * yj, q), q);
      y[j] = yj;

      IntMatrix tw(n, 1, Int(0));
      for (std::size_t a = 0; a < n; ++a) {
        Int s = 0;
        for (std::size_t i = 0; i < n; ++i) s += residue(sp.u(a, i), q) * pow(p, static_cast<unsigned long>(mult[i])) * y[i];
        tw(a, 0) = mod(s, q);
      }
      const int kappa = maximal_minor_valuation(jacobian(el, tw, equations(1)), p, big);
      const int e = 2 * kappa + 1;
      if (e > big) throw std::logic_error("Hensel margin beyond the working precision");
      const Int qe = pow(p, static_cast<unsigned long>(e));
      for (std::size_t a = 0; a < n; ++a) tw(a, 0) = mod(tw(a, 0), qe);
      cert.e = e;
      cert.witness = tw;
      cert.verdict = true;
      cert.liftable = true;
      cert.kappa = kappa;
      return cert;
    }
    if (c != 0 || !outside) {
      cert.e = level;
      return cert;
    }
    // every unit coordinate must vanish mod p: substitute x = p y there and divide by p
    for (std::size_t i = 0; i < n; ++i) {
      if (k[i] == 0) {
        k[i] = 1;
        ++mult[i];
        in_s[i] = false;
      } else {
        --k[i];
      }
    }
    tt /= p;
  }
}

}  // namespace

int maximal_minor_valuation(const IntMatrix& a0, const Int& p, int e) {
  const Int pe = pow(p, static_cast<unsigned long>(e));
  IntMatrix a = a0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = mod(a(i, j), pe);
  std::vector<bool> row_used(a.rows(), false), col_used(a.cols(), false);
  int total = 0;
  const std::size_t steps = std::min(a.rows(), a.cols());
  for (std::size_t s = 0; s < steps; ++s) {
    int best = e;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (col_used[j] || a(i, j) == 0) continue;
        int v = valuation(a(i, j), p);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    }
    if (best >= e) return e;
    total += best;
    if (total >= e) return e;
    const Int pv = pow(p, static_cast<unsigned long>(best));
    const Int unit_inv = inverse_mod(a(pi, pj) / pv, pe);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == pi || row_used[i] || a(i, pj) == 0) continue;
      Int f = mod((a(i, pj) / pv) * unit_inv, pe);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = mod(a(i, j) - f * a(pi, j), pe);
    }
    row_used[pi] = true;
    col_used[pj] = true;
  }
  return total;
}

Int count_solutions_mod(const QuadLattice& m, const QuadLattice& l, const Int& p, int e, std::uint64_t cap) {
  check_inputs(m, l, p);
  if (e < 1) throw PreconditionError("precision exponent must be positive");
  const std::size_t n = l.rank(), k = m.rank();
  const Int q = pow(p, static_cast<unsigned long>(e));
  if (pow(q, static_cast<unsigned long>(n * k)) > Int(static_cast<unsigned long>(cap)))
    throw ResourceError("p^(e*n*m) exceeds the mod-p cap");
  const IntMatrix& el = l.gram2();
  const IntMatrix& em = m.gram2();

  // Column-by-column: first the vectors with t^T E t = E_M,jj, then the
  // cross conditions against earlier columns.
  auto form = [&](const IntVector& x, const IntVector& y) {
    Int s = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) s += x[a] * el(a, b) * y[b];
    return s;
  };
  std::vector<std::vector<IntVector>> per_col(k);
  {
    IntVector x(n, Int(0));
    for (;;) {
      Int v = form(x, x);
      for (std::size_t j = 0; j < k; ++j)
        if (mod(v - em(j, j), q) == 0) per_col[j].push_back(x);
      std::size_t a = 0;
      while (a < n && x[a] == q - 1) x[a++] = 0;
      if (a == n) break;
      ++x[a];
    }
  }

  std::vector<const IntVector*> chosen(k);
  Int count = 0;
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == k) {
      ++count;
      return;
    }
    for (const IntVector& x : per_col[j]) {
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) ok = mod(form(*chosen[i], x) - em(i, j), q) == 0;
      if (!ok) continue;
      chosen[j] = &x;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return count;
}

int base_precision(const QuadLattice& m, const QuadLattice& l, const Int& p) {
  Int d = 4 * discriminant(l).det_e * discriminant(m).det_e;
  return valuation(d, p) + 3;
}

bool check_local_witness(const QuadLattice& m, const QuadLattice& l, const Int& p, int e, const IntMatrix& t) {
  if (t.rows() != l.rank() || t.cols() != m.rank()) return false;
  const Int q = pow(p, static_cast<unsigned long>(e));
  IntMatrix g = l.pullback(t);
  const IntMatrix& em = m.gram2();
  for (std::size_t i = 0; i < m.rank(); ++i) {
    if (mod(g(i, i) / 2 - em(i, i) / 2, q) != 0) return false;
    for (std::size_t j = i + 1; j < m.rank(); ++j)
      if (mod(g(i, j) - em(i, j), q) != 0) return false;
  }
  return rank_mod_p(t, p) == m.rank();
}

LocalCertificate is_locally_primitively_representable(const QuadLattice& m, const QuadLattice& l, const Int& p,
                                                      const Caps& caps) {
  check_inputs(m, l, p);
  LocalCertificate cert;
  cert.p = p;

  // An exact integral embedding onto the leading basis vectors needs no lifting.
  if (m.rank() <= l.rank()) {
    IntMatrix lead(l.rank(), m.rank(), Int(0));
    for (std::size_t i = 0; i < m.rank(); ++i) lead(i, i) = 1;
    if (l.pullback(lead) == m.gram2()) {
      cert.e = 1;
      cert.witness = lead;
      cert.verdict = true;
      cert.liftable = true;
      cert.kappa = 0;
      return cert;
    }
  }

  // Odd p in rank one: the verdict comes from the splitting. The lifting
  // search below still supplies the lexicographically first witness when it
  // fits in the caps.
  std::optional<LocalCertificate> exact;
  if (m.rank() == 1 && p != 2) {
    exact = odd_rank_one(l, m.gram2()(0, 0) / 2, p);
    if (!exact->verdict) return *exact;
  }

  const int base = base_precision(m, l, p);
  for (int limit = base; limit <= 4 * base + 8; limit *= 2) {
    Caps budget = caps;
    if (exact) budget.nodes = std::min<std::uint64_t>(caps.nodes, kWitnessSearchNodes);
    LiftSearch search(m, l, p, budget);
    Outcome o;
    try {
      o = search.run(limit);
    } catch (const ResourceError&) {
      if (exact) return *exact;
      throw;
    }
    if (exact && o != Outcome::certified) return *exact;
    if (o == Outcome::certified) {
      const Int q = pow(p, static_cast<unsigned long>(search.precision()));
      IntMatrix w = search.witness();
      for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = mod(w(i, j), q);
      cert.e = search.precision();
      cert.witness = w;
      cert.verdict = true;
      cert.liftable = true;
      cert.kappa = search.kappa();
      return cert;
    }
    if (o == Outcome::dead) {
      cert.e = limit;
      return cert;
    }
  }
  throw PrecisionError("local representability undecided after precision escalation at p = " + p.get_str());
}

std::vector<Int> relevant_primes(const QuadLattice& m, const QuadLattice& l) {
  return prime_divisors(2 * discriminant(l).det_e * discriminant(m).det_e);
}

LocalReport locally_primitively_representable_everywhere(const QuadLattice& m, const QuadLattice& l,
                                                         const Caps& caps) {
  if (m.rank() > l.rank()) throw PreconditionError("rank(M) must not exceed rank(L)");
  LocalReport rep;
  rep.verdict = true;
  for (const Int& p : relevant_primes(m, l)) {
    rep.certificates.push_back(is_locally_primitively_representable(m, l, p, caps));
    if (!rep.certificates.back().verdict) rep.verdict = false;
  }
  return rep;
}

LocalCertificate is_locally_representable(const QuadLattice& m, const QuadLattice& l, const Int& p,
                                          const Caps& caps) {
  if (m.rank() != 1) throw PreconditionError("non-primitive local test is implemented for rank one only");
  const Int t = m.gram2()(0, 0) / 2;
  Int scale = 1;
  LocalCertificate cert;
  for (Int s = t;; s /= p * p, scale *= p) {
    cert = is_locally_primitively_representable(QuadLattice::diagonal({s.get_si()}), l, p, caps);
    if (cert.verdict) {
      const int j = valuation(scale, p);
      const Int q = pow(p, static_cast<unsigned long>(cert.e + 2 * j));
      IntMatrix w = *cert.witness;
      for (std::size_t a = 0; a < w.rows(); ++a) w(a, 0) = mod(w(a, 0) * scale, q);
      cert.witness = w;
      cert.e += 2 * j;
      return cert;
    }
    if (s % (p * p) != 0) break;
  }
  return cert;
}

LocalReport locally_representable_everywhere(const QuadLattice& m, const QuadLattice& l, const Caps& caps) {
  LocalReport rep;
  rep.verdict = true;
  for (const Int& p : relevant_primes(m, l)) {
    rep.certificates.push_back(is_locally_representable(m, l, p, caps));
    if (!rep.certificates.back().verdict) rep.verdict = false;
  }
  return rep;
}

}  // namespace qlat
