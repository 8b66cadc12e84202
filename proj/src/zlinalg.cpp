#include "qlat/zlinalg.hpp"

#include <algorithm>

namespace qlat::zla {

Int det(const IntMatrix& a) {
  if (!a.square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      m.swap_rows(k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        m(i, j) = t / prev;  // exact by Sylvester's identity
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Rat det(const RatMatrix& a) {
  if (!a.square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix m = a;
  Rat d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      m.swap_rows(k, piv);
      d = -d;
    }
    d *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rat f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return d;
}

RatMatrix to_rat(const IntMatrix& a) {
  RatMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j));
  return r;
}

std::size_t rank(const IntMatrix& a) {
  RatMatrix m = to_rat(a);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(r, piv);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      Rat f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

RatMatrix inverse(const RatMatrix& a) {
  if (!a.square()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix m = a, inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) throw PreconditionError("singular matrix has no inverse");
    m.swap_rows(k, piv);
    inv.swap_rows(k, piv);
    Rat s = m(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) /= s;
      inv(k, j) /= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      Rat f = m(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

std::vector<Int> SmithForm::invariant_factors() const {
  std::vector<Int> out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(d(i, i));
  return out;
}

SmithForm smith(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm s{IntMatrix::identity(m), a, IntMatrix::identity(n), 0};
  IntMatrix& d = s.d;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 && (pi == m || abs(d(i, j)) < abs(d(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) {
        s.rank = t;
        return s;
      }
      d.swap_rows(t, pi);
      s.u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      s.v.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Int q = floor_div(d(i, t), d(t, t));
        for (std::size_t j = t; j < n; ++j) d(i, j) -= q * d(t, j);
        for (std::size_t j = 0; j < m; ++j) s.u(i, j) -= q * s.u(t, j);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Int q = floor_div(d(t, j), d(t, t));
        for (std::size_t i = t; i < m; ++i) d(i, j) -= q * d(i, t);
        for (std::size_t i = 0; i < n; ++i) s.v(i, j) -= q * s.v(i, t);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility of the remaining block by the pivot
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      for (std::size_t j = t; j < n; ++j) d(t, j) += d(bad, j);
      for (std::size_t j = 0; j < m; ++j) s.u(t, j) += s.u(bad, j);
    }
    if (d(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < m; ++j) s.u(t, j) = -s.u(t, j);
    }
  }
  s.rank = std::min(m, n);
  while (s.rank > 0 && d(s.rank - 1, s.rank - 1) == 0) --s.rank;
  return s;
}

IntMatrix unimodular_inverse(const IntMatrix& u) {
  RatMatrix inv = inverse(to_rat(u));
  IntMatrix out(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) {
      if (inv(i, j).get_den() != 1) throw PreconditionError("matrix is not unimodular");
      out(i, j) = inv(i, j).get_num();
    }
  return out;
}

IntMatrix column_basis(const IntMatrix& gens) {
  SmithForm s = smith(gens);
  IntMatrix uinv = unimodular_inverse(s.u);
  IntMatrix basis(gens.rows(), s.rank);
  for (std::size_t k = 0; k < s.rank; ++k)
    for (std::size_t i = 0; i < gens.rows(); ++i) basis(i, k) = uinv(i, k) * s.d(k, k);
  return basis;
}

IntMatrix kernel(const IntMatrix& a) {
  SmithForm s = smith(a);
  const std::size_t n = a.cols();
  IntMatrix k(n, n - s.rank);
  for (std::size_t j = s.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - s.rank) = s.v(i, j);
  return k;
}

bool is_primitive(const IntMatrix& t) {
  SmithForm s = smith(t);
  if (s.rank != t.cols()) return false;
  for (const Int& f : s.invariant_factors())
    if (f != 1) return false;
  return true;
}

IntMatrix complete_to_unimodular(const IntVector& x) {
  IntMatrix col(x.size(), 1);
  for (std::size_t i = 0; i < x.size(); ++i) col(i, 0) = x[i];
  SmithForm s = smith(col);
  if (s.rank != 1 || s.d(0, 0) != 1) throw PreconditionError("vector is not primitive");
  IntMatrix w = unimodular_inverse(s.u);
  if (s.v(0, 0) == -1)
    for (std::size_t i = 0; i < w.rows(); ++i) w(i, 0) = -w(i, 0);
  return w;
}

}  // namespace qlat::zla
