#include "qlat/heights.hpp"

#include <algorithm>

#include "qlat/zlinalg.hpp"

namespace qlat {

namespace {

Int dot(const IntVector& a, const IntVector& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

HeightReport from_squared(const Rat& sq) {
  HeightReport h;
  h.squared = sq;
  h.decimal = sqrt_decimal(sq, 12);
  return h;
}

// Exact LLL (delta = 3/4) on the rows of b.
void lll(std::vector<IntVector>& b) {
  const std::size_t k = b.size();
  if (k < 2) return;
  std::vector<RatVector> star(k);
  std::vector<std::vector<Rat>> mu(k, std::vector<Rat>(k, 0));
  std::vector<Rat> norm(k);
  auto gso = [&] {
    for (std::size_t i = 0; i < k; ++i) {
      star[i].assign(b[i].begin(), b[i].end());
      for (std::size_t j = 0; j < i; ++j) {
        Rat d = 0;
        for (std::size_t t = 0; t < b[i].size(); ++t) d += Rat(b[i][t]) * star[j][t];
        mu[i][j] = d / norm[j];
        for (std::size_t t = 0; t < b[i].size(); ++t) star[i][t] -= mu[i][j] * star[j][t];
      }
      norm[i] = 0;
      for (const auto& x : star[i]) norm[i] += x * x;
    }
  };
  gso();
  std::size_t i = 1;
  while (i < k) {
    for (std::size_t j = i; j-- > 0;) {
      Int r = round_half_up(mu[i][j]);
      if (r == 0) continue;
      for (std::size_t t = 0; t < b[i].size(); ++t) b[i][t] -= r * b[j][t];
      for (std::size_t t = 0; t <= j; ++t) mu[i][t] -= Rat(r) * (t == j ? Rat(1) : mu[j][t]);
    }
    if (norm[i] >= (Rat(3, 4) - mu[i][i - 1] * mu[i][i - 1]) * norm[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      gso();
      i = std::max<std::size_t>(i - 1, 1);
    }
  }
}

// Saturated basis of ker(a) in Z^cols, reduced and sorted, first nonzero
// coordinate of each vector positive.
std::vector<IntVector> saturated_kernel(const IntMatrix& a) {
  IntMatrix k = zla::kernel(a);
  std::vector<IntVector> out;
  for (std::size_t j = 0; j < k.cols(); ++j) out.push_back(k.column(j));
  lll(out);
  for (auto& v : out) {
    auto nz = std::find_if(v.begin(), v.end(), [](const Int& x) { return x != 0; });
    if (nz != v.end() && *nz < 0)
      for (auto& x : v) x = -x;
  }
  std::stable_sort(out.begin(), out.end(), [](const IntVector& x, const IntVector& y) {
    Int nx = dot(x, x), ny = dot(y, y);
    return nx != ny ? nx < ny : x < y;
  });
  return out;
}

IntMatrix columns_of(const std::vector<IntVector>& vs, std::size_t dim) {
  IntMatrix b(dim, vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j) b.set_column(j, vs[j]);
  return b;
}

// rows of the linear system X E + E X^T = 0 on vec(X) (row-major), one per
// pair i <= j
IntMatrix so_constraints(const IntMatrix& e) {
  const std::size_t n = e.rows();
  IntMatrix c(n * (n + 1) / 2, n * n, Int(0));
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++row) {
      // (X E)_{ij} = sum_k X_ik E_kj ; (E X^T)_{ij} = sum_k E_ik X_jk
      for (std::size_t k = 0; k < n; ++k) {
        c(row, i * n + k) += e(k, j);
        c(row, j * n + k) += e(i, k);
      }
    }
  return c;
}

LieBasis finish_lie(const std::vector<IntVector>& vs, std::size_t n) {
  LieBasis out;
  for (const auto& v : vs) {
    IntMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x(i, j) = v[i * n + j];
    out.basis.push_back(std::move(x));
  }
  out.height = from_squared(vs.empty() ? Rat(1) : wedge_height_sq(columns_of(vs, n * n)));
  return out;
}

}  // namespace

HeightReport content(const RatVector& w) {
  Int den = 1, g = 0;
  for (const auto& x : w) den = lcm(den, Int(x.get_den()));
  IntVector u;
  for (const auto& x : w) {
    Rat y = x * Rat(den);
    y.canonicalize();
    u.push_back(y.get_num());
    g = gcd(g, u.back());
  }
  if (g == 0) throw PreconditionError("content of the zero vector");
  for (auto& x : u) x /= g;
  // w = alpha * u with alpha = g / den
  const Rat alpha = make_rat(g, den);
  HeightReport h = from_squared(Rat(dot(u, u)));
  h.finite_part = 1 / alpha;
  h.arch_sq = alpha * alpha * Rat(dot(u, u));
  h.primitive = std::move(u);
  return h;
}

Rat wedge_height_sq(const IntMatrix& b) {
  if (b.cols() == 0) return 1;
  Int g = zla::det(b.transpose() * b);
  if (g == 0) throw PreconditionError("wedge of dependent vectors");
  Int f = 1;
  for (const auto& d : zla::smith(b).invariant_factors()) f *= d;
  return make_rat(g, f * f);
}

KernelBasis kernel_basis_integral(const IntMatrix& a) {
  const std::size_t r = zla::rank(a);
  if (r != a.rows())
    throw PreconditionError("matrix is not of full row rank (rank " + std::to_string(r) + " of " +
                            std::to_string(a.rows()) + " rows)");
  if (a.rows() >= a.cols()) throw PreconditionError("kernel basis needs k < l");
  KernelBasis out;
  out.basis = saturated_kernel(a);
  out.product_height_sq = 1;
  for (const auto& v : out.basis) out.product_height_sq *= Rat(dot(v, v));
  return out;
}

LieBasis lie_so(const QuadLattice& q) {
  const std::size_t n = q.rank();
  auto vs = saturated_kernel(so_constraints(q.gram2()));
  if (vs.size() != n * (n - 1) / 2) throw UnresolvedError("Lie algebra has unexpected dimension");
  return finish_lie(vs, n);
}

LieBasis stabilizer_height(const QuadLattice& q, const IntMatrix& w) {
  const std::size_t n = q.rank();
  if (w.rows() != n) throw PreconditionError("subspace basis has the wrong number of rows");
  if (w.cols() > 0 && zla::rank(w) != w.cols()) throw PreconditionError("subspace basis is not independent");
  IntMatrix so = so_constraints(q.gram2());
  // X w = 0 for each column: n equations per column
  IntMatrix c(so.rows() + n * w.cols(), n * n, Int(0));
  for (std::size_t i = 0; i < so.rows(); ++i)
    for (std::size_t j = 0; j < n * n; ++j) c(i, j) = so(i, j);
  for (std::size_t col = 0; col < w.cols(); ++col)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) c(so.rows() + col * n + i, i * n + k) = w(k, col);
  return finish_lie(saturated_kernel(c), n);
}

}  // namespace qlat
