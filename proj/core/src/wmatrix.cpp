#include "tdisp/wmatrix.hpp"

#include <algorithm>
#include <numeric>

#include "tdisp/error.hpp"

namespace tdisp {

namespace {

void check_perfect_field(const WittRing& W) {
  if (!W.base().is_field() || !W.base().is_perfect())
    throw PreconditionError("operation needs W_n(k) over a perfect field, got " + W.base().name());
}

}  // namespace

WMatrix identity(const WittRing& W, std::size_t n) {
  WMatrix m(n, n, W.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = W.one();
  return m;
}

WMatrix multiply(const WittRing& W, const WMatrix& x, const WMatrix& y) {
  if (x.cols != y.rows) throw PreconditionError("matrix shape mismatch in multiply");
  WMatrix r(x.rows, y.cols, W.zero());
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      WElem a = x(i, k);
      if (a == W.zero()) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) = W.add(r(i, j), W.mul(a, y(k, j)));
    }
  return r;
}

WMatrix add(const WittRing& W, const WMatrix& x, const WMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw PreconditionError("matrix shape mismatch in add");
  WMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = W.add(x.a[i], y.a[i]);
  return r;
}

WMatrix sub(const WittRing& W, const WMatrix& x, const WMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw PreconditionError("matrix shape mismatch in sub");
  WMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = W.sub(x.a[i], y.a[i]);
  return r;
}

WMatrix scale(const WittRing& W, long long k, const WMatrix& x) {
  WMatrix r = x;
  for (auto& e : r.a) e = W.scale(k, e);
  return r;
}

std::vector<WElem> apply(const WittRing& W, const WMatrix& m, const std::vector<WElem>& x) {
  if (x.size() != m.cols) throw PreconditionError("vector length mismatch");
  std::vector<WElem> r(m.rows, W.zero());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r[i] = W.add(r[i], W.mul(m(i, j), x[j]));
  return r;
}

WMatrix transpose(const WMatrix& m) {
  WMatrix r(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
  return r;
}

WMatrix frobenius(const WittRing& W, const WMatrix& m, int times) {
  WMatrix r = m;
  for (auto& e : r.a) e = W.frobenius(e, times);
  return r;
}

WMatrix frobenius_inverse(const WittRing& W, const WMatrix& m, int times) {
  WMatrix r = m;
  for (auto& e : r.a) e = W.frobenius_inverse(e, times);
  return r;
}

RMatrix residue(const WittRing& W, const WMatrix& m) {
  RMatrix r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = W.residue(m.a[i]);
  return r;
}

WMatrix teichmuller(const WittRing& W, const RMatrix& m) {
  WMatrix r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = W.teichmuller(m.a[i]);
  return r;
}

WMatrix restrict_to(const WittRing& from, const WittRing& to, const WMatrix& m) {
  if (to.level() > from.level()) throw PreconditionError("restriction must lower the level");
  WMatrix r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = tdisp::restrict_to(from, to, m.a[i]);
  return r;
}

WMatrix apply_hom(const RingHom& alpha, const WittRing& from, const WittRing& to, const WMatrix& m) {
  if (from.level() != to.level()) throw PreconditionError("base change keeps the level");
  WMatrix r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) {
    auto c = from.coords(m.a[i]);
    for (auto& e : c) e = alpha(e);
    r.a[i] = to.from_coords(c);
  }
  return r;
}

bool is_zero(const WMatrix& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](WElem e) { return e.v == 0; });
}

WMatrix block(const WMatrix& m, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
  WMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = m(r0 + i, c0 + j);
  return b;
}

void set_block(WMatrix& m, std::size_t r0, std::size_t c0, const WMatrix& b) {
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) m(r0 + i, c0 + j) = b(i, j);
}

WMatrix scale_rows(const WittRing& W, const WMatrix& m, std::size_t r0, std::size_t r1, long long k) {
  WMatrix r = m;
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r(i, j) = W.scale(k, m(i, j));
  return r;
}

WMatrix scale_cols(const WittRing& W, const WMatrix& m, std::size_t c0, std::size_t c1, long long k) {
  WMatrix r = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = c0; j < c1; ++j) r(i, j) = W.scale(k, m(i, j));
  return r;
}

WElem determinant(const WittRing& W, const WMatrix& m) {
  if (m.rows != m.cols) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows;
  if (n > 8) throw GuardExceeded("determinant limited to size 8");
  if (n == 0) return W.one();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  WElem det = W.zero();
  do {
    // Sign by counting inversions.
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    WElem t = W.one();
    for (std::size_t i = 0; i < n && t != W.zero(); ++i) t = W.mul(t, m(i, perm[i]));
    det = (inv % 2) ? W.sub(det, t) : W.add(det, t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

bool is_invertible(const WittRing& W, const WMatrix& m) {
  if (m.rows != m.cols) return false;
  return tdisp::is_invertible(W.base(), residue(W, m));
}

WMatrix inverse(const WittRing& W, const WMatrix& m) {
  if (!is_invertible(W, m)) throw PreconditionError("matrix is not invertible over W_n");
  const std::size_t n = m.rows;
  WMatrix y = teichmuller(W, tdisp::inverse(W.base(), residue(W, m)));
  const WMatrix two = scale(W, 2, identity(W, n));
  // The residual I - m y lies in the augmentation ideal and squares each
  // round; that ideal is nilpotent of index <= n.
  for (int it = 0; it <= W.level(); ++it) y = multiply(W, y, sub(W, two, multiply(W, m, y)));
  if (multiply(W, m, y) != identity(W, n)) throw VerificationFailure("Newton inverse did not converge");
  return y;
}

SmithForm smith(const WittRing& W, const WMatrix& m) {
  check_perfect_field(W);
  const std::size_t R = m.rows, C = m.cols, K = std::min(R, C);
  const int n = W.level();
  WMatrix a = m;
  SmithForm s{identity(W, R), identity(W, C), std::vector<int>(K, n)};
  auto swap_rows = [&](WMatrix& x, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < x.cols; ++c) std::swap(x(i, c), x(j, c));
  };
  auto swap_cols = [&](WMatrix& x, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < x.rows; ++r) std::swap(x(r, i), x(r, j));
  };
  for (std::size_t t = 0; t < K; ++t) {
    int best = n;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j) {
        int v = W.valuation(a(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best == n) break;
    swap_rows(a, t, bi);
    swap_rows(s.U, t, bi);
    swap_cols(a, t, bj);
    swap_cols(s.V, t, bj);
    // Normalize the pivot to exactly p^best.
    WElem u = W.inverse(W.divide_by_p_power(a(t, t), best));
    for (std::size_t c = 0; c < C; ++c) a(t, c) = W.mul(u, a(t, c));
    for (std::size_t c = 0; c < R; ++c) s.U(t, c) = W.mul(u, s.U(t, c));
    for (std::size_t i = t + 1; i < R; ++i) {
      WElem q = W.divide_by_p_power(a(i, t), best);
      if (q == W.zero()) continue;
      for (std::size_t c = 0; c < C; ++c) a(i, c) = W.sub(a(i, c), W.mul(q, a(t, c)));
      for (std::size_t c = 0; c < R; ++c) s.U(i, c) = W.sub(s.U(i, c), W.mul(q, s.U(t, c)));
    }
    for (std::size_t j = t + 1; j < C; ++j) {
      WElem q = W.divide_by_p_power(a(t, j), best);
      if (q == W.zero()) continue;
      for (std::size_t r = 0; r < R; ++r) a(r, j) = W.sub(a(r, j), W.mul(q, a(r, t)));
      for (std::size_t r = 0; r < C; ++r) s.V(r, j) = W.sub(s.V(r, j), W.mul(q, s.V(r, t)));
    }
    s.exps[t] = best;
  }
  // Self-check: U m V must be the diagonal form.
  WMatrix d = multiply(W, multiply(W, s.U, m), s.V);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      WElem want = (i == j && i < K && s.exps[i] < n) ? W.pow(W.from_int(W.p()), s.exps[i]) : W.zero();
      if (d(i, j) != want) throw VerificationFailure("Smith normal form self-check failed");
    }
  return s;
}

std::optional<std::vector<WElem>> solve(const WittRing& W, const WMatrix& m, const std::vector<WElem>& b) {
  SmithForm s = smith(W, m);
  auto c = apply(W, s.U, b);
  const int n = W.level();
  std::vector<WElem> y(m.cols, W.zero());
  for (std::size_t i = 0; i < m.rows; ++i) {
    int e = i < s.exps.size() ? s.exps[i] : n;
    if (e == n) {
      if (c[i] != W.zero()) return std::nullopt;
      continue;
    }
    if (W.valuation(c[i]) < e) return std::nullopt;
    y[i] = W.divide_by_p_power(c[i], e);
  }
  auto x = apply(W, s.V, y);
  if (apply(W, m, x) != b) throw VerificationFailure("linear solve over W_n produced a wrong solution");
  return x;
}

}  // namespace tdisp
