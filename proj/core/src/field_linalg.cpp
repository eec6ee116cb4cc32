#include "tdisp/field_linalg.hpp"

#include <algorithm>
#include <numeric>

#include "tdisp/error.hpp"

namespace tdisp {

RMatrix identity(const FiniteRing& R, std::size_t n) {
  RMatrix m(n, n, R.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = R.one();
  return m;
}

RMatrix multiply(const FiniteRing& R, const RMatrix& x, const RMatrix& y) {
  if (x.cols != y.rows) throw PreconditionError("matrix shape mismatch");
  RMatrix z(x.rows, y.cols, R.zero());
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      RingElem a = x(i, k);
      if (a == R.zero()) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) = R.add(z(i, j), R.mul(a, y(k, j)));
    }
  return z;
}

RMatrix apply(const RingHom& h, const RMatrix& m) {
  RMatrix out = m;
  for (auto& e : out.a) e = h(e);
  return out;
}

RMatrix frobenius(const FiniteRing& R, const RMatrix& m, int times) {
  RMatrix out = m;
  for (auto& e : out.a)
    for (int t = 0; t < times; ++t) e = R.frobenius(e);
  return out;
}

bool is_zero(const RMatrix& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](RingElem e) { return e.v == 0; });
}

RingElem determinant(const FiniteRing& R, const RMatrix& m) {
  if (m.rows != m.cols) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows;
  if (n == 0) return R.one();
  if (n > 8) throw GuardExceeded("determinant: size > 8 not supported");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RingElem det = R.zero();
  do {
    // Sign from the inversion count.
    std::size_t inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    RingElem term = R.one();
    for (std::size_t i = 0; i < n && term != R.zero(); ++i) term = R.mul(term, m(i, perm[i]));
    det = (inv % 2) ? R.sub(det, term) : R.add(det, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

bool is_invertible(const FiniteRing& R, const RMatrix& m) {
  return m.rows == m.cols && R.is_unit(determinant(R, m));
}

RMatrix inverse(const FiniteRing& R, const RMatrix& m) {
  RingElem det = determinant(R, m);
  if (!R.is_unit(det)) throw PreconditionError("matrix is not invertible");
  const std::size_t n = m.rows;
  RingElem dinv = R.inverse(det);
  RMatrix out(n, n, R.zero());
  if (n == 1) {
    out(0, 0) = dinv;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // Cofactor C_ji, placed at (i, j).
      RMatrix minor(n - 1, n - 1, R.zero());
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      RingElem cof = determinant(R, minor);
      if ((i + j) % 2) cof = R.neg(cof);
      out(i, j) = R.mul(cof, dinv);
    }
  return out;
}

RMatrix rref(const FiniteRing& K, RMatrix m, std::vector<std::size_t>* pivots) {
  if (!K.is_field()) throw PreconditionError("rref requires a field");
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && m(sel, col) == K.zero()) ++sel;
    if (sel == m.rows) continue;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(row, j), m(sel, j));
    RingElem inv = K.inverse(m(row, col));
    for (std::size_t j = 0; j < m.cols; ++j) m(row, j) = K.mul(m(row, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row || m(i, col) == K.zero()) continue;
      RingElem f = m(i, col);
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = K.sub(m(i, j), K.mul(f, m(row, j)));
    }
    piv.push_back(col);
    ++row;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

std::size_t rank(const FiniteRing& K, const RMatrix& m) {
  std::vector<std::size_t> piv;
  rref(K, m, &piv);
  return piv.size();
}

RMatrix kernel_basis(const FiniteRing& K, const RMatrix& m) {
  std::vector<std::size_t> piv;
  RMatrix e = rref(K, m, &piv);
  std::vector<std::size_t> free;
  for (std::size_t c = 0, k = 0; c < m.cols; ++c) {
    if (k < piv.size() && piv[k] == c)
      ++k;
    else
      free.push_back(c);
  }
  RMatrix ker(m.cols, free.size(), K.zero());
  for (std::size_t f = 0; f < free.size(); ++f) {
    ker(free[f], f) = K.one();
    for (std::size_t r = 0; r < piv.size(); ++r) ker(piv[r], f) = K.neg(e(r, free[f]));
  }
  return ker;
}

RMatrix image_basis(const FiniteRing& K, const RMatrix& m) {
  std::vector<std::size_t> piv;
  rref(K, m, &piv);
  RMatrix out(m.rows, piv.size(), K.zero());
  for (std::size_t j = 0; j < piv.size(); ++j)
    for (std::size_t i = 0; i < m.rows; ++i) out(i, j) = m(i, piv[j]);
  return out;
}

bool same_column_space(const FiniteRing& K, const RMatrix& x, const RMatrix& y) {
  if (x.rows != y.rows) return false;
  RMatrix both(x.rows, x.cols + y.cols, K.zero());
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) both(i, j) = x(i, j);
    for (std::size_t j = 0; j < y.cols; ++j) both(i, x.cols + j) = y(i, j);
  }
  std::size_t rb = rank(K, both);
  return rb == rank(K, x) && rb == rank(K, y);
}

std::optional<std::vector<RingElem>> solve(const FiniteRing& K, const RMatrix& m, const std::vector<RingElem>& b) {
  RMatrix aug(m.rows, m.cols + 1, K.zero());
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = b.at(i);
  }
  std::vector<std::size_t> piv;
  RMatrix e = rref(K, aug, &piv);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<RingElem> x(m.cols, K.zero());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = e(r, m.cols);
  return x;
}

}  // namespace tdisp
