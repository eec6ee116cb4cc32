#include "tdisp/zpn.hpp"

#include <algorithm>
#include <utility>

#include "tdisp/error.hpp"

namespace tdisp {

std::vector<long long> ZpnMatrix::column(std::size_t j) const {
  std::vector<long long> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Zpn::Zpn(int p, int n) : p_(p), n_(n), pn_(1) {
  if (n < 1) throw PreconditionError("Z/p^n needs n >= 1");
  for (int i = 0; i < n; ++i) {
    pn_ *= p;
    if (pn_ > (1ll << 30)) throw GuardExceeded("p^n too large for Z/p^n arithmetic");
  }
}

long long Zpn::reduce(long long x) const { return ((x % pn_) + pn_) % pn_; }
long long Zpn::mul(long long a, long long b) const { return reduce(reduce(a) * reduce(b)); }

int Zpn::valuation(long long x) const {
  x = reduce(x);
  if (x == 0) return n_;
  int v = 0;
  while (x % p_ == 0) {
    x /= p_;
    ++v;
  }
  return v;
}

long long Zpn::inverse(long long u) const {
  // Extended Euclid against p^n.
  long long a = reduce(u), m = pn_, x0 = 1, x1 = 0;
  while (m) {
    long long q = a / m;
    a = std::exchange(m, a - q * m);
    x0 = std::exchange(x1, x0 - q * x1);
  }
  if (a != 1) throw PreconditionError("not a unit in Z/p^n");
  return reduce(x0);
}

long long Zpn::pow_p(int e) const {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= p_;
  return reduce(r);
}

ZpnMatrix Zpn::multiply(const ZpnMatrix& x, const ZpnMatrix& y) const {
  ZpnMatrix r(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      long long a = x(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) = reduce(r(i, j) + a * y(k, j));
    }
  return r;
}

Zpn::Smith Zpn::smith(const ZpnMatrix& m) const {
  const std::size_t R = m.rows(), C = m.cols(), K = std::min(R, C);
  ZpnMatrix a = m;
  Smith s{ZpnMatrix(R, R), ZpnMatrix(R, R), ZpnMatrix(C, C), std::vector<int>(K, n_)};
  for (std::size_t i = 0; i < R; ++i) s.U(i, i) = s.Uinv(i, i) = 1;
  for (std::size_t i = 0; i < C; ++i) s.V(i, i) = 1;

  // Row op "row_i += c row_t" on a and U is "col_t -= c col_i" on Uinv.
  auto row_axpy = [&](std::size_t i, std::size_t t, long long c) {
    for (std::size_t j = 0; j < C; ++j) a(i, j) = reduce(a(i, j) + c * a(t, j));
    for (std::size_t j = 0; j < R; ++j) s.U(i, j) = reduce(s.U(i, j) + c * s.U(t, j));
    for (std::size_t r = 0; r < R; ++r) s.Uinv(r, t) = reduce(s.Uinv(r, t) - c * s.Uinv(r, i));
  };
  auto col_axpy = [&](std::size_t j, std::size_t t, long long c) {
    for (std::size_t r = 0; r < R; ++r) a(r, j) = reduce(a(r, j) + c * a(r, t));
    for (std::size_t r = 0; r < C; ++r) s.V(r, j) = reduce(s.V(r, j) + c * s.V(r, t));
  };
  auto row_swap = [&](std::size_t i, std::size_t t) {
    if (i == t) return;
    for (std::size_t j = 0; j < C; ++j) std::swap(a(i, j), a(t, j));
    for (std::size_t j = 0; j < R; ++j) std::swap(s.U(i, j), s.U(t, j));
    for (std::size_t r = 0; r < R; ++r) std::swap(s.Uinv(r, i), s.Uinv(r, t));
  };
  auto col_swap = [&](std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t r = 0; r < R; ++r) std::swap(a(r, j), a(r, t));
    for (std::size_t r = 0; r < C; ++r) std::swap(s.V(r, j), s.V(r, t));
  };
  auto row_scale = [&](std::size_t t, long long u) {
    long long ui = inverse(u);
    for (std::size_t j = 0; j < C; ++j) a(t, j) = mul(a(t, j), u);
    for (std::size_t j = 0; j < R; ++j) s.U(t, j) = mul(s.U(t, j), u);
    for (std::size_t r = 0; r < R; ++r) s.Uinv(r, t) = mul(s.Uinv(r, t), ui);
  };

  for (std::size_t t = 0; t < K; ++t) {
    int best = n_;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < R && best > 0; ++i)
      for (std::size_t j = t; j < C; ++j) {
        int v = valuation(a(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == n_) break;
    row_swap(t, bi);
    col_swap(t, bj);
    const long long pe = pow_p(best);
    row_scale(t, inverse(a(t, t) / pe));
    for (std::size_t i = t + 1; i < R; ++i)
      if (a(i, t)) row_axpy(i, t, reduce(-(a(i, t) / pe)));
    for (std::size_t j = t + 1; j < C; ++j)
      if (a(t, j)) col_axpy(j, t, reduce(-(a(t, j) / pe)));
    s.exps[t] = best;
  }
  return s;
}

ZpnMatrix Zpn::kernel(const ZpnMatrix& a) const {
  Smith s = smith(a);
  const std::size_t C = a.cols();
  std::vector<std::pair<std::size_t, long long>> gens;  // (column of V, multiplier)
  for (std::size_t i = 0; i < C; ++i) {
    int e = i < s.exps.size() ? s.exps[i] : n_;
    if (e == 0) continue;
    gens.emplace_back(i, pow_p(n_ - e));
  }
  ZpnMatrix k(C, gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t r = 0; r < C; ++r) k(r, g) = mul(s.V(r, gens[g].first), gens[g].second);
  // Self-check.
  ZpnMatrix z = multiply(a, k);
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j)
      if (z(i, j)) throw VerificationFailure("Z/p^n kernel self-check failed");
  return k;
}

int Zpn::column_span_log_order(const ZpnMatrix& a) const {
  Smith s = smith(a);
  int total = 0;
  for (int e : s.exps) total += n_ - e;
  return total;
}

ZpnMatrix Zpn::column_span_generators(const ZpnMatrix& a) const {
  Smith s = smith(a);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.exps.size(); ++i)
    if (s.exps[i] < n_) keep.push_back(i);
  ZpnMatrix g(a.rows(), keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    long long pe = pow_p(s.exps[keep[k]]);
    for (std::size_t r = 0; r < a.rows(); ++r) g(r, k) = mul(s.Uinv(r, keep[k]), pe);
  }
  return g;
}

}  // namespace tdisp
