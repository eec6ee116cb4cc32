#include "tdisp/pair.hpp"

#include "tdisp/error.hpp"

namespace tdisp {

namespace {

WMatrix columns(const WMatrix& m, const std::vector<std::size_t>& idx) {
  WMatrix r(m.rows, idx.size());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = m(i, idx[j]);
  return r;
}

WMatrix hcat(const WMatrix& x, const WMatrix& y) {
  WMatrix r(x.rows, x.cols + y.cols);
  set_block(r, 0, 0, x);
  set_block(r, 0, x.cols, y);
  return r;
}

}  // namespace

Quintuple quintuple_of(const Display& D) {
  const WittRing& W = D.W();
  WMatrix I = identity(W, D.h());
  return Quintuple{D.witt(), scale_rows(W, I, D.l(), D.h(), W.p()), scale_rows(W, I, 0, D.l(), W.p()), D.matrix()};
}

CheckResult check_quintuple(const Quintuple& X) {
  const WittRing& W = *X.W;
  const FiniteRing& k = W.base();
  if (!k.is_field() || !k.is_perfect()) return CheckResult::fail("quintuples need a perfect field");
  const int h = X.h();
  WMatrix pI = scale(W, W.p(), identity(W, h));
  if (multiply(W, X.iota, X.eps) != pI) return CheckResult::fail("iota eps != p");
  if (multiply(W, X.eps, X.iota) != pI) return CheckResult::fail("eps iota != p");
  if (!is_invertible(W, X.F1)) return CheckResult::fail("F1 is not bijective");
  RMatrix i1 = residue(W, X.iota), e1 = residue(W, X.eps);
  if (!same_column_space(k, kernel_basis(k, i1), e1)) return CheckResult::fail("level-1 exactness: Ker(iota) != Im(eps)");
  if (!same_column_space(k, kernel_basis(k, e1), i1)) return CheckResult::fail("level-1 exactness: Ker(eps) != Im(iota)");
  return {};
}

NormalDecomposition normal_decompose(const Quintuple& X) {
  if (auto c = check_quintuple(X); !c) throw PreconditionError("not a truncated pair: " + c.reason);
  const WittRing& W = *X.W;
  const FiniteRing& k = W.base();
  const std::size_t h = static_cast<std::size_t>(X.h());

  // T: greedy standard vectors completing the residue image of iota.
  RMatrix span = residue(W, X.iota);
  std::size_t r = rank(k, span);
  std::vector<std::size_t> t_idx, l_idx;
  for (std::size_t j = 0; j < h; ++j) {
    RMatrix ext(h, span.cols + 1);
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t c = 0; c < span.cols; ++c) ext(i, c) = span(i, c);
      ext(i, span.cols) = i == j ? k.one() : k.zero();
    }
    if (rank(k, ext) > r) {
      span = ext;
      ++r;
      t_idx.push_back(j);
    } else {
      l_idx.push_back(j);
    }
  }
  NormalDecomposition nd;
  nd.d = static_cast<int>(t_idx.size());
  nd.T = columns(identity(W, h), t_idx);

  // L: iota(y) = e_j exactly when possible, else up to a T component.
  nd.L = WMatrix(h, l_idx.size(), W.zero());
  const WMatrix iota_t = hcat(X.iota, nd.T);
  for (std::size_t c = 0; c < l_idx.size(); ++c) {
    std::vector<WElem> e(h, W.zero());
    e[l_idx[c]] = W.one();
    auto y = solve(W, X.iota, e);
    if (!y) {
      auto yc = solve(W, iota_t, e);
      if (!yc) throw VerificationFailure("normal decomposition: no lift of a standard vector");
      y = std::vector<WElem>(yc->begin(), yc->begin() + static_cast<long>(h));
    }
    for (std::size_t i = 0; i < h; ++i) nd.L(i, c) = (*y)[i];
  }

  nd.B = hcat(multiply(W, X.iota, nd.L), nd.T);
  if (!is_invertible(W, nd.B)) throw VerificationFailure("normal decomposition: iota(L) + T is not P");
  if (!is_invertible(W, hcat(nd.L, multiply(W, X.eps, nd.T))))
    throw VerificationFailure("normal decomposition: L + eps(T) is not Q");

  // Psi = F1 on L, F = F1 eps on T.
  WMatrix psi = hcat(multiply(W, X.F1, frobenius(W, nd.L)), multiply(W, X.F1, frobenius(W, multiply(W, X.eps, nd.T))));
  nd.M = multiply(W, inverse(W, nd.B), psi);
  return nd;
}

}  // namespace tdisp
