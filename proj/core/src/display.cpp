#include "tdisp/display.hpp"

#include <algorithm>
#include <unordered_set>

#include "tdisp/error.hpp"

namespace tdisp {

namespace {

// Any lift W_n -> W_{n+1}; products with ideal elements do not depend on it.
WElem lift(const WittRing& W, const WittRing& W1, WElem s) {
  auto c = W.coords(s);
  c.push_back(W.base().zero());
  return W1.from_coords(c);
}

std::vector<WElem> additive_generators(const WittRing& W) {
  std::vector<WElem> g;
  for (int j = 0; j < W.level(); ++j)
    for (int b = 0; b < W.base().dim(); ++b) {
      std::vector<RingElem> c(W.level(), W.base().zero());
      c[j] = W.base().basis(b);
      g.push_back(W.from_coords(c));
    }
  return g;
}

std::vector<WElem> vadd(const WittRing& W, const std::vector<WElem>& x, const std::vector<WElem>& y) {
  std::vector<WElem> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = W.add(x[i], y[i]);
  return r;
}

std::vector<WElem> vscale(const WittRing& W, WElem s, const std::vector<WElem>& x) {
  std::vector<WElem> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = W.mul(s, x[i]);
  return r;
}

std::vector<WElem> vfrob(const WittRing& W, const std::vector<WElem>& x) {
  std::vector<WElem> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = W.frobenius(x[i]);
  return r;
}

}  // namespace

Display Display::from_matrix(RingPtr R, int n, int d, WMatrix M) {
  if (M.rows != M.cols) throw PreconditionError("structure matrix must be square");
  if (d < 0 || d > static_cast<int>(M.rows)) throw PreconditionError("type d must satisfy 0 <= d <= h");
  auto W = WittRing::get(R, n);
  auto W1 = WittRing::get(R, n + 1);
  for (auto e : M.a)
    if (e.v >= W->size()) throw PreconditionError("structure matrix entry out of range");
  if (!is_invertible(*W, M)) throw PreconditionError("structure matrix is not invertible over W_n(R)");
  return Display(std::move(R), std::move(W), std::move(W1), d, std::move(M));
}

Display Display::etale_unit(int n, RingPtr R) {
  auto W = WittRing::get(R, n);
  return from_matrix(std::move(R), n, 0, identity(*W, 1));
}

Display Display::mult_unit(int n, RingPtr R) {
  auto W = WittRing::get(R, n);
  return from_matrix(std::move(R), n, 1, identity(*W, 1));
}

QElem Display::q_zero() const {
  return QElem{std::vector<WElem>(l(), W_->zero()), std::vector<WElem>(d_, W1_->zero())};
}

QElem Display::q_add(const QElem& x, const QElem& y) const {
  QElem r{vadd(*W_, x.l, y.l), vadd(*W1_, x.a, y.a)};
  return r;
}

QElem Display::act(WElem s, const QElem& q) const {
  QElem r{vscale(*W_, s, q.l), vscale(*W1_, lift(*W_, *W1_, s), q.a)};
  return r;
}

std::vector<WElem> Display::iota(const QElem& q) const {
  std::vector<WElem> x = q.l;
  for (auto a : q.a) {
    if (W1_->coord(a, 0) != R_->zero()) throw PreconditionError("Q element outside I_{n+1} (x) T");
    x.push_back(restrict_to(*W1_, *W_, a));
  }
  return x;
}

QElem Display::eps(WElem a, const std::vector<WElem>& x) const {
  if (W1_->coord(a, 0) != R_->zero()) throw PreconditionError("eps needs an element of I_{n+1}");
  const WElem ia = restrict_to(*W1_, *W_, a);
  QElem q = q_zero();
  for (int j = 0; j < l(); ++j) q.l[j] = W_->mul(ia, x[j]);
  for (int j = 0; j < d_; ++j) q.a[j] = W1_->mul(lift(*W_, *W1_, x[l() + j]), a);
  return q;
}

std::vector<WElem> Display::F1(const QElem& q) const {
  std::vector<WElem> coef(h());
  for (int j = 0; j < l(); ++j) coef[j] = W_->frobenius(q.l[j]);
  for (int j = 0; j < d_; ++j) coef[l() + j] = f1(*W1_, *W_, q.a[j]);
  return apply(*W_, M_, coef);
}

std::vector<WElem> Display::F(const std::vector<WElem>& x) const {
  std::vector<WElem> coef = vfrob(*W_, x);
  for (int j = 0; j < l(); ++j) coef[j] = W_->scale(W_->p(), coef[j]);
  return apply(*W_, M_, coef);
}

WMatrix Display::fsharp() const { return scale_cols(*W_, M_, 0, l(), W_->p()); }

WMatrix Display::vsharp() const {
  WMatrix V = scale_rows(*W_, inverse(*W_, M_), l(), h(), W_->p());
  if (!verify_vsharp(V)) throw VerificationFailure("V# closed form fails its defining equation");
  return V;
}

bool Display::verify_vsharp(const WMatrix& V, unsigned long long exhaustive_limit) const {
  auto check = [&](const QElem& q) { return apply(*W_, V, F1(q)) == vfrob(*W_, iota(q)); };
  if (q_size() <= exhaustive_limit) {
    for (const auto& q : q_elements())
      if (!check(q)) return false;
    return true;
  }
  for (const auto& q : q_generators())
    if (!check(q)) return false;
  return true;
}

unsigned long long Display::q_size() const {
  unsigned long long s = 1;
  for (int i = 0; i < h(); ++i) {
    if (s > (1ull << 62) / W_->size()) return 1ull << 62;
    s *= W_->size();
  }
  return s;
}

std::vector<QElem> Display::q_generators() const {
  std::vector<QElem> out;
  auto gens = additive_generators(*W_);
  for (int j = 0; j < l(); ++j)
    for (auto g : gens) {
      QElem q = q_zero();
      q.l[j] = g;
      out.push_back(q);
    }
  for (int j = 0; j < d_; ++j)
    for (auto g : gens) {
      QElem q = q_zero();
      q.a[j] = verschiebung(*W_, *W1_, g);
      out.push_back(q);
    }
  return out;
}

std::vector<std::vector<WElem>> Display::p_generators() const {
  std::vector<std::vector<WElem>> out;
  for (int j = 0; j < h(); ++j)
    for (auto g : additive_generators(*W_)) {
      std::vector<WElem> x(h(), W_->zero());
      x[j] = g;
      out.push_back(x);
    }
  return out;
}

std::vector<QElem> Display::q_elements() const {
  const unsigned long long total = q_size();
  if (total > (1ull << 20)) throw GuardExceeded("Q too large to enumerate");
  std::vector<QElem> out;
  out.reserve(total);
  for (unsigned long long idx = 0; idx < total; ++idx) {
    QElem q = q_zero();
    unsigned long long v = idx;
    for (int j = h() - 1; j >= 0; --j) {
      WElem e{static_cast<std::uint32_t>(v % W_->size())};
      v /= W_->size();
      if (j < l())
        q.l[j] = e;
      else
        q.a[j - l()] = verschiebung(*W_, *W1_, e);
    }
    out.push_back(std::move(q));
  }
  return out;
}

CheckResult check_predisplay_axioms(const Display& D) {
  const WittRing& W = D.W();
  const WittRing& W1 = D.W_up();
  for (const auto& q : D.q_generators()) {
    auto lhs = D.F(D.iota(q));
    auto rhs = D.F1(q);
    for (auto& e : rhs) e = W.scale(W.p(), e);
    if (lhs != rhs) return CheckResult::fail("F iota != p F1 on a generator of Q");
  }
  for (auto g : additive_generators(W)) {
    const WElem a = verschiebung(W, W1, g);
    const WElem ia = restrict_to(W1, W, a);
    for (const auto& x : D.p_generators()) {
      QElem e = D.eps(a, x);
      if (D.F1(e) != vscale(W, f1(W1, W, a), D.F(x))) return CheckResult::fail("F1 eps != f1 (x) F");
      if (D.iota(e) != vscale(W, ia, x)) return CheckResult::fail("iota eps is not the multiplication map");
    }
    for (const auto& q : D.q_generators())
      if (D.eps(a, D.iota(q)) != D.act(ia, q)) return CheckResult::fail("eps (1 (x) iota) is not the multiplication map");
  }
  return {};
}

CheckResult check_pair_exactness(const Display& D) {
  const WittRing& W = D.W();
  const WittRing& W1 = D.W_up();
  const FiniteRing& R = D.W().base();
  if (D.q_size() > (1ull << 16)) throw GuardExceeded("pair exactness check limited to |Q| <= 65536");
  auto p_index = [&](const std::vector<WElem>& x) {
    unsigned long long v = 0;
    for (auto e : x) v = v * W.size() + e.v;
    return v;
  };
  unsigned long long r_to_d = 1;
  for (int i = 0; i < D.d(); ++i) r_to_d *= R.size();

  std::unordered_set<unsigned long long> image;
  unsigned long long kernel = 0;
  for (const auto& q : D.q_elements()) {
    auto x = D.iota(q);
    image.insert(p_index(x));
    if (std::all_of(x.begin(), x.end(), [&](WElem e) { return e == W.zero(); })) {
      ++kernel;
      // Kernel elements must come from J_{n+1} (x) T: only the top coordinate survives.
      for (auto a : q.a) {
        auto c = W1.coords(a);
        for (int k = 0; k < W1.level() - 1; ++k)
          if (c[k] != R.zero()) return CheckResult::fail("kernel of iota leaves J_{n+1} (x) T");
      }
    }
  }
  if (kernel != r_to_d) return CheckResult::fail("kernel of iota has the wrong size");
  if (D.q_size() / image.size() != r_to_d || D.q_size() % image.size() != 0)
    return CheckResult::fail("Coker(iota) has the wrong size");
  // x lies in the image iff the residue of its T part vanishes.
  const unsigned long long total = D.q_size();
  for (unsigned long long idx = 0; idx < total; ++idx) {
    std::vector<WElem> x(D.h());
    unsigned long long v = idx;
    for (int j = D.h() - 1; j >= 0; --j) {
      x[j] = WElem{static_cast<std::uint32_t>(v % W.size())};
      v /= W.size();
    }
    bool in_image = image.count(idx) > 0;
    bool residue_zero = true;
    for (int j = D.l(); j < D.h(); ++j) residue_zero = residue_zero && W.residue(x[j]) == R.zero();
    if (in_image != residue_zero) return CheckResult::fail("image of iota differs from the kernel of P -> Coker");
  }
  return {};
}

CheckResult check_vsharp(const Display& D, unsigned long long exhaustive_limit) {
  const WittRing& W = D.W();
  WMatrix V = scale_rows(W, inverse(W, D.matrix()), D.l(), D.h(), W.p());
  if (!D.verify_vsharp(V, exhaustive_limit)) return CheckResult::fail("V#(F1 q) != 1 (x) iota(q)");
  WMatrix pI = scale(W, W.p(), identity(W, D.h()));
  WMatrix Fs = D.fsharp();
  if (multiply(W, Fs, V) != pI) return CheckResult::fail("F# V# != p");
  if (multiply(W, V, Fs) != pI) return CheckResult::fail("V# F# != p");
  return {};
}

bool is_nilpotent(const Display& D) {
  if (D.h() == 0) return true;
  const RMatrix Vbar = residue(D.W(), D.vsharp());
  for (const auto& rho : D.ring()->residue_fields()) {
    const FiniteRing& K = *rho.dst;
    const RMatrix V = apply(rho, Vbar);
    RMatrix acc = V;
    for (int i = 1; i < D.h(); ++i) acc = multiply(K, frobenius(K, V, i), acc);
    if (!is_zero(acc)) return false;
  }
  return true;
}

Display truncate(const Display& D) {
  if (D.level() < 2) throw PreconditionError("cannot truncate below level 1");
  auto Wn = WittRing::get(D.ring(), D.level() - 1);
  return Display::from_matrix(D.ring(), D.level() - 1, D.d(), restrict_to(D.W(), *Wn, D.matrix()));
}

Display base_change(const Display& D, const RingHom& alpha) {
  if (!alpha.src || !alpha.src->same_as(*D.ring())) throw PreconditionError("base change map has the wrong source ring");
  if (!alpha.is_homomorphism()) throw PreconditionError("base change map is not a ring homomorphism");
  auto W2 = WittRing::get(alpha.dst, D.level());
  return Display::from_matrix(alpha.dst, D.level(), D.d(), apply_hom(alpha, D.W(), *W2, D.matrix()));
}

Display direct_sum(const Display& D1, const Display& D2) {
  if (!D1.ring()->same_as(*D2.ring()) || D1.level() != D2.level())
    throw PreconditionError("direct sum needs the same ring and level");
  const int l1 = D1.l(), l2 = D2.l(), d1 = D1.d();
  const int h = D1.h() + D2.h();
  // New basis: L1, L2, T1, T2.
  auto pos1 = [&](int i) { return i < l1 ? i : l1 + l2 + (i - l1); };
  auto pos2 = [&](int i) { return i < l2 ? l1 + i : l1 + l2 + d1 + (i - l2); };
  WMatrix M(h, h, D1.W().zero());
  for (int i = 0; i < D1.h(); ++i)
    for (int j = 0; j < D1.h(); ++j) M(pos1(i), pos1(j)) = D1.matrix()(i, j);
  for (int i = 0; i < D2.h(); ++i)
    for (int j = 0; j < D2.h(); ++j) M(pos2(i), pos2(j)) = D2.matrix()(i, j);
  return Display::from_matrix(D1.ring(), D1.level(), D1.d() + D2.d(), M);
}

}  // namespace tdisp
