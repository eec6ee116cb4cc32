#include "tdisp/hom.hpp"

#include <algorithm>
#include <random>

#include "tdisp/additive.hpp"
#include "tdisp/error.hpp"

namespace tdisp {

namespace {

void check_compatible(const Display& D1, const Display& D2) {
  if (!D1.ring()->same_as(*D2.ring())) throw PreconditionError("displays over different rings");
  if (D1.level() != D2.level()) throw PreconditionError("displays of different levels");
}

DisplayHom unflatten(const Display& D1, const Display& D2, const std::vector<WElem>& t) {
  DisplayHom g = zero_hom(D1, D2);
  std::size_t k = 0;
  for (WMatrix* m : {&g.A, &g.B, &g.Z, &g.D})
    for (auto& e : m->a) e = t[k++];
  return g;
}

std::vector<WElem> lift_all(const WittRing& W, const WittRing& W1, const std::vector<WElem>& x) {
  std::vector<WElem> r;
  for (auto s : x) {
    auto c = W.coords(s);
    c.push_back(W.base().zero());
    r.push_back(W1.from_coords(c));
  }
  return r;
}

// Explicit map on Q: (l, a) -> (A l + B i(a), C l + D a) with C = v(Z),
// products with ideal elements taken in W_{n+1}.
QElem map_q(const Display& D1, const Display& D2, const DisplayHom& g, const QElem& q) {
  const WittRing& W = D1.W();
  const WittRing& W1 = D1.W_up();
  QElem r = D2.q_zero();
  std::vector<WElem> ia;
  for (auto a : q.a) ia.push_back(restrict_to(W1, W, a));
  for (int i = 0; i < D2.l(); ++i) {
    WElem s = W.zero();
    for (int j = 0; j < D1.l(); ++j) s = W.add(s, W.mul(g.A(i, j), q.l[j]));
    for (int j = 0; j < D1.d(); ++j) s = W.add(s, W.mul(g.B(i, j), ia[j]));
    r.l[i] = s;
  }
  auto l_up = lift_all(W, W1, q.l);
  for (int i = 0; i < D2.d(); ++i) {
    WElem s = W1.zero();
    for (int j = 0; j < D1.l(); ++j) s = W1.add(s, W1.mul(l_up[j], verschiebung(W, W1, g.Z(i, j))));
    for (int j = 0; j < D1.d(); ++j) s = W1.add(s, W1.mul(lift_all(W, W1, {g.D(i, j)})[0], q.a[j]));
    r.a[i] = s;
  }
  return r;
}

// Residue coordinates of (A, D) over F_p.
std::vector<int> residue_vector(const WittRing& W, const DisplayHom& g) {
  std::vector<int> v;
  for (const WMatrix* m : {&g.A, &g.D})
    for (auto e : m->a) {
      auto c = W.base().coords(W.residue(e));
      v.insert(v.end(), c.begin(), c.end());
    }
  return v;
}

bool residue_invertible(const Display& D, const std::vector<int>& v) {
  const FiniteRing& R = D.W().base();
  const int dim = R.dim();
  std::size_t k = 0;
  for (int size : {D.l(), D.d()}) {
    RMatrix m(size, size);
    for (auto& e : m.a) {
      e = R.from_coords(std::vector<int>(v.begin() + k, v.begin() + k + dim));
      k += dim;
    }
    if (!is_invertible(R, m)) return false;
  }
  return true;
}

// F_p-basis of the residue image, with preimages in Hom.
struct ResidueImage {
  std::vector<std::vector<int>> basis;
  std::vector<DisplayHom> preimages;
  int p = 2;
  std::size_t width = 0;  // residue coordinates of (A, D)
};

ResidueImage residue_image(const Display& D, const HomGroup& H) {
  const WittRing& W = D.W();
  const int p = W.p();
  auto inv = [p](int a) {
    for (int b = 1; b < p; ++b)
      if (a * b % p == 1) return b;
    return 0;
  };
  ResidueImage img;
  img.p = p;
  img.width = static_cast<std::size_t>(D.l() * D.l() + D.d() * D.d()) * W.base().dim();
  std::vector<std::size_t> pivots;
  for (const auto& gen : H.generators) {
    auto v = residue_vector(W, gen);
    DisplayHom pre = gen;
    for (std::size_t k = 0; k < img.basis.size(); ++k) {
      int c = v[pivots[k]];
      if (!c) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = ((v[i] - c * img.basis[k][i]) % p + p) % p;
      pre = add(W, pre, scale(W, -c, img.preimages[k]));
    }
    auto it = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
    if (it == v.end()) continue;
    const std::size_t piv = static_cast<std::size_t>(it - v.begin());
    const int s = inv(v[piv]);
    for (auto& x : v) x = x * s % p;
    img.basis.push_back(v);
    img.preimages.push_back(scale(W, s, pre));
    pivots.push_back(piv);
  }
  return img;
}

std::uint64_t checked_pow(int p, std::size_t r, std::uint64_t cap) {
  std::uint64_t t = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (t > cap / static_cast<std::uint64_t>(p)) return cap + 1;
    t *= static_cast<std::uint64_t>(p);
  }
  return t;
}

std::vector<int> combine(const ResidueImage& img, const std::vector<int>& t) {
  std::vector<int> v(img.width, 0);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k])
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + t[k] * img.basis[k][i]) % img.p;
  return v;
}

DisplayHom lift_combination(const Display& D1, const Display& D2, const ResidueImage& img, const std::vector<int>& t) {
  DisplayHom g = zero_hom(D1, D2);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k]) g = add(D1.W(), g, scale(D1.W(), t[k], img.preimages[k]));
  return g;
}

// Digits of t as the k-th tuple in lexicographic order (first coordinate most significant).
std::vector<int> nth_tuple(std::uint64_t idx, std::size_t r, int p) {
  std::vector<int> t(r);
  for (std::size_t k = r; k-- > 0;) {
    t[k] = static_cast<int>(idx % static_cast<std::uint64_t>(p));
    idx /= static_cast<std::uint64_t>(p);
  }
  return t;
}

}  // namespace

WMatrix hom_p_matrix(const WittRing& W, const DisplayHom& g) {
  const std::size_t l2 = g.A.rows, d2 = g.D.rows, l1 = g.A.cols, d1 = g.D.cols;
  WMatrix m(l2 + d2, l1 + d1, W.zero());
  set_block(m, 0, 0, g.A);
  set_block(m, 0, l1, g.B);
  WMatrix iz = g.Z;
  for (auto& e : iz.a) e = ideal_inclusion(W, e);
  set_block(m, l2, 0, iz);
  set_block(m, l2, l1, g.D);
  return m;
}

WMatrix hom_twisted_matrix(const WittRing& W, const DisplayHom& g) {
  const std::size_t l2 = g.A.rows, d2 = g.D.rows, l1 = g.A.cols, d1 = g.D.cols;
  WMatrix m(l2 + d2, l1 + d1, W.zero());
  set_block(m, 0, 0, frobenius(W, g.A));
  set_block(m, 0, l1, scale(W, W.p(), frobenius(W, g.B)));
  set_block(m, l2, 0, g.Z);
  set_block(m, l2, l1, frobenius(W, g.D));
  return m;
}

DisplayHom zero_hom(const Display& D1, const Display& D2) {
  const WElem z = D1.W().zero();
  return DisplayHom{WMatrix(D2.l(), D1.l(), z), WMatrix(D2.l(), D1.d(), z), WMatrix(D2.d(), D1.l(), z),
                    WMatrix(D2.d(), D1.d(), z)};
}

DisplayHom identity_hom(const Display& D) {
  DisplayHom g = zero_hom(D, D);
  g.A = identity(D.W(), D.l());
  g.D = identity(D.W(), D.d());
  return g;
}

bool is_zero(const DisplayHom& g) { return is_zero(g.A) && is_zero(g.B) && is_zero(g.Z) && is_zero(g.D); }

DisplayHom compose(const WittRing& W, const DisplayHom& g, const DisplayHom& gp) {
  auto iv = [&](WMatrix z) {
    for (auto& e : z.a) e = ideal_inclusion(W, e);
    return z;
  };
  DisplayHom r;
  r.A = add(W, multiply(W, g.A, gp.A), multiply(W, g.B, iv(gp.Z)));
  r.B = add(W, multiply(W, g.A, gp.B), multiply(W, g.B, gp.D));
  r.Z = add(W, multiply(W, g.Z, frobenius(W, gp.A)), multiply(W, frobenius(W, g.D), gp.Z));
  r.D = add(W, multiply(W, iv(g.Z), gp.B), multiply(W, g.D, gp.D));
  return r;
}

DisplayHom add(const WittRing& W, const DisplayHom& x, const DisplayHom& y) {
  return DisplayHom{add(W, x.A, y.A), add(W, x.B, y.B), add(W, x.Z, y.Z), add(W, x.D, y.D)};
}

DisplayHom scale(const WittRing& W, long long k, const DisplayHom& x) {
  return DisplayHom{scale(W, k, x.A), scale(W, k, x.B), scale(W, k, x.Z), scale(W, k, x.D)};
}

CheckResult verify_hom(const Display& D1, const Display& D2, const DisplayHom& g) {
  check_compatible(D1, D2);
  const WittRing& W = D1.W();
  auto shape_ok = [](const WMatrix& m, int r, int c) {
    return m.rows == static_cast<std::size_t>(r) && m.cols == static_cast<std::size_t>(c);
  };
  if (!shape_ok(g.A, D2.l(), D1.l()) || !shape_ok(g.B, D2.l(), D1.d()) || !shape_ok(g.Z, D2.d(), D1.l()) ||
      !shape_ok(g.D, D2.d(), D1.d()))
    return CheckResult::fail("hom blocks have the wrong shape");
  const WMatrix gp = hom_p_matrix(W, g);
  for (const auto& q : D1.q_generators()) {
    QElem gq = map_q(D1, D2, g, q);
    if (D2.iota(gq) != apply(W, gp, D1.iota(q))) return CheckResult::fail("hom does not commute with iota");
    if (D2.F1(gq) != apply(W, gp, D1.F1(q))) return CheckResult::fail("hom does not commute with F1");
  }
  for (const auto& x : D1.p_generators())
    if (D2.F(apply(W, gp, x)) != apply(W, gp, D1.F(x))) return CheckResult::fail("hom does not commute with F");
  return {};
}

CheckResult verify_isomorphism(const Display& D1, const Display& D2, const DisplayHom& g) {
  if (D1.h() != D2.h() || D1.d() != D2.d()) return CheckResult::fail("rank or type differ");
  if (auto r = verify_hom(D1, D2, g); !r) return r;
  if (!is_invertible(D1.W(), g.A) || !is_invertible(D1.W(), g.D))
    return CheckResult::fail("A or D is not invertible");
  return {};
}

HomGroup hom_displays(const Display& D1, const Display& D2) {
  check_compatible(D1, D2);
  const WittRing& W = D1.W();
  const Zpn Z(W.p(), W.level());
  const std::size_t dom_entries = static_cast<std::size_t>(D2.h()) * D1.h();
  const std::size_t cod_entries = dom_entries;
  AdditivePresentation dom(W, dom_entries), cod(W, cod_entries);
  const std::size_t ND = dom.generators(), NC = cod.generators();

  // Phi(g) = g_P M1 - M2 g~ is additive in g; Hom = ker Phi.
  auto phi = [&](const DisplayHom& g) {
    WMatrix lhs = multiply(W, hom_p_matrix(W, g), D1.matrix());
    WMatrix rhs = multiply(W, D2.matrix(), hom_twisted_matrix(W, g));
    return sub(W, lhs, rhs).a;
  };
  ZpnMatrix big(NC, ND + NC);
  for (std::size_t gi = 0; gi < ND; ++gi) {
    std::vector<WElem> t(dom_entries, W.zero());
    t[dom.entry_of(gi)] = dom.generator(gi);
    auto col = cod.digits(phi(unflatten(D1, D2, t)));
    for (std::size_t r = 0; r < NC; ++r) big(r, gi) = col[r];
  }
  ZpnMatrix relc = cod.relations(Z);
  for (std::size_t r = 0; r < NC; ++r)
    for (std::size_t c = 0; c < NC; ++c) big(r, ND + c) = relc(r, c);
  ZpnMatrix ker = Z.kernel(big);

  ZpnMatrix reld = dom.relations(Z);
  ZpnMatrix span(ND, ker.cols() + ND);
  for (std::size_t r = 0; r < ND; ++r) {
    for (std::size_t c = 0; c < ker.cols(); ++c) span(r, c) = ker(r, c);
    for (std::size_t c = 0; c < ND; ++c) span(r, ker.cols() + c) = reld(r, c);
  }
  HomGroup H;
  H.log_order = Z.column_span_log_order(span) - (W.level() - 1) * static_cast<int>(ND);
  ZpnMatrix gens = Z.column_span_generators(span);
  for (std::size_t c = 0; c < gens.cols(); ++c) {
    DisplayHom g = unflatten(D1, D2, dom.evaluate(gens.column(c)));
    if (is_zero(g)) continue;
    if (std::find(H.generators.begin(), H.generators.end(), g) != H.generators.end()) continue;
    if (auto r = verify_hom(D1, D2, g); !r) throw VerificationFailure("hom solver produced a non-hom: " + r.reason);
    H.generators.push_back(std::move(g));
  }
  return H;
}

std::optional<DisplayHom> isom_displays(const Display& D1, const Display& D2, const IsomOptions& opt) {
  check_compatible(D1, D2);
  if (D1 == D2) return identity_hom(D1);
  if (D1.h() != D2.h() || D1.d() != D2.d()) return std::nullopt;
  HomGroup H = hom_displays(D1, D2);
  ResidueImage img = residue_image(D1, H);
  const std::size_t r = img.basis.size();
  const int p = img.p;
  auto attempt = [&](const std::vector<int>& t) -> std::optional<DisplayHom> {
    if (!residue_invertible(D1, combine(img, t))) return std::nullopt;
    DisplayHom g = lift_combination(D1, D2, img, t);
    if (auto c = verify_isomorphism(D1, D2, g); !c) throw VerificationFailure("isomorphism certificate rejected: " + c.reason);
    return g;
  };
  const std::uint64_t total = checked_pow(p, r, opt.guard);
  if (total <= opt.guard) {
    for (std::uint64_t idx = 0; idx < total; ++idx)
      if (auto g = attempt(nth_tuple(idx, r, p))) return g;
    return std::nullopt;
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> digit(0, p - 1);
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    std::vector<int> t(r);
    for (auto& x : t) x = digit(rng);
    if (auto g = attempt(t)) return g;
  }
  throw GuardExceeded("isomorphism search space p^" + std::to_string(r) + " exceeds the guard and sampling found no certificate");
}

mpz_class aut_order(const Display& D, const IsomOptions& opt) {
  HomGroup H = hom_displays(D, D);
  ResidueImage img = residue_image(D, H);
  const std::size_t r = img.basis.size();
  const std::uint64_t total = checked_pow(img.p, r, opt.guard);
  if (total > opt.guard) throw GuardExceeded("automorphism count needs p^" + std::to_string(r) + " residue checks");
  std::uint64_t units = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx)
    if (residue_invertible(D, combine(img, nth_tuple(idx, r, img.p)))) ++units;
  mpz_class kernel;
  mpz_ui_pow_ui(kernel.get_mpz_t(), static_cast<unsigned long>(img.p), static_cast<unsigned long>(H.log_order - static_cast<int>(r)));
  return kernel * units;
}

}  // namespace tdisp
