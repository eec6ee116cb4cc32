#include "tdisp/dieudonne.hpp"

#include "tdisp/error.hpp"

namespace tdisp {

namespace {

void require_perfect_field(const FiniteRing& k) {
  if (!k.is_field() || !k.is_perfect())
    throw PreconditionError("Dieudonne modules need a perfect field, got " + k.name());
}

std::vector<WElem> vfrob_inv(const WittRing& W, std::vector<WElem> x) {
  for (auto& e : x) e = W.frobenius_inverse(e);
  return x;
}

std::vector<WElem> vfrob(const WittRing& W, std::vector<WElem> x) {
  for (auto& e : x) e = W.frobenius(e);
  return x;
}

WMatrix block_diag(const WittRing& W, const WMatrix& a, const WMatrix& b) {
  WMatrix m(a.rows + b.rows, a.cols + b.cols, W.zero());
  set_block(m, 0, 0, a);
  set_block(m, a.rows, a.cols, b);
  return m;
}

}  // namespace

DieudonneModule DieudonneModule::make(RingPtr k, int n, WMatrix Fs, WMatrix Vs) {
  require_perfect_field(*k);
  if (Fs.rows != Fs.cols || Vs.rows != Vs.cols || Fs.rows != Vs.rows)
    throw PreconditionError("F and V matrices must be square of the same size");
  auto W = WittRing::get(k, n);
  for (const WMatrix* m : {&Fs, &Vs})
    for (auto e : m->a)
      if (e.v >= W->size()) throw PreconditionError("matrix entry out of range");
  WMatrix pI = scale(*W, W->p(), identity(*W, Fs.rows));
  if (multiply(*W, Fs, Vs) != pI) throw PreconditionError("FV != p");
  if (multiply(*W, Vs, Fs) != pI) throw PreconditionError("VF != p");
  DieudonneModule m(std::move(k), std::move(W), std::move(Fs), std::move(Vs));
  if (auto c = check_level_one(m); !c) {
    if (n == 1) throw PreconditionError("level-1 condition violated: " + c.reason);
    throw VerificationFailure("reduction mod p fails the level-1 condition: " + c.reason);
  }
  return m;
}

int DieudonneModule::d() const { return static_cast<int>(rank(*k_, residue(*W_, F_))); }

std::vector<WElem> DieudonneModule::F(const std::vector<WElem>& x) const { return apply(*W_, F_, vfrob(*W_, x)); }

std::vector<WElem> DieudonneModule::V(const std::vector<WElem>& x) const {
  return vfrob_inv(*W_, apply(*W_, V_, x));
}

DieudonneModule DieudonneModule::transport(const WMatrix& B) const {
  const WittRing& W = *W_;
  WMatrix fB = frobenius(W, B);
  WMatrix F2 = multiply(W, multiply(W, inverse(W, B), F_), fB);
  WMatrix V2 = multiply(W, multiply(W, inverse(W, fB), V_), B);
  return DieudonneModule(k_, W_, std::move(F2), std::move(V2));
}

CheckResult check_level_one(const DieudonneModule& Mod) {
  const FiniteRing& k = *Mod.field();
  RMatrix F1 = residue(Mod.W(), Mod.F_matrix()), V1 = residue(Mod.W(), Mod.V_matrix());
  // Twisting by the bijective f on k preserves kernels and images, so the
  // linearized matrices suffice.
  if (!same_column_space(k, kernel_basis(k, F1), V1)) return CheckResult::fail("Ker F != Im V");
  if (!same_column_space(k, kernel_basis(k, V1), F1)) return CheckResult::fail("Ker V != Im F");
  return {};
}

CheckResult check_fv(const DieudonneModule& Mod) {
  const WittRing& W = Mod.W();
  const int h = Mod.h();
  auto check = [&](const std::vector<WElem>& x) {
    std::vector<WElem> px(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) px[i] = W.scale(W.p(), x[i]);
    return Mod.F(Mod.V(x)) == px && Mod.V(Mod.F(x)) == px;
  };
  unsigned long long total = 1;
  bool small = true;
  for (int i = 0; i < h && small; ++i) {
    total *= W.size();
    small = total <= 4096;
  }
  if (small) {
    for (unsigned long long idx = 0; idx < total; ++idx) {
      std::vector<WElem> x(h);
      unsigned long long v = idx;
      for (int j = h - 1; j >= 0; --j) {
        x[j] = WElem{static_cast<std::uint32_t>(v % W.size())};
        v /= W.size();
      }
      if (!check(x)) return CheckResult::fail("FV = VF = p fails on an element");
    }
    return {};
  }
  // F V and V F are additive; additive generators of M suffice.
  for (int j = 0; j < h; ++j)
    for (int t = 0; t < W.level(); ++t)
      for (int b = 0; b < W.base().dim(); ++b) {
        std::vector<RingElem> c(W.level(), W.base().zero());
        c[t] = W.base().basis(b);
        std::vector<WElem> x(h, W.zero());
        x[j] = W.from_coords(c);
        if (!check(x)) return CheckResult::fail("FV = VF = p fails on a generator");
      }
  return {};
}

DieudonneModule from_display(const Display& D) {
  require_perfect_field(*D.ring());
  return DieudonneModule::make(D.ring(), D.level(), D.fsharp(), D.vsharp());
}

Display canonicalize(const Display& D) {
  const FiniteRing& k = *D.ring();
  if (!k.is_field()) throw PreconditionError("canonical forms are defined over fields");
  if (D.l() == 0 || D.d() == 0) return D;
  const WittRing& W = D.W();
  const int n = W.level(), l = D.l(), d = D.d(), h = D.h();
  const WMatrix& M = D.matrix();
  const WMatrix MT = block(M, 0, l, h, d);
  const RMatrix N = frobenius(k, residue(W, MT), n - 1);

  // Pivot rows: greedy, first rows keeping the row rank growing.
  std::vector<std::size_t> piv;
  for (std::size_t i = 0; i < static_cast<std::size_t>(h) && piv.size() < static_cast<std::size_t>(d); ++i) {
    RMatrix rows(piv.size() + 1, d);
    for (std::size_t r = 0; r <= piv.size(); ++r) {
      std::size_t src = r < piv.size() ? piv[r] : i;
      for (int c = 0; c < d; ++c) rows(r, c) = N(src, c);
    }
    if (rank(k, rows) == piv.size() + 1) piv.push_back(i);
  }
  if (piv.size() != static_cast<std::size_t>(d)) throw VerificationFailure("T columns of M are not independent mod p");
  RMatrix NP(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) NP(r, c) = N(piv[r], c);

  WMatrix out = M;
  for (int j = 0; j < l; ++j) {
    std::vector<RingElem> top(d);
    for (int r = 0; r < d; ++r) top[r] = W.coord(M(piv[r], j), n - 1);
    auto z = solve(k, NP, top);
    if (!z) throw VerificationFailure("canonicalize: singular pivot block");
    // Z_j = v^{n-1}[z]: only the top Witt coordinate is nonzero.
    WMatrix Zj(d, 1, W.zero());
    for (int r = 0; r < d; ++r) {
      std::vector<RingElem> c(n, k.zero());
      c[n - 1] = (*z)[r];
      Zj(r, 0) = W.from_coords(c);
    }
    WMatrix shift = multiply(W, MT, Zj);
    for (int i = 0; i < h; ++i) out(i, j) = W.sub(M(i, j), shift(i, 0));
  }
  for (int r = 0; r < d; ++r)
    for (int j = 0; j < l; ++j)
      if (W.coord(out(piv[r], j), n - 1) != k.zero()) throw VerificationFailure("canonicalize left a pivot entry");
  return Display::from_matrix(D.ring(), n, d, std::move(out));
}

bool is_canonical(const Display& D) { return canonicalize(D) == D; }

DisplayRealization to_display_with_basis(const DieudonneModule& Mod) {
  const WittRing& W = Mod.W();
  Quintuple X{Mod.witt(), frobenius_inverse(W, Mod.V_matrix()), frobenius_inverse(W, Mod.F_matrix()),
              identity(W, Mod.h())};
  NormalDecomposition nd = normal_decompose(X);
  Display D = canonicalize(Display::from_matrix(Mod.field(), Mod.level(), nd.d, nd.M));
  if (!(from_display(D) == Mod.transport(nd.B)))
    throw VerificationFailure("to_display: the display does not recover the module");
  return DisplayRealization{std::move(D), std::move(nd.B)};
}

Display to_display(const DieudonneModule& Mod) { return to_display_with_basis(Mod).display; }

DieudonneModule reduce_mod_p(const DieudonneModule& Mod) {
  if (Mod.level() < 2) throw PreconditionError("reduce_mod_p needs level >= 2");
  auto W1 = WittRing::get(Mod.field(), 1);
  return DieudonneModule::make(Mod.field(), 1, restrict_to(Mod.W(), *W1, Mod.F_matrix()),
                               restrict_to(Mod.W(), *W1, Mod.V_matrix()));
}

DieudonneModule dual(const DieudonneModule& Mod) {
  return DieudonneModule::make(Mod.field(), Mod.level(), transpose(Mod.V_matrix()), transpose(Mod.F_matrix()));
}

DieudonneModule direct_sum(const DieudonneModule& a, const DieudonneModule& b) {
  if (!a.field()->same_as(*b.field()) || a.level() != b.level())
    throw PreconditionError("direct sum needs the same field and level");
  const WittRing& W = a.W();
  return DieudonneModule::make(a.field(), a.level(), block_diag(W, a.F_matrix(), b.F_matrix()),
                               block_diag(W, a.V_matrix(), b.V_matrix()));
}

std::vector<WElem> IsogenyCokernel::reduce(std::vector<WElem> a) const {
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto c = W->coords(a[i]);
    for (int t = exps[i]; t < W->level(); ++t) c[t] = W->base().zero();
    a[i] = W->from_coords(c);
  }
  return a;
}

std::uint32_t IsogenyCokernel::index_of(const std::vector<WElem>& a) const {
  const std::uint32_t q = W->base().size();
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t tail = 1, radix = 1;
    for (int t = exps[i]; t < W->level(); ++t) tail *= q;
    for (int t = 0; t < exps[i]; ++t) radix *= q;
    idx = idx * radix + a[i].v / tail;
  }
  return static_cast<std::uint32_t>(idx);
}

std::uint32_t IsogenyCokernel::add(std::uint32_t x, std::uint32_t y) const {
  std::vector<WElem> s(exps.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = W->add(elements[x][i], elements[y][i]);
  return index_of(reduce(s));
}

std::uint32_t IsogenyCokernel::scale(long long k, std::uint32_t x) const {
  std::vector<WElem> s(exps.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = W->scale(k, elements[x][i]);
  return index_of(reduce(s));
}

std::uint64_t IsogenyCokernel::additive_order(std::uint32_t x) const {
  std::uint64_t m = 1;
  for (std::uint32_t acc = x; acc != 0; acc = add(acc, x)) ++m;
  return m;
}

IsogenyCokernel isogeny_cokernel(const DieudonneModule& N0, const DieudonneModule& N1, const WMatrix& u) {
  if (!N0.field()->same_as(*N1.field()) || N0.level() != N1.level())
    throw PreconditionError("isogeny between modules over different bases");
  const WittRing& W = N1.W();
  const int n = W.level();
  if (u.rows != static_cast<std::size_t>(N1.h()) || u.cols != static_cast<std::size_t>(N0.h()))
    throw PreconditionError("isogeny matrix has the wrong shape");
  if (N0.h() != N1.h()) throw PreconditionError("an isogeny needs equal ranks");
  const WMatrix fu = frobenius(W, u);
  if (multiply(W, u, N0.F_matrix()) != multiply(W, N1.F_matrix(), fu))
    throw PreconditionError("u does not commute with F");
  if (multiply(W, fu, N0.V_matrix()) != multiply(W, N1.V_matrix(), u))
    throw PreconditionError("u does not commute with V");
  SmithForm s = smith(W, u);
  for (int e : s.exps)
    if (e >= n) throw PreconditionError("u is not injective at working precision (invariant factor p^" + std::to_string(e) + ")");

  IsogenyCokernel c;
  c.W = N1.witt();
  c.exps = s.exps;
  std::uint64_t order = 1;
  for (int e : s.exps)
    for (int t = 0; t < e; ++t) {
      order *= W.base().size();
      if (order > (1u << 16)) throw GuardExceeded("isogeny cokernel larger than 65536 elements");
    }
  const std::uint32_t q = W.base().size();
  for (std::uint64_t idx = 0; idx < order; ++idx) {
    std::vector<WElem> a(s.exps.size());
    std::uint64_t v = idx;
    for (std::size_t i = s.exps.size(); i-- > 0;) {
      std::uint64_t radix = 1, tail = 1;
      for (int t = 0; t < s.exps[i]; ++t) radix *= q;
      for (int t = s.exps[i]; t < n; ++t) tail *= q;
      a[i] = WElem{static_cast<std::uint32_t>((v % radix) * tail)};
      v /= radix;
    }
    c.elements.push_back(std::move(a));
  }
  const WMatrix Uinv = inverse(W, s.U);
  for (const auto& a : c.elements) {
    auto y = apply(W, Uinv, a);
    c.F.push_back(c.index_of(c.reduce(apply(W, s.U, N1.F(y)))));
    c.V.push_back(c.index_of(c.reduce(apply(W, s.U, N1.V(y)))));
  }
  for (std::uint32_t x = 0; x < order; ++x) {
    std::uint32_t px = c.scale(W.p(), x);
    if (c.F[c.V[x]] != px || c.V[c.F[x]] != px) throw VerificationFailure("FV = VF = p fails on the cokernel");
  }
  return c;
}

}  // namespace tdisp
