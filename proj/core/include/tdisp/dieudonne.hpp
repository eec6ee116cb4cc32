#pragma once

#include <cstdint>
#include <vector>

#include "tdisp/display.hpp"
#include "tdisp/pair.hpp"

namespace tdisp {

/// Truncated Dieudonne module (M, F, V) over W_n(k), k a perfect finite
/// field, M = W_n(k)^h, F(x) = F# f(x) and V(x) = f^-1(V# x).
class DieudonneModule {
 public:
  /// Checks F# V# = V# F# = p and, at level 1, Ker F = Im V and
  /// Ker V = Im F (PreconditionError otherwise). At level >= 2 the residue
  /// conditions hold automatically; they are still asserted.
  static DieudonneModule make(RingPtr k, int n, WMatrix Fsharp, WMatrix Vsharp);

  const RingPtr& field() const { return k_; }
  const WittRing& W() const { return *W_; }
  const WittPtr& witt() const { return W_; }
  int level() const { return W_->level(); }
  int h() const { return static_cast<int>(F_.rows); }
  /// Rank of F mod p over k.
  int d() const;
  const WMatrix& F_matrix() const { return F_; }
  const WMatrix& V_matrix() const { return V_; }

  std::vector<WElem> F(const std::vector<WElem>& x) const;
  std::vector<WElem> V(const std::vector<WElem>& x) const;

  /// Same module in the basis given by the columns of B.
  DieudonneModule transport(const WMatrix& B) const;

  friend bool operator==(const DieudonneModule& a, const DieudonneModule& b) {
    return a.k_->same_as(*b.k_) && a.level() == b.level() && a.F_ == b.F_ && a.V_ == b.V_;
  }

 private:
  DieudonneModule(RingPtr k, WittPtr W, WMatrix F, WMatrix V)
      : k_(std::move(k)), W_(std::move(W)), F_(std::move(F)), V_(std::move(V)) {}

  RingPtr k_;
  WittPtr W_;
  WMatrix F_, V_;
};

/// Level-1 exactness Ker F = Im V and Ker V = Im F on M/pM.
CheckResult check_level_one(const DieudonneModule& Mod);
/// FV = VF = p on every element when |M| <= 4096, else on a basis.
CheckResult check_fv(const DieudonneModule& Mod);

/// F# = M Delta, V# = Delta' M^-1. Requires a perfect field.
DieudonneModule from_display(const Display& D);

struct DisplayRealization {
  Display display;
  /// Basis of M in which from_display(display) is expressed:
  /// from_display(display) == Mod.transport(basis).
  WMatrix basis;
};
/// Inverse construction through the quintuple (f^-1 V#, f^-1 F#, f) and a
/// normal decomposition, followed by canonicalize.
DisplayRealization to_display_with_basis(const DieudonneModule& Mod);
Display to_display(const DieudonneModule& Mod);

/// Representative of D modulo the isomorphisms with identity action on P
/// (L columns changed by M_T Z with Z supported in the top Witt
/// coordinate): the top coordinates of the L columns vanish in the pivot
/// rows of M_T mod p. The Dieudonne module of D is unchanged.
Display canonicalize(const Display& D);
bool is_canonical(const Display& D);

/// M/pM; requires n >= 2.
DieudonneModule reduce_mod_p(const DieudonneModule& Mod);
/// F#' = (V#)^T, V#' = (F#)^T.
DieudonneModule dual(const DieudonneModule& Mod);
DieudonneModule direct_sum(const DieudonneModule& a, const DieudonneModule& b);

/// Cokernel of an isogeny u: N0 -> N1 (u F0# = F1# f(u), f(u) V0# = V1# u).
struct IsogenyCokernel {
  WittPtr W;
  /// Invariant factors: the cokernel is the sum of W_e(k) over e in exps.
  std::vector<int> exps;
  /// Elements as coordinate vectors in the Smith basis, entry i in W_{e_i}
  /// embedded in W_n with zero tail; enumeration order is lexicographic.
  std::vector<std::vector<WElem>> elements;
  std::vector<std::uint32_t> F, V;

  std::uint64_t order() const { return elements.size(); }
  std::uint32_t index_of(const std::vector<WElem>& a) const;
  std::uint32_t add(std::uint32_t x, std::uint32_t y) const;
  std::uint32_t scale(long long k, std::uint32_t x) const;
  /// Smallest m > 0 with m x = 0.
  std::uint64_t additive_order(std::uint32_t x) const;
  /// Reduces coordinates to the canonical representatives.
  std::vector<WElem> reduce(std::vector<WElem> a) const;
};
/// Throws PreconditionError if u is not a module map or not injective at the
/// working precision (some invariant factor p^e with e >= n), and
/// GuardExceeded if the cokernel has more than 2^16 elements.
IsogenyCokernel isogeny_cokernel(const DieudonneModule& N0, const DieudonneModule& N1, const WMatrix& u);

}  // namespace tdisp
