#pragma once

#include <vector>

#include "tdisp/wmatrix.hpp"

namespace tdisp {

/// Element of Q = L (+) I_{n+1} (x) T: l in W_n^(h-d) and the ideal part as
/// W_{n+1} vectors with zero leading coordinate.
struct QElem {
  std::vector<WElem> l;
  std::vector<WElem> a;
  friend bool operator==(const QElem&, const QElem&) = default;
};

/// Truncated display of level n in normal representation: P = L (+) T with
/// L = W_n^(h-d), T = W_n^d, and an invertible structure matrix M whose
/// columns (L first) are Psi(e_j), where Psi = F1 on L and F on T.
class Display {
 public:
  /// Throws PreconditionError when M is not square or not invertible, or
  /// d is out of range.
  static Display from_matrix(RingPtr R, int n, int d, WMatrix M);
  /// Rank 1, d = 0: P = Q = W_n(R), F1 = f, F = p f.
  static Display etale_unit(int n, RingPtr R);
  /// Rank 1, d = 1: Q = I_{n+1,R}, F1 = f1, F = f.
  static Display mult_unit(int n, RingPtr R);

  const RingPtr& ring() const { return R_; }
  const WittRing& W() const { return *W_; }
  const WittPtr& witt() const { return W_; }
  /// W_{n+1}(R), home of the ideal I_{n+1}.
  const WittRing& W_up() const { return *W1_; }
  int level() const { return W_->level(); }
  int h() const { return static_cast<int>(M_.rows); }
  int d() const { return d_; }
  int l() const { return h() - d_; }
  const WMatrix& matrix() const { return M_; }

  // Explicit structure maps.
  std::vector<WElem> iota(const QElem& q) const;
  /// epsilon(a (x) x) for a in I_{n+1}.
  QElem eps(WElem a, const std::vector<WElem>& x) const;
  std::vector<WElem> F(const std::vector<WElem>& x) const;
  std::vector<WElem> F1(const QElem& q) const;
  /// W_n-module structure on Q.
  QElem act(WElem s, const QElem& q) const;
  QElem q_add(const QElem& x, const QElem& y) const;
  QElem q_zero() const;

  /// F(x) = F#(1 (x) x): F# = M Delta, Delta scaling the L columns by p.
  WMatrix fsharp() const;
  /// V#: P -> P^(1) with V#(F1 q) = 1 (x) iota(q); closed form Delta' M^-1
  /// (Delta' scales the T rows by p), accepted only after verify_vsharp.
  WMatrix vsharp() const;
  /// Checks the defining equation on all of Q when |Q| <= exhaustive_limit,
  /// otherwise on additive generators of Q (the equation is additive in q).
  bool verify_vsharp(const WMatrix& V, unsigned long long exhaustive_limit = 4096) const;

  /// Number of elements of Q, saturating at 2^62.
  unsigned long long q_size() const;
  /// Additive generators of Q and of P.
  std::vector<QElem> q_generators() const;
  std::vector<std::vector<WElem>> p_generators() const;
  /// All of Q in a fixed order (only for small Q).
  std::vector<QElem> q_elements() const;

  friend bool operator==(const Display& x, const Display& y) {
    return x.R_->same_as(*y.R_) && x.level() == y.level() && x.d_ == y.d_ && x.M_ == y.M_;
  }

 private:
  Display(RingPtr R, WittPtr W, WittPtr W1, int d, WMatrix M)
      : R_(std::move(R)), W_(std::move(W)), W1_(std::move(W1)), d_(d), M_(std::move(M)) {}

  RingPtr R_;
  WittPtr W_;
  WittPtr W1_;
  int d_;
  WMatrix M_;
};

/// Outcome of a structural check, with a reason when it fails.
struct CheckResult {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
  static CheckResult fail(std::string why) { return CheckResult{false, std::move(why)}; }
};

/// F iota = p F1 on additive generators of Q, F1 eps = f1 (x) F and
/// iota eps = multiplication on generator pairs; these identities are
/// additive, so generators suffice.
CheckResult check_predisplay_axioms(const Display& D);
/// 0 -> J_{n+1} (x) Coker(iota) -> Q -> P -> Coker(iota) -> 0, by explicit
/// kernel, image and cardinality computations. Requires |Q| <= 2^16.
CheckResult check_pair_exactness(const Display& D);
/// V#(F1 q) = 1 (x) iota(q) on Q (see verify_vsharp) and F# V# = V# F# = p.
CheckResult check_vsharp(const Display& D, unsigned long long exhaustive_limit = 4096);

bool is_nilpotent(const Display& D);
/// Level n+1 -> level n.
Display truncate(const Display& D);
/// Throws PreconditionError unless alpha is a homomorphism out of D's ring.
Display base_change(const Display& D, const RingHom& alpha);
Display direct_sum(const Display& D1, const Display& D2);

}  // namespace tdisp
