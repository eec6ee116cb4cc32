#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tdisp/ring.hpp"
#include "tdisp/witt_poly.hpp"

namespace tdisp {

/// Element of W_n(R), stored as the lexicographic rank of its coordinate
/// vector: idx = sum_i c_i |R|^(n-1-i).
struct WElem {
  std::uint32_t v = 0;
  friend auto operator<=>(const WElem&, const WElem&) = default;
};

/// The ring W_n(R) of truncated p-typical Witt vectors.
///
/// Immutable once built; the optional operation tables are filled on first
/// use under a once-flag, so instances are safe to share between threads.
class WittRing {
 public:
  /// Memoized per (ring, level).
  static std::shared_ptr<const WittRing> get(const RingPtr& R, int n, const TableGuard& guard = TableGuard{});

  const FiniteRing& base() const { return *R_; }
  const RingPtr& base_ptr() const { return R_; }
  int level() const { return n_; }
  int p() const { return R_->p(); }
  std::uint32_t size() const { return size_; }
  const WittPolynomialTable& polynomials() const { return *table_; }

  WElem zero() const { return WElem{0}; }
  WElem one() const { return one_; }
  WElem from_int(long long k) const;
  WElem element(std::uint32_t i) const { return WElem{i}; }

  std::vector<RingElem> coords(WElem x) const;
  RingElem coord(WElem x, int i) const;
  WElem from_coords(const std::vector<RingElem>& c) const;

  WElem add(WElem x, WElem y) const;
  WElem neg(WElem x) const;
  WElem sub(WElem x, WElem y) const { return add(x, neg(y)); }
  WElem mul(WElem x, WElem y) const;
  WElem pow(WElem x, unsigned long long e) const;
  /// k * x for an integer k.
  WElem scale(long long k, WElem x) const;

  /// Coordinatewise p-th power, applied `times` times.
  WElem frobenius(WElem x, int times = 1) const;
  /// Requires a perfect base ring.
  WElem frobenius_inverse(WElem x, int times = 1) const;
  WElem teichmuller(RingElem a) const;
  RingElem residue(WElem x) const { return coord(x, 0); }

  /// x is a unit iff its residue is a unit of R.
  bool is_unit(WElem x) const;
  /// Throws PreconditionError for non-units.
  WElem inverse(WElem x) const;

  // Routines valid over a perfect field, where p x = v(f(x)).

  /// Largest k with x in p^k W_n; n for x = 0.
  int valuation(WElem x) const;
  /// Some y with p^k y = x (the one with zero trailing coordinates);
  /// requires valuation(x) >= k.
  WElem divide_by_p_power(WElem x, int k) const;

  std::string format(WElem x) const;
  /// Parses "w[a0,...,a_{n-1}]".
  WElem parse(const std::string& text) const;

 private:
  WittRing(RingPtr R, int n, std::shared_ptr<const WittPolynomialTable> table);
  std::vector<RingElem> eval(bool product, const std::vector<RingElem>& x, const std::vector<RingElem>& y) const;
  WElem add_raw(WElem x, WElem y) const;
  WElem mul_raw(WElem x, WElem y) const;
  void build_tables() const;

  RingPtr R_;
  int n_;
  std::uint32_t size_;
  WElem one_{};
  std::shared_ptr<const WittPolynomialTable> table_;

  static constexpr std::uint32_t kTableLimit = 512;
  mutable std::once_flag tables_once_;
  mutable std::vector<std::uint32_t> add_table_;
  mutable std::vector<std::uint32_t> mul_table_;
};

using WittPtr = std::shared_ptr<const WittRing>;

/// Witt vector as a plain coordinate list over a ring; the value type of the
/// free functions below.
struct WittVector {
  RingPtr ring;
  std::vector<RingElem> coords;
  int level() const { return static_cast<int>(coords.size()); }
  friend bool operator==(const WittVector& a, const WittVector& b) {
    return a.ring->same_as(*b.ring) && a.coords == b.coords;
  }
};

WittVector to_vector(const WittRing& W, WElem x);
WElem from_vector(const WittRing& W, const WittVector& x);

/// Throws PreconditionError on ring or level mismatch.
WittVector witt_add(const WittVector& x, const WittVector& y);
WittVector witt_mul(const WittVector& x, const WittVector& y);
WittVector witt_neg(const WittVector& x);
WittVector witt_frobenius(const WittVector& x);
/// (x_0,...,x_{n-1}) -> (0,x_0,...,x_{n-1}) at level n+1.
WittVector witt_verschiebung(const WittVector& x);
/// Inverse of v on the augmentation ideal; requires a zero leading coordinate.
WittVector witt_f1(const WittVector& a);
WittVector witt_teichmuller(const RingPtr& R, RingElem a, int n);
/// Drops the last coordinate.
WittVector witt_restrict(const WittVector& x);
/// W_n(R)-module structure on I_{n+1,R}: s . a = (any lift of s) * a in
/// W_{n+1}(R); for a = v(z) this equals v(f(s) z).
WittVector witt_ideal_action(const WittVector& s, const WittVector& a);
/// The natural map I_{n+1} -> W_n (restriction of an ideal element).
WittVector witt_ideal_inclusion(const WittVector& a);

// Index-level versions of the level-changing maps.
WElem verschiebung(const WittRing& Wn, const WittRing& Wn1, WElem x);
WElem f1(const WittRing& Wn1, const WittRing& Wn, WElem a);
WElem restrict_to(const WittRing& Wn1, const WittRing& Wn, WElem x);
/// i(v(z)) = (0, z_0, ..., z_{n-2}) as an element of W_n.
WElem ideal_inclusion(const WittRing& Wn, WElem z);
/// s . v(z) = v(f(s) z); represented through z, so this returns f(s) z.
WElem ideal_action(const WittRing& Wn, WElem s, WElem z);

}  // namespace tdisp
