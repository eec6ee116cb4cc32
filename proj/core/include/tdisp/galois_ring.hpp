#pragma once

#include <cstdint>
#include <vector>

#include "tdisp/ring.hpp"
#include "tdisp/witt.hpp"

namespace tdisp {

/// The Galois ring GR(p^n, r) = (Z/p^n)[x]/(F), F the coefficientwise lift of
/// the modulus of F_{p^r}. Built without any Witt polynomial; used as an
/// independent oracle for W_n(F_q).
class GaloisRing {
 public:
  using Elem = std::vector<long long>;  // r coefficients mod p^n, low degree first

  GaloisRing(int p, int n, std::vector<int> modulus);

  int p() const { return p_; }
  int level() const { return n_; }
  int degree() const { return r_; }
  long long modulus_pn() const { return pn_; }
  std::uint64_t size() const;

  Elem zero() const { return Elem(r_, 0); }
  Elem one() const;
  Elem from_int(long long k) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(Elem a, unsigned long long e) const;
  /// The rank of a in the enumeration order (coefficient 0 least significant).
  std::uint64_t index(const Elem& a) const;

  /// Teichmüller representative of a in F_q: lift(a)^(q^(n-1)).
  Elem teichmuller(const FiniteRing& Fq, RingElem a) const;

 private:
  int p_, n_, r_;
  long long pn_;
  std::vector<long long> modulus_;
};

/// Result of comparing W_n(F_q) with GR(p^n, r).
struct OracleReport {
  bool isomorphic = false;
  /// image[x.v] = index in the Galois ring of phi(x).
  std::vector<std::uint64_t> image;
  std::string failure;
};

/// Builds phi(x) = sum_k p^k [x_k^(p^-k)] from W_n(F_q) to GR(p^n, r) and
/// verifies exhaustively that it is a bijective ring homomorphism.
OracleReport galois_ring_oracle(const RingPtr& Fq, int n);

}  // namespace tdisp
