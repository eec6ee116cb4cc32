#pragma once

#include "tdisp/display.hpp"

namespace tdisp {

/// Raw display data (P, Q, iota, eps, F1) over W_n(k), k a perfect field,
/// with P = Q = W_n^h. eps is stated on P through the isomorphism
/// W_n(k) -> I_{n+1,k}, x -> p x, and F1(q) = F1 * f(q).
struct Quintuple {
  WittPtr W;
  WMatrix iota;  // Q -> P
  WMatrix eps;   // P -> Q
  WMatrix F1;
  int h() const { return static_cast<int>(iota.rows); }
};

/// The quintuple of a display: iota = Delta', eps = Delta, F1 = M, where
/// the T part of Q is identified with T through x -> p x.
Quintuple quintuple_of(const Display& D);

/// iota eps = eps iota = p, F1 bijective, and the level-1 exactness
/// Ker(iota mod p) = Im(eps mod p), Ker(eps mod p) = Im(iota mod p).
CheckResult check_quintuple(const Quintuple& X);

struct NormalDecomposition {
  int d = 0;
  WMatrix L;  // h x (h-d): basis of L inside Q
  WMatrix T;  // h x d: basis of T inside P
  WMatrix B;  // [iota(L) | T], a basis of P
  WMatrix M;  // structure matrix in that basis
};

/// T: standard vectors completing Im(iota mod p); L: solutions of
/// iota(y) = e_j modulo T for the remaining indices j. Verifies
/// P = iota(L) + T and Q = L + eps(T) as direct sums. Throws
/// PreconditionError when the input fails check_quintuple.
NormalDecomposition normal_decompose(const Quintuple& X);

}  // namespace tdisp
