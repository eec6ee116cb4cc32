#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "tdisp/display.hpp"

namespace tdisp {

/// Morphism of displays D1 -> D2 in block form: A: L1 -> L2, B: T1 -> L2,
/// C = v(Z): L1 -> I_{n+1} (x) T2 and D: T1 -> T2, all entries in W_n(R).
struct DisplayHom {
  WMatrix A, B, Z, D;
  friend bool operator==(const DisplayHom&, const DisplayHom&) = default;
};

/// Matrix of the map on P: [[A, B], [i(v Z), D]].
WMatrix hom_p_matrix(const WittRing& W, const DisplayHom& g);
/// Twisted matrix [[f A, p f B], [Z, f D]]; a hom satisfies
/// hom_p_matrix(g) M1 = M2 hom_twisted_matrix(g).
WMatrix hom_twisted_matrix(const WittRing& W, const DisplayHom& g);
DisplayHom zero_hom(const Display& D1, const Display& D2);
DisplayHom identity_hom(const Display& D);
bool is_zero(const DisplayHom& g);
/// g o g' (g' applied first).
DisplayHom compose(const WittRing& W, const DisplayHom& g, const DisplayHom& gp);
DisplayHom add(const WittRing& W, const DisplayHom& x, const DisplayHom& y);
DisplayHom scale(const WittRing& W, long long k, const DisplayHom& x);

/// Checks, through the explicit maps of both displays, that g commutes with
/// iota, F and F1 on additive generators.
CheckResult verify_hom(const Display& D1, const Display& D2, const DisplayHom& g);
/// verify_hom plus invertibility of A and D over R.
CheckResult verify_isomorphism(const Display& D1, const Display& D2, const DisplayHom& g);

/// Hom(D1, D2) as a subgroup of the tuple group, which is a Z/p^n-module.
struct HomGroup {
  std::vector<DisplayHom> generators;
  int log_order = 0;  // |Hom| = p^log_order
};
HomGroup hom_displays(const Display& D1, const Display& D2);

struct IsomOptions {
  /// Exhaustive search over the residue image while p^rank <= guard.
  std::uint64_t guard = 1ull << 20;
  std::uint64_t samples = 1ull << 14;
  std::uint64_t seed = 20240601;
};
/// Isomorphism D1 -> D2 if one exists. Throws GuardExceeded when the search
/// space exceeds the guard and random sampling finds no certificate.
std::optional<DisplayHom> isom_displays(const Display& D1, const Display& D2, const IsomOptions& opt = {});
/// |Aut(D)| = |ker rho| * #{invertible elements of im rho}, rho the residue
/// map to (A mod I, D mod I).
mpz_class aut_order(const Display& D, const IsomOptions& opt = {});

}  // namespace tdisp
