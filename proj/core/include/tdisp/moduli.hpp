#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tdisp/hom.hpp"
#include "tdisp/newton.hpp"

namespace tdisp {

/// Element of G_{n,d}: the pair automorphism with blocks A in GL(L),
/// D in GL(T), B: T -> L and C = v(Z): L -> I_{n+1} (x) T. Carries the
/// P-matrix g_P and the inverse twisted matrix used by the action.
struct GroupElem {
  DisplayHom g;
  WMatrix gp;
  WMatrix twisted_inv;
};

/// X_{n,d}(F_q) and G_{n,d}(F_q) for a finite field F_q.
class ModuliInstance {
 public:
  /// Throws PreconditionError unless k is a finite field and 0 <= d <= h,
  /// h >= 1; GuardExceeded when enumerating X or G would take more than
  /// budget steps. Builds both sets eagerly.
  ModuliInstance(RingPtr k, int n, int h, int d, std::uint64_t budget = 10'000'000);

  const RingPtr& field() const { return k_; }
  const WittRing& W() const { return *W_; }
  int level() const { return W_->level(); }
  int h() const { return h_; }
  int d() const { return d_; }
  std::uint64_t budget() const { return budget_; }

  /// Invertible h x h matrices in increasing lexicographic order.
  const std::vector<WMatrix>& X() const { return X_; }
  const std::vector<GroupElem>& G() const { return G_; }
  /// Position of an invertible matrix in X().
  std::size_t index_of(const WMatrix& M) const;

  /// q^((n-1)h^2) |GL_h(F_q)|.
  mpz_class x_count_formula() const;
  /// |GL_l(W_n)| |GL_d(W_n)| q^(2ndl).
  mpz_class g_count_formula() const;

  GroupElem make_elem(DisplayHom g) const;
  GroupElem identity() const;
  GroupElem multiply(const GroupElem& x, const GroupElem& y) const;
  GroupElem inverse(const GroupElem& x) const;

  /// g_P M g~^-1, the structure matrix of the display transported along g.
  WMatrix act(const GroupElem& g, const WMatrix& M) const;
  /// Checks on a fixed-seed sample of (g, M) that g is an isomorphism
  /// display(M) -> display(act(g, M)); throws VerificationFailure otherwise.
  /// Runs once per instance before any orbit computation.
  void verify_action(std::size_t samples = 48, std::uint64_t seed = 20240601) const;

  Display display(const WMatrix& M) const { return Display::from_matrix(k_, level(), d_, M); }

 private:
  RingPtr k_;
  WittPtr W_;
  int h_, d_;
  std::uint64_t budget_;
  std::vector<WMatrix> X_;  // sorted
  std::vector<GroupElem> G_;
};

struct ClassEntry {
  WMatrix rep;
  std::uint64_t orbit_size = 0;
  std::uint64_t aut_order = 0;  // stabilizer order
  int d = 0;
  bool nilpotent = false;
  /// Absent when the level does not determine the polygon.
  std::optional<NewtonPolygon> slopes;
  /// Smallest matrix in the orbit of the dual display (type h - d).
  WMatrix dual_rep;
};

struct ClassTable {
  std::string field;
  int p = 0, n = 0, h = 0, d = 0;
  std::uint64_t q = 0;
  mpz_class x_count, g_count;
  std::vector<ClassEntry> classes;
  /// Orbit number of each element of X (parallel to ModuliInstance::X()).
  std::vector<std::uint32_t> orbit_of;
};

struct EnumerationOptions {
  unsigned workers = 1;
  /// Also compute nilpotence, Newton polygons and dual classes.
  bool invariants = true;
  /// Seed of the sample used by verify_action.
  std::uint64_t seed = 20240601;
};

/// Orbits of G on X, seeds in lexicographic order (each representative is
/// the smallest matrix of its orbit). Verifies orbit size * stabilizer
/// order = |G| and the closed-form counts. Results do not depend on the
/// worker count. Throws GuardExceeded past the instance budget.
ClassTable enumerate_orbits(const ModuliInstance& inst, const EnumerationOptions& opt = {});

struct MassCheck {
  mpq_class lhs, rhs;
  bool equal = false;
};
/// Sum of 1/|Aut| over classes against |X|/|G| from the closed forms.
MassCheck mass_check(const ClassTable& table);

struct NilpotentLocus {
  std::uint64_t classes = 0;
  std::uint64_t points = 0;
};
NilpotentLocus count_nilpotent_locus(const ClassTable& table);

/// Recomputes d, nilpotence, the Newton polygon and the dual class on every
/// point of X and compares with the orbit's entry.
CheckResult check_orbit_invariants(const ModuliInstance& inst, const ClassTable& table);

/// Smallest matrix in the G-orbit of M.
WMatrix orbit_minimum(const ModuliInstance& inst, const WMatrix& M);
/// Structure matrix of the dual display, put into the orbit of type h - d.
WMatrix dual_structure_matrix(const Display& D);

struct IsomCrossCheck {
  bool ok = true;
  std::uint64_t pairs = 0;
  /// Offending pair (positions in X) on a discrepancy.
  std::optional<std::pair<std::size_t, std::size_t>> discrepancy;
};
/// For every unordered pair of points (reflexive pairs included),
/// same orbit <=> isom_displays finds an isomorphism.
IsomCrossCheck cross_check_isom(const ModuliInstance& inst, const ClassTable& table);

}  // namespace tdisp
