#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tdisp/field_linalg.hpp"
#include "tdisp/witt.hpp"

namespace tdisp {

/// Dense row-major matrix over W_n(R).
struct WMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<WElem> a;

  WMatrix() = default;
  WMatrix(std::size_t r, std::size_t c, WElem fill = WElem{0}) : rows(r), cols(c), a(r * c, fill) {}

  WElem& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  WElem operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const WMatrix&, const WMatrix&) = default;
  friend auto operator<=>(const WMatrix& x, const WMatrix& y) {
    if (auto c = x.rows <=> y.rows; c != 0) return c;
    if (auto c = x.cols <=> y.cols; c != 0) return c;
    return x.a <=> y.a;
  }
};

WMatrix identity(const WittRing& W, std::size_t n);
WMatrix multiply(const WittRing& W, const WMatrix& x, const WMatrix& y);
WMatrix add(const WittRing& W, const WMatrix& x, const WMatrix& y);
WMatrix sub(const WittRing& W, const WMatrix& x, const WMatrix& y);
WMatrix scale(const WittRing& W, long long k, const WMatrix& x);
std::vector<WElem> apply(const WittRing& W, const WMatrix& m, const std::vector<WElem>& x);
WMatrix transpose(const WMatrix& m);
WMatrix frobenius(const WittRing& W, const WMatrix& m, int times = 1);
WMatrix frobenius_inverse(const WittRing& W, const WMatrix& m, int times = 1);
/// Entrywise residue W_n(R) -> R.
RMatrix residue(const WittRing& W, const WMatrix& m);
/// Entrywise Teichmüller lift.
WMatrix teichmuller(const WittRing& W, const RMatrix& m);
/// Entrywise restriction to a lower level.
WMatrix restrict_to(const WittRing& from, const WittRing& to, const WMatrix& m);
/// Entrywise W_n(alpha).
WMatrix apply_hom(const RingHom& alpha, const WittRing& from, const WittRing& to, const WMatrix& m);
bool is_zero(const WMatrix& m);

WMatrix block(const WMatrix& m, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc);
void set_block(WMatrix& m, std::size_t r0, std::size_t c0, const WMatrix& b);
/// Multiplies the given rows (or columns) by the integer k.
WMatrix scale_rows(const WittRing& W, const WMatrix& m, std::size_t r0, std::size_t r1, long long k);
WMatrix scale_cols(const WittRing& W, const WMatrix& m, std::size_t c0, std::size_t c1, long long k);

/// Leibniz expansion, size <= 8.
WElem determinant(const WittRing& W, const WMatrix& m);
/// Invertible iff the residue determinant is a unit of R.
bool is_invertible(const WittRing& W, const WMatrix& m);
/// Residue inverse lifted by Newton iteration; throws PreconditionError if
/// m is singular.
WMatrix inverse(const WittRing& W, const WMatrix& m);

// Routines over W_n(k), k a perfect field: a chain ring with uniformizer p.

/// U * m * V = diag(p^exps[i]) (exponent n for a zero diagonal entry),
/// U and V invertible.
struct SmithForm {
  WMatrix U, V;
  std::vector<int> exps;
};
SmithForm smith(const WittRing& W, const WMatrix& m);
/// Some solution of m x = b, or nullopt.
std::optional<std::vector<WElem>> solve(const WittRing& W, const WMatrix& m, const std::vector<WElem>& b);

}  // namespace tdisp
