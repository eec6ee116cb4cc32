#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tdisp/ring.hpp"

namespace tdisp {

/// Dense matrix over a FiniteRing, row-major.
struct RMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<RingElem> a;

  RMatrix() = default;
  RMatrix(std::size_t r, std::size_t c, RingElem fill = RingElem{0}) : rows(r), cols(c), a(r * c, fill) {}

  RingElem& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  RingElem operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const RMatrix&, const RMatrix&) = default;
};

RMatrix identity(const FiniteRing& R, std::size_t n);
RMatrix multiply(const FiniteRing& R, const RMatrix& x, const RMatrix& y);
RMatrix apply(const RingHom& h, const RMatrix& m);
RMatrix frobenius(const FiniteRing& R, const RMatrix& m, int times = 1);
bool is_zero(const RMatrix& m);

/// Determinant over any commutative ring (Leibniz expansion, n <= 8).
RingElem determinant(const FiniteRing& R, const RMatrix& m);
bool is_invertible(const FiniteRing& R, const RMatrix& m);
/// Inverse via the adjugate; throws PreconditionError if det is not a unit.
RMatrix inverse(const FiniteRing& R, const RMatrix& m);

// Field-only routines (R.is_field()).

/// Reduced row echelon form; `pivots` receives the pivot columns.
RMatrix rref(const FiniteRing& K, RMatrix m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const FiniteRing& K, const RMatrix& m);
/// Columns span the kernel {x : m x = 0}.
RMatrix kernel_basis(const FiniteRing& K, const RMatrix& m);
/// Columns span the image of m (a subset of the columns of m).
RMatrix image_basis(const FiniteRing& K, const RMatrix& m);
/// True iff the column spans of x and y coincide.
bool same_column_space(const FiniteRing& K, const RMatrix& x, const RMatrix& y);
/// Some solution of m x = b, or nullopt.
std::optional<std::vector<RingElem>> solve(const FiniteRing& K, const RMatrix& m, const std::vector<RingElem>& b);

}  // namespace tdisp
