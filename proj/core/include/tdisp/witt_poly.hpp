#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <gmpxx.h>

namespace tdisp {

/// Maximum Witt level the polynomial layout supports.
inline constexpr int kMaxWittLevel = 8;

/// Exponent vector over the variables X_0..X_7, Y_0..Y_7 (X_i at slot i,
/// Y_i at slot 8+i).
struct Monomial {
  std::array<std::uint8_t, 2 * kMaxWittLevel> e{};
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

/// Polynomial with integer coefficients, terms sorted by monomial.
class IntPoly {
 public:
  using Term = std::pair<Monomial, mpz_class>;

  IntPoly() = default;
  static IntPoly variable(int slot);
  static IntPoly constant(const mpz_class& c);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  IntPoly scaled(const mpz_class& c) const;
  IntPoly pow(unsigned e) const;
  /// Exact division; throws VerificationFailure when some coefficient is not
  /// divisible.
  IntPoly divided_exact(const mpz_class& d) const;
  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  std::vector<Term> terms_;
};

/// A term of a Witt polynomial reduced mod p, listing only the variables that
/// occur.
struct ModTerm {
  std::uint32_t coef = 0;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> factors;  // (slot, exponent)
};

/// Resource guard on the Witt level per prime.
struct TableGuard {
  std::map<int, int> max_level{{2, 5}, {3, 4}, {5, 3}};
  int fallback = 2;
  int limit(int p) const;
};

/// Sum and product polynomials S_k, P_k (k < level) of p-typical Witt
/// vectors, generated over the integers from the ghost recursion
///   w_k(Z) = sum_{i<=k} p^i Z_i^{p^{k-i}}.
class WittPolynomialTable {
 public:
  /// Memoized, thread-safe.
  static std::shared_ptr<const WittPolynomialTable> get(int p, int level, const TableGuard& guard = TableGuard{});

  int p() const { return p_; }
  int level() const { return static_cast<int>(sum_.size()); }
  const IntPoly& sum(int k) const { return sum_.at(k); }
  const IntPoly& product(int k) const { return prod_.at(k); }
  const std::vector<ModTerm>& sum_mod(int k) const { return sum_mod_.at(k); }
  const std::vector<ModTerm>& product_mod(int k) const { return prod_mod_.at(k); }

  /// Recomputes w_k(S) - w_k(X) - w_k(Y) and w_k(P) - w_k(X) w_k(Y) for all
  /// k < level and returns true iff all of them are the zero polynomial.
  bool ghost_identities_hold() const;

  /// Ghost polynomial w_k over the X (offset 0) or Y (offset 8) variables.
  static IntPoly ghost(int p, int k, int offset);

 private:
  WittPolynomialTable() = default;

  int p_ = 2;
  std::vector<IntPoly> sum_;
  std::vector<IntPoly> prod_;
  std::vector<std::vector<ModTerm>> sum_mod_;
  std::vector<std::vector<ModTerm>> prod_mod_;
};

}  // namespace tdisp
