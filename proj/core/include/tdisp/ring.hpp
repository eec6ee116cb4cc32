#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tdisp {

/// An element of a FiniteRing, stored as the lexicographic rank of its
/// F_p-coordinate vector (coordinate 0 most significant).
struct RingElem {
  std::uint32_t v = 0;
  friend auto operator<=>(const RingElem&, const RingElem&) = default;
};

enum class RingKind { PrimeField, GaloisField, TruncatedPoly, Product };

/// Description of a supported finite F_p-algebra.
///
/// PrimeField / GaloisField: F_{p^r} = F_p[x]/(modulus), modulus given low
/// degree first and monic. TruncatedPoly: base[x]/(x^k), base in factors[0].
/// Product: factors[0] x factors[1] x ...
struct RingSpec {
  RingKind kind = RingKind::PrimeField;
  int p = 2;
  int r = 1;
  std::vector<int> modulus;
  int k = 1;
  std::vector<RingSpec> factors;

  static RingSpec prime_field(int p);
  /// Uses the built-in modulus table when `modulus` is empty.
  static RingSpec galois_field(int p, int r, std::vector<int> modulus = {});
  static RingSpec truncated(RingSpec base, int k);
  static RingSpec product(std::vector<RingSpec> factors);

  /// Canonical textual form, accepted back by parse_ring_spec.
  std::string to_string() const;
};

/// Parses "GF(p)", "GF(p^r)", "GF(p^r|c0,c1,...,cr)", "R[x]/x^k" and
/// products "A*B*...". Whitespace is ignored.
RingSpec parse_ring_spec(const std::string& text);

/// Built-in irreducible modulus for p in {2,3,5}, r <= 4.
std::vector<int> default_modulus(int p, int r);

bool is_prime(int p);
/// Brute-force irreducibility test for a monic polynomial over F_p.
bool is_irreducible(const std::vector<int>& poly, int p);

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

/// A ring homomorphism between two finite rings, stored as the full image
/// table of the source elements.
struct RingHom {
  RingPtr src;
  RingPtr dst;
  std::vector<RingElem> image;

  RingElem operator()(RingElem a) const { return image[a.v]; }
  /// Exhaustive check of additivity, multiplicativity and 1 -> 1.
  bool is_homomorphism() const;
  RingHom compose_after(const RingHom& first) const;  // this ∘ first
};

/// A finite commutative F_p-algebra with enumerable elements.
///
/// Instances are immutable after construction and may be shared freely
/// between threads.
class FiniteRing : public std::enable_shared_from_this<FiniteRing> {
 public:
  static RingPtr make(const RingSpec& spec);
  static RingPtr parse(const std::string& text) { return make(parse_ring_spec(text)); }

  const RingSpec& spec() const { return spec_; }
  std::string name() const { return spec_.to_string(); }
  int p() const { return p_; }
  /// Dimension over F_p.
  int dim() const { return dim_; }
  std::uint32_t size() const { return size_; }
  bool is_field() const { return is_field_; }
  bool is_perfect() const { return is_perfect_; }

  RingElem zero() const { return RingElem{0}; }
  RingElem one() const { return one_; }
  RingElem from_int(long long k) const;
  /// i-th element in lexicographic coordinate order.
  RingElem element(std::uint32_t i) const { return RingElem{i}; }

  RingElem add(RingElem a, RingElem b) const;
  RingElem neg(RingElem a) const;
  RingElem sub(RingElem a, RingElem b) const { return add(a, neg(b)); }
  RingElem mul(RingElem a, RingElem b) const;
  RingElem pow(RingElem a, unsigned long long e) const;
  RingElem frobenius(RingElem a) const;
  /// Inverse of the Frobenius; requires is_perfect().
  RingElem frobenius_inverse(RingElem a) const;
  bool is_unit(RingElem a) const;
  /// Throws PreconditionError for non-units.
  RingElem inverse(RingElem a) const;

  std::vector<int> coords(RingElem a) const;
  RingElem from_coords(const std::vector<int>& c) const;
  /// Element with a single coordinate equal to one.
  RingElem basis(int b) const;

  /// Residue fields with their surjections from this ring.
  std::vector<RingHom> residue_fields() const;

  RingHom identity() const;
  /// Ring embedding of a Galois/prime field into another field; the image of
  /// the generator is the lexicographically first root of its modulus.
  static RingHom field_embedding(const RingPtr& src, const RingPtr& dst);

  std::string format(RingElem a) const;
  RingElem parse_elem(const std::string& text) const;

  bool same_as(const FiniteRing& other) const;

 private:
  explicit FiniteRing(RingSpec spec);
  void build();
  RingElem mul_raw(RingElem a, RingElem b) const;
  RingElem add_raw(RingElem a, RingElem b) const;
  std::vector<std::uint32_t> split(RingElem a, std::uint32_t part_size, std::size_t parts) const;

  RingSpec spec_;
  int p_ = 2;
  int dim_ = 1;
  std::uint32_t size_ = 2;
  bool is_field_ = false;
  bool is_perfect_ = false;
  RingElem one_{};
  std::vector<RingPtr> parts_;  // base (truncated) or factors (product)

  // Full tables for rings of at most kTableLimit elements.
  static constexpr std::uint32_t kTableLimit = 256;
  std::vector<std::uint32_t> add_table_;
  std::vector<std::uint32_t> mul_table_;
  std::vector<std::uint32_t> neg_table_;
  std::vector<std::uint32_t> frob_table_;
  std::vector<std::uint32_t> frob_inv_table_;
  std::vector<std::uint32_t> inv_table_;  // size_ marks a non-unit
};

}  // namespace tdisp
