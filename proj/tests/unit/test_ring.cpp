#include <doctest.h>

#include "../support/oracle.hpp"
#include "tdisp/error.hpp"
#include "tdisp/ring.hpp"

using namespace tdisp;

namespace {

// Polynomial product in F_p[x]/(modulus), coefficients low degree first.
std::vector<int> polymul(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& mod, int p) {
  const std::size_t r = a.size();
  std::vector<int> full(2 * r - 1, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) full[i + j] = (full[i + j] + a[i] * b[j]) % p;
  for (std::size_t k = full.size(); k-- > r;) {
    const int c = full[k];
    if (!c) continue;
    for (std::size_t i = 0; i <= r; ++i) full[k - r + i] = ((full[k - r + i] - c * mod[i]) % p + p) % p;
  }
  full.resize(r);
  return full;
}

}  // namespace

TEST_CASE("ring specs parse and print canonically") {
  for (const char* s : {"GF(2)", "GF(3)", "GF(2^2)", "GF(3^2)", "GF(2)[x]/x^3", "GF(2)*GF(2)"}) {
    auto R = FiniteRing::parse(s);
    CHECK(FiniteRing::parse(R->name())->same_as(*R));
  }
  CHECK_THROWS_AS(FiniteRing::parse("GF(4)"), PreconditionError);
  CHECK_THROWS_AS(FiniteRing::parse("GF(2"), ParseError);
  CHECK_THROWS_AS(FiniteRing::parse("GF(2^2|1,0,1)"), PreconditionError);  // x^2 + 1 = (x+1)^2
}

TEST_CASE("Galois field multiplication matches polynomial arithmetic") {
  for (auto [p, r] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
    auto F = FiniteRing::parse("GF(" + std::to_string(p) + "^" + std::to_string(r) + ")");
    const auto mod = default_modulus(p, r);
    CHECK(F->size() == static_cast<std::uint32_t>(oracle::ipow(p, r)));
    for (std::uint32_t a = 0; a < F->size(); ++a)
      for (std::uint32_t b = 0; b < F->size(); ++b) {
        auto ca = F->coords(RingElem{a}), cb = F->coords(RingElem{b});
        CHECK(F->coords(F->mul(RingElem{a}, RingElem{b})) == polymul(ca, cb, mod, p));
      }
  }
}

TEST_CASE("fields: every nonzero element is a unit and Frobenius is bijective") {
  for (const char* s : {"GF(2)", "GF(5)", "GF(2^2)", "GF(3^2)", "GF(2^3)"}) {
    auto F = FiniteRing::parse(s);
    CHECK(F->is_field());
    CHECK(F->is_perfect());
    for (std::uint32_t a = 1; a < F->size(); ++a) {
      const RingElem x{a};
      CHECK(F->mul(x, F->inverse(x)) == F->one());
      CHECK(F->frobenius(F->frobenius_inverse(x)) == x);
      CHECK(F->frobenius(x) == F->pow(x, F->p()));
    }
  }
}

TEST_CASE("truncated polynomial rings are local and not perfect") {
  auto R = FiniteRing::parse("GF(2)[x]/x^3");
  CHECK(R->size() == 8);
  CHECK_FALSE(R->is_field());
  CHECK_FALSE(R->is_perfect());
  const RingElem x = R->parse_elem("(0,1,0)");
  CHECK(R->pow(x, 3) == R->zero());
  CHECK_FALSE(R->is_unit(x));
  CHECK(R->is_unit(R->add(R->one(), x)));
  auto res = R->residue_fields();
  REQUIRE(res.size() == 1);
  CHECK(res[0].dst->size() == 2);
  CHECK(res[0].is_homomorphism());
}

TEST_CASE("products have one residue field per factor") {
  auto R = FiniteRing::parse("GF(2)*GF(2^2)");
  CHECK(R->size() == 8);
  auto res = R->residue_fields();
  REQUIRE(res.size() == 2);
  for (const auto& h : res) CHECK(h.is_homomorphism());
  CHECK(R->is_perfect());
  CHECK_FALSE(R->is_field());
}

TEST_CASE("field embeddings are homomorphisms") {
  auto F2 = FiniteRing::parse("GF(2)"), F4 = FiniteRing::parse("GF(2^2)"), F16 = FiniteRing::parse("GF(2^4)");
  CHECK(FiniteRing::field_embedding(F2, F4).is_homomorphism());
  CHECK(FiniteRing::field_embedding(F4, F16).is_homomorphism());
}

TEST_CASE("element text round trips") {
  auto R = FiniteRing::parse("GF(3^2)");
  for (std::uint32_t a = 0; a < R->size(); ++a) CHECK(R->parse_elem(R->format(RingElem{a})) == RingElem{a});
  CHECK_THROWS_AS(R->parse_elem("(1,2"), ParseError);
}
