#include <doctest.h>

#include <algorithm>

#include "../support/oracle.hpp"
#include "tdisp/error.hpp"
#include "tdisp/galois_ring.hpp"
#include "tdisp/witt.hpp"
#include "tdisp/witt_poly.hpp"

using namespace tdisp;

TEST_CASE("ghost identities hold for every generated table") {
  for (auto [p, top] : {std::pair{2, 5}, {3, 4}, {5, 3}})
    for (int n = 1; n <= top; ++n) CHECK(WittPolynomialTable::get(p, n)->ghost_identities_hold());
}

TEST_CASE("table guard refuses levels beyond the per-prime limit") {
  CHECK_THROWS_AS(WittPolynomialTable::get(2, 6), GuardExceeded);
  CHECK_THROWS_AS(WittPolynomialTable::get(7, 3), GuardExceeded);
}

TEST_CASE("first sum polynomial carries the binomial correction") {
  // S_1 = X_1 + Y_1 - sum_{0<i<p} binom(p,i)/p X_0^i Y_0^(p-i); for p = 2 that is X_1 + Y_1 + X_0 Y_0 mod 2.
  auto W = WittRing::get(FiniteRing::parse("GF(2)"), 2);
  CHECK(W->format(W->add(W->parse("w[1,0]"), W->parse("w[1,0]"))) == "w[0,1]");
  CHECK(W->format(W->add(W->parse("w[1,1]"), W->parse("w[1,0]"))) == "w[0,0]");
}

TEST_CASE("W_n(F_p) is Z/p^n through the Teichmuller expansion") {
  for (int p : {2, 3, 5})
    for (int n = 1; n <= (p == 5 ? 3 : 3); ++n) {
      auto W = WittRing::get(FiniteRing::parse("GF(" + std::to_string(p) + ")"), n);
      const long long pn = oracle::ipow(p, n);
      std::vector<bool> hit(pn, false);
      for (std::uint32_t a = 0; a < W->size(); ++a) {
        const long long ia = oracle::to_int(*W, WElem{a});
        hit[ia] = true;
        for (std::uint32_t b = 0; b < W->size(); ++b) {
          const long long ib = oracle::to_int(*W, WElem{b});
          CHECK(oracle::to_int(*W, W->add(WElem{a}, WElem{b})) == (ia + ib) % pn);
          CHECK(oracle::to_int(*W, W->mul(WElem{a}, WElem{b})) == ia * ib % pn);
        }
      }
      CHECK(std::count(hit.begin(), hit.end(), true) == pn);
    }
}

TEST_CASE("Galois ring oracle agrees with W_n(F_q)") {
  for (const char* s : {"GF(2)", "GF(3)", "GF(2^2)", "GF(3^2)"})
    for (int n = 1; n <= 3; ++n) {
      auto rep = galois_ring_oracle(FiniteRing::parse(s), n);
      CHECK_MESSAGE(rep.isomorphic, s << " n=" << n << ": " << rep.failure);
    }
}

TEST_CASE("ring axioms hold exhaustively on small Witt rings") {
  for (auto [name, n] : {std::pair{"GF(2^2)", 2}, {"GF(2)[x]/x^2", 2}, {"GF(2)*GF(2)", 2}, {"GF(3)", 2}}) {
    auto W = WittRing::get(FiniteRing::parse(name), n);
    for (std::uint32_t a = 0; a < W->size(); ++a)
      for (std::uint32_t b = 0; b < W->size(); ++b) {
        const WElem x{a}, y{b};
        CHECK(W->add(x, y) == W->add(y, x));
        CHECK(W->mul(x, y) == W->mul(y, x));
        for (std::uint32_t c = 0; c < W->size(); c += 3) {
          const WElem z{c};
          CHECK(W->mul(x, W->add(y, z)) == W->add(W->mul(x, y), W->mul(x, z)));
          CHECK(W->mul(W->mul(x, y), z) == W->mul(x, W->mul(y, z)));
        }
      }
  }
}

TEST_CASE("p-th multiple of one has the expected additive order") {
  auto W = WittRing::get(FiniteRing::parse("GF(2)"), 3);
  WElem acc = W->zero();
  int order = 0;
  do {
    acc = W->add(acc, W->one());
    ++order;
  } while (acc != W->zero());
  CHECK(order == 8);
}

TEST_CASE("frame identities f v = p, f1 v = id, p f1 = f on the ideal") {
  for (auto [name, top] : {std::pair{"GF(2)", 4}, {"GF(2^2)", 3}, {"GF(2)[x]/x^2", 3}, {"GF(3)", 3}}) {
    auto R = FiniteRing::parse(name);
    for (int n1 = 2; n1 <= top; ++n1) {
      auto Wn = WittRing::get(R, n1 - 1), Wn1 = WittRing::get(R, n1);
      for (std::uint32_t i = 0; i < Wn->size(); ++i) {
        const WElem x{i};
        auto c = Wn->coords(x);
        c.push_back(R->zero());
        const WElem vx = verschiebung(*Wn, *Wn1, x);
        CHECK(Wn1->frobenius(vx) == Wn1->scale(R->p(), Wn1->from_coords(c)));
        CHECK(f1(*Wn1, *Wn, vx) == x);
        CHECK(Wn->scale(R->p(), f1(*Wn1, *Wn, vx)) == restrict_to(*Wn1, *Wn, Wn1->frobenius(vx)));
      }
    }
  }
}

TEST_CASE("v is additive and x v(y) = v(f(x) y)") {
  auto R = FiniteRing::parse("GF(2^2)");
  auto W2 = WittRing::get(R, 2), W3 = WittRing::get(R, 3);
  for (std::uint32_t a = 0; a < W2->size(); ++a)
    for (std::uint32_t b = 0; b < W2->size(); ++b) {
      const WElem x{a}, y{b};
      CHECK(verschiebung(*W2, *W3, W2->add(x, y)) == W3->add(verschiebung(*W2, *W3, x), verschiebung(*W2, *W3, y)));
      auto cx = W2->coords(x);
      cx.push_back(R->zero());
      const WElem lx = W3->from_coords(cx);
      CHECK(W3->mul(lx, verschiebung(*W2, *W3, y)) == verschiebung(*W2, *W3, W2->mul(W2->frobenius(x), y)));
    }
}

TEST_CASE("ideal action is the lift-and-multiply module structure") {
  auto R = FiniteRing::parse("GF(2^2)");
  auto W = WittRing::get(R, 2), W1 = WittRing::get(R, 3);
  for (std::uint32_t s = 0; s < W->size(); ++s)
    for (std::uint32_t z = 0; z < W->size(); ++z) {
      auto cs = W->coords(WElem{s});
      cs.push_back(R->zero());
      const WElem lifted = W1->mul(W1->from_coords(cs), verschiebung(*W, *W1, WElem{z}));
      CHECK(verschiebung(*W, *W1, ideal_action(*W, WElem{s}, WElem{z})) == lifted);
    }
}

TEST_CASE("Teichmuller lifts are multiplicative") {
  auto R = FiniteRing::parse("GF(3^2)");
  auto W = WittRing::get(R, 2);
  for (std::uint32_t a = 0; a < R->size(); ++a)
    for (std::uint32_t b = 0; b < R->size(); ++b)
      CHECK(W->mul(W->teichmuller(RingElem{a}), W->teichmuller(RingElem{b})) == W->teichmuller(R->mul(RingElem{a}, RingElem{b})));
  auto W3 = WittRing::get(FiniteRing::parse("GF(2)"), 3);
  CHECK(W3->format(W3->mul(W3->teichmuller(RingElem{1}), W3->teichmuller(RingElem{1}))) == "w[1,0,0]");
}

TEST_CASE("units, inverses and valuations") {
  auto W = WittRing::get(FiniteRing::parse("GF(2^2)"), 3);
  for (std::uint32_t a = 0; a < W->size(); ++a) {
    const WElem x{a};
    if (W->is_unit(x)) {
      CHECK(W->mul(x, W->inverse(x)) == W->one());
      CHECK(W->valuation(x) == 0);
    } else {
      CHECK_THROWS_AS(W->inverse(x), PreconditionError);
    }
    const int v = W->valuation(x);
    if (x != W->zero()) {
      const WElem y = W->divide_by_p_power(x, v);
      CHECK(W->mul(W->pow(W->from_int(2), v), y) == x);
    }
  }
}

TEST_CASE("value-level functions reject mismatched inputs") {
  auto R = FiniteRing::parse("GF(2)");
  auto x = witt_teichmuller(R, R->one(), 2), y = witt_teichmuller(R, R->one(), 3);
  CHECK_THROWS_AS(witt_add(x, y), PreconditionError);
  CHECK_THROWS_AS(witt_f1(x), PreconditionError);
  CHECK(witt_f1(witt_verschiebung(x)) == x);
  CHECK(witt_restrict(y) == x);
}

TEST_CASE("Witt literals parse and print") {
  auto W = WittRing::get(FiniteRing::parse("GF(2^2)"), 2);
  for (std::uint32_t a = 0; a < W->size(); ++a) CHECK(W->parse(W->format(WElem{a})) == WElem{a});
  CHECK_THROWS_AS(W->parse("w[(1,0)]"), ParseError);
  CHECK_THROWS_AS(W->parse("[1,0]"), ParseError);
}
