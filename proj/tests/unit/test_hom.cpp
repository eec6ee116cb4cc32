#include <doctest.h>

#include <random>

#include "selftest.hpp"
#include "tdisp/hom.hpp"

using namespace tdisp;
using tdisp::cli::random_display;

namespace {

// Every block tuple D1 -> D2, filtered by verify_hom (explicit maps only).
std::vector<DisplayHom> brute_force_homs(const Display& D1, const Display& D2) {
  const WittRing& W = D1.W();
  const std::size_t l1 = D1.l(), d1 = D1.d(), l2 = D2.l(), d2 = D2.d();
  const std::size_t cells = l2 * l1 + l2 * d1 + d2 * l1 + d2 * d1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= W.size();
  std::vector<DisplayHom> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    auto fill = [&](std::size_t r, std::size_t c) {
      WMatrix m(r, c);
      for (auto& x : m.a) {
        x = WElem{static_cast<std::uint32_t>(t % W.size())};
        t /= W.size();
      }
      return m;
    };
    DisplayHom g;
    g.A = fill(l2, l1);
    g.B = fill(l2, d1);
    g.Z = fill(d2, l1);
    g.D = fill(d2, d1);
    if (verify_hom(D1, D2, g)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

TEST_CASE("no nonzero maps from the etale unit to the multiplicative unit") {
  for (const char* name : {"GF(2)", "GF(2^2)", "GF(3)"}) {
    auto R = FiniteRing::parse(name);
    for (int n = 1; n <= 3; ++n) {
      const HomGroup H = hom_displays(Display::etale_unit(n, R), Display::mult_unit(n, R));
      CHECK(H.log_order == 0);
      for (const auto& g : H.generators) CHECK(is_zero(g));
    }
  }
}

TEST_CASE("hom group order matches brute force enumeration") {
  std::mt19937_64 rng(31);
  auto F2 = FiniteRing::parse("GF(2)");
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + t % 2;
    const Display D1 = random_display(rng, F2, n, 1 + t % 2, t % 2), D2 = random_display(rng, F2, n, 2, (t / 2) % 3);
    const auto all = brute_force_homs(D1, D2);
    const HomGroup H = hom_displays(D1, D2);
    CHECK(all.size() == (std::size_t{1} << H.log_order));
    for (const auto& g : H.generators) CHECK(verify_hom(D1, D2, g));
  }
}

TEST_CASE("automorphism order matches the number of invertible endomorphisms") {
  std::mt19937_64 rng(37);
  for (const char* name : {"GF(2)", "GF(2^2)"}) {
    auto R = FiniteRing::parse(name);
    for (int t = 0; t < 6; ++t) {
      const Display D = random_display(rng, R, 1, 2, t % 3);
      std::uint64_t count = 0;
      for (const auto& g : brute_force_homs(D, D)) count += verify_isomorphism(D, D, g).ok;
      CHECK(aut_order(D) == mpz_class(static_cast<unsigned long>(count)));
    }
  }
}

TEST_CASE("isom finds an isomorphism to itself and to transported displays") {
  std::mt19937_64 rng(41);
  auto F2 = FiniteRing::parse("GF(2)");
  for (int t = 0; t < 10; ++t) {
    const Display D = random_display(rng, F2, 2, 2, t % 3);
    auto g = isom_displays(D, D);
    REQUIRE(g);
    CHECK(verify_isomorphism(D, D, *g));
    CHECK(verify_isomorphism(D, D, identity_hom(D)));
  }
  CHECK_FALSE(isom_displays(Display::etale_unit(2, F2), Display::mult_unit(2, F2)).has_value());
}

TEST_CASE("composition and sums of homs are homs") {
  std::mt19937_64 rng(43);
  auto F4 = FiniteRing::parse("GF(2^2)");
  for (int t = 0; t < 6; ++t) {
    const Display A = random_display(rng, F4, 1, 2, 1), B = random_display(rng, F4, 1, 2, 1);
    const HomGroup H1 = hom_displays(A, B), H2 = hom_displays(B, A);
    const WittRing& W = A.W();
    for (const auto& x : H1.generators)
      for (const auto& y : H2.generators) {
        CHECK(verify_hom(A, A, compose(W, y, x)));
        CHECK(verify_hom(B, B, compose(W, x, y)));
      }
    if (H1.generators.size() >= 2) CHECK(verify_hom(A, B, add(W, H1.generators[0], scale(W, 3, H1.generators[1]))));
    CHECK(compose(W, identity_hom(B), zero_hom(A, B)) == zero_hom(A, B));
  }
}

TEST_CASE("hom matrices intertwine the structure matrices") {
  std::mt19937_64 rng(47);
  auto F2 = FiniteRing::parse("GF(2)");
  for (int t = 0; t < 8; ++t) {
    const Display A = random_display(rng, F2, 2, 2, 1), B = random_display(rng, F2, 2, 2, 1);
    const WittRing& W = A.W();
    for (const auto& g : hom_displays(A, B).generators)
      CHECK(multiply(W, hom_p_matrix(W, g), A.matrix()) == multiply(W, B.matrix(), hom_twisted_matrix(W, g)));
  }
}
