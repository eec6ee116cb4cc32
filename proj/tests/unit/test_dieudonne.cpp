#include <doctest.h>

#include <random>

#include "../support/oracle.hpp"
#include "selftest.hpp"
#include "tdisp/dieudonne.hpp"
#include "tdisp/error.hpp"
#include "tdisp/hom.hpp"
#include "tdisp/newton.hpp"

using namespace tdisp;
using tdisp::cli::random_display;

namespace {

WMatrix scalar(const WittRing& W, std::size_t h, long long k) { return scale(W, k, identity(W, h)); }

DieudonneModule random_module(std::mt19937_64& rng, const RingPtr& k, int n, int h) {
  return from_display(random_display(rng, k, n, h, static_cast<int>(rng() % (h + 1))));
}

NewtonPolygon slopes(std::initializer_list<std::pair<int, int>> fracs) {
  NewtonPolygon np;
  for (auto [a, b] : fracs) np.slopes.emplace_back(a, b);
  for (auto& s : np.slopes) s.canonicalize();
  return np;
}

}  // namespace

TEST_CASE("unit modules at level one") {
  // Etale: F = p f vanishes mod p and V is bijective; multiplicative: the reverse.
  auto F2 = FiniteRing::parse("GF(2)");
  const DieudonneModule E = from_display(Display::etale_unit(1, F2)), M = from_display(Display::mult_unit(1, F2));
  CHECK(E.F_matrix()(0, 0) == E.W().zero());
  CHECK(E.W().is_unit(E.V_matrix()(0, 0)));
  CHECK(M.W().is_unit(M.F_matrix()(0, 0)));
  CHECK(M.V_matrix()(0, 0) == M.W().zero());
  CHECK(check_level_one(E));
  CHECK(check_level_one(M));
  CHECK(E.d() == 0);
  CHECK(M.d() == 1);
}

TEST_CASE("F = V = 0 on rank one violates level-one exactness") {
  auto F2 = FiniteRing::parse("GF(2)");
  CHECK_THROWS_AS(DieudonneModule::make(F2, 1, WMatrix(1, 1), WMatrix(1, 1)), PreconditionError);
  auto W2 = WittRing::get(F2, 2);
  // FV = 1 is not p.
  CHECK_THROWS_AS(DieudonneModule::make(F2, 2, identity(*W2, 1), identity(*W2, 1)), PreconditionError);
}

TEST_CASE("to_display inverts from_display on canonical forms") {
  std::mt19937_64 rng(53);
  for (const char* name : {"GF(2)", "GF(2^2)", "GF(3)"})
    for (int t = 0; t < 12; ++t) {
      auto k = FiniteRing::parse(name);
      const int n = 1 + t % 2, h = 1 + t % 3;
      const Display D = random_display(rng, k, n, h, t % (h + 1));
      const Display C = canonicalize(D);
      CHECK(is_canonical(C));
      CHECK(from_display(C) == from_display(D));
      CHECK(to_display(from_display(D)) == C);
      CHECK(isom_displays(D, C).has_value());
    }
}

TEST_CASE("from_display of to_display is the module in the recorded basis") {
  std::mt19937_64 rng(59);
  auto F4 = FiniteRing::parse("GF(2^2)");
  for (int t = 0; t < 20; ++t) {
    const DieudonneModule Mod = random_module(rng, F4, 1 + t % 2, 1 + t % 3);
    const WittRing& W = Mod.W();
    // Scramble the basis so the module is not already in display form.
    WMatrix B;
    do {
      B = WMatrix(Mod.h(), Mod.h());
      for (auto& x : B.a) x = WElem{static_cast<std::uint32_t>(rng() % W.size())};
    } while (!is_invertible(W, B));
    const DieudonneModule N = Mod.transport(B);
    const DisplayRealization r = to_display_with_basis(N);
    CHECK(from_display(r.display) == N.transport(r.basis));
    CHECK(isom_displays(r.display, to_display(Mod)).has_value());
  }
}

TEST_CASE("reduction mod p keeps rank and level-one exactness") {
  auto F2 = FiniteRing::parse("GF(2)");
  CHECK(reduce_mod_p(from_display(Display::etale_unit(2, F2))) == from_display(Display::etale_unit(1, F2)));
  CHECK_THROWS_AS(reduce_mod_p(from_display(Display::etale_unit(1, F2))), PreconditionError);
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const DieudonneModule Mod = random_module(rng, F2, 2, 1 + t % 3);
    const DieudonneModule R = reduce_mod_p(Mod);
    CHECK(R.level() == 1);
    CHECK(R.h() == Mod.h());
    CHECK(check_level_one(R));
    CHECK(R.d() == Mod.d());
  }
}

TEST_CASE("duality exchanges the units and is an involution") {
  auto F2 = FiniteRing::parse("GF(2)");
  for (int n = 1; n <= 3; ++n)
    CHECK(dual(from_display(Display::etale_unit(n, F2))) == from_display(Display::mult_unit(n, F2)));
  std::mt19937_64 rng(67);
  for (int t = 0; t < 20; ++t) {
    const DieudonneModule Mod = random_module(rng, F2, 1 + t % 2, 1 + t % 3);
    CHECK(dual(dual(Mod)) == Mod);
    CHECK(dual(Mod).d() == Mod.h() - Mod.d());
    CHECK(check_fv(dual(Mod)));
    const DieudonneModule Other = random_module(rng, F2, Mod.level(), 1);
    CHECK(dual(direct_sum(Mod, Other)) == direct_sum(dual(Mod), dual(Other)));
  }
}

TEST_CASE("cokernel of multiplication by p on the unit modules") {
  auto F2 = FiniteRing::parse("GF(2)");
  for (int n = 2; n <= 3; ++n) {
    // Multiplicative unit: F is a unit, so F acts bijectively on the cokernel and V = p F^-1 kills it.
    const DieudonneModule M = from_display(Display::mult_unit(n, F2));
    const IsogenyCokernel C = isogeny_cokernel(M, M, scalar(M.W(), 1, 2));
    CHECK(C.order() == 2);
    CHECK(C.F[1] == 1);
    CHECK(C.V[1] == 0);
    const DieudonneModule E = from_display(Display::etale_unit(n, F2));
    const IsogenyCokernel CE = isogeny_cokernel(E, E, scalar(E.W(), 1, 2));
    CHECK(CE.order() == 2);
    CHECK(CE.F[1] == 0);
    CHECK(CE.V[1] == 1);
    CHECK(isogeny_cokernel(E, E, identity(E.W(), 1)).order() == 1);
  }
  const DieudonneModule E3 = from_display(Display::etale_unit(3, F2));
  const IsogenyCokernel C = isogeny_cokernel(E3, E3, scalar(E3.W(), 1, 4));
  CHECK(C.order() == 4);
  std::uint64_t max_order = 0;
  for (std::uint32_t x = 0; x < C.order(); ++x) max_order = std::max(max_order, C.additive_order(x));
  CHECK(max_order == 4);
  CHECK_THROWS_AS(isogeny_cokernel(E3, E3, scalar(E3.W(), 1, 8)), PreconditionError);
}

TEST_CASE("Newton slopes of the unit and supersingular modules") {
  auto F2 = FiniteRing::parse("GF(2)");
  for (int n = 1; n <= 3; ++n) {
    CHECK(newton_polygon(from_display(Display::etale_unit(n, F2))) == slopes({{0, 1}}));
    CHECK(newton_polygon(from_display(Display::mult_unit(n, F2))) == slopes({{1, 1}}));
  }
  auto W = WittRing::get(F2, 2);
  WMatrix anti(2, 2);
  anti(0, 1) = anti(1, 0) = W->one();
  const DieudonneModule S = from_display(Display::from_matrix(F2, 2, 1, anti));
  CHECK(newton_polygon(S) == slopes({{1, 2}, {1, 2}}));

  // Independent check over Z/4: the characteristic polynomial T^2 - tr T + det
  // of V# has v(tr) >= 1 and v(det) = 1, so the hull is the single segment of slope 1/2.
  std::vector<std::vector<long long>> v(2, std::vector<long long>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v[i][j] = oracle::to_int(*W, S.V_matrix()(i, j));
  CHECK(oracle::valuation(v[0][0] + v[1][1], 2, 2) >= 1);
  CHECK(oracle::valuation(oracle::det(v), 2, 2) == 1);
}

TEST_CASE("Newton polygon over GF(4) divides by the degree") {
  auto F4 = FiniteRing::parse("GF(2^2)");
  auto W = WittRing::get(F4, 2);
  WMatrix anti(2, 2);
  anti(0, 1) = anti(1, 0) = W->one();
  CHECK(newton_polygon(from_display(Display::from_matrix(F4, 2, 1, anti))) == slopes({{1, 2}, {1, 2}}));
}

TEST_CASE("slopes hidden by the precision raise InsufficientLevel") {
  auto F2 = FiniteRing::parse("GF(2)");
  const Display M = Display::mult_unit(1, F2);
  const Display S = direct_sum(direct_sum(M, M), M);
  CHECK_THROWS_AS(newton_polygon(from_display(S)), InsufficientLevel);
}

TEST_CASE("slope invariants on random modules") {
  std::mt19937_64 rng(71);
  for (const char* name : {"GF(2)", "GF(2^2)", "GF(3)"}) {
    auto k = FiniteRing::parse(name);
    for (int t = 0; t < 20; ++t) {
      const Display D = random_display(rng, k, 2 + t % 2, 1 + t % 3, static_cast<int>(rng() % (1 + 1 + t % 3)));
      NewtonPolygon np;
      try {
        np = newton_polygon(from_display(D));
      } catch (const InsufficientLevel&) {
        continue;
      }
      mpq_class sum = 0;
      for (std::size_t i = 0; i < np.slopes.size(); ++i) {
        CHECK(np.slopes[i] >= 0);
        CHECK(np.slopes[i] <= 1);
        if (i) CHECK(np.slopes[i - 1] <= np.slopes[i]);
        sum += np.slopes[i];
      }
      CHECK(sum == D.d());
      CHECK(is_nilpotent(D) == (np.min_slope() > 0));
    }
  }
}

TEST_CASE("slopes are formatted as reduced fractions") {
  CHECK(format_slope(mpq_class(0)) == "0");
  CHECK(format_slope(mpq_class(1)) == "1");
  CHECK(format_slope(mpq_class(2, 4)) == "1/2");
}
