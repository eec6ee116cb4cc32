#include <doctest.h>

#include "../support/oracle.hpp"
#include "tdisp/error.hpp"
#include "tdisp/moduli.hpp"

using namespace tdisp;

namespace {

ModuliInstance instance(int p, int n, int h, int d) {
  return ModuliInstance(FiniteRing::parse("GF(" + std::to_string(p) + ")"), n, h, d);
}

}  // namespace

TEST_CASE("singleton instances") {
  for (int d : {0, 1}) {
    const ModuliInstance inst = instance(2, 1, 1, d);
    CHECK(inst.X().size() == 1);
    CHECK(inst.G().size() == 1);
    const ClassTable t = enumerate_orbits(inst);
    REQUIRE(t.classes.size() == 1);
    CHECK(t.classes[0].aut_order == 1);
    CHECK(mass_check(t).equal);
    CHECK(mass_check(t).lhs == 1);
    CHECK(count_nilpotent_locus(t).classes == static_cast<std::uint64_t>(d));
  }
}

TEST_CASE("h = 2, d = 1 over GF(2) at level one") {
  const ModuliInstance inst = instance(2, 1, 2, 1);
  CHECK(inst.X().size() == 6);
  CHECK(inst.G().size() == 4);
  const ClassTable t = enumerate_orbits(inst);
  std::uint64_t total = 0;
  for (const auto& c : t.classes) {
    total += c.orbit_size;
    CHECK(c.orbit_size * c.aut_order == 4);
  }
  CHECK(total == 6);
  const MassCheck m = mass_check(t);
  CHECK(m.rhs == mpq_class(3, 2));
  CHECK(m.lhs == m.rhs);
}

TEST_CASE("mass formula at level two") {
  const ModuliInstance inst = instance(2, 2, 2, 1);
  // |X| = 2^4 * 6, |G| = 2 * 2 * 2^4.
  CHECK(inst.x_count_formula() == 16 * 6);
  CHECK(inst.g_count_formula() == 2 * 2 * 16);
  const MassCheck m = mass_check(enumerate_orbits(inst));
  CHECK(m.rhs == mpq_class(3, 2));
  CHECK(m.equal);
}

TEST_CASE("|X| agrees with a brute force count over Z/p^n") {
  for (auto [p, n, h] : {std::tuple{2, 1, 2}, {2, 2, 2}, {3, 1, 2}, {2, 1, 3}}) {
    const ModuliInstance inst = instance(p, n, h, 0);
    CHECK(inst.X().size() == oracle::count_invertible(p, n, h));
    CHECK(inst.x_count_formula() == mpz_class(static_cast<unsigned long>(inst.X().size())));
  }
}

TEST_CASE("the group axioms and a left action, exhaustively") {
  for (auto [n, d] : {std::pair{1, 1}, {1, 0}, {2, 1}}) {
    const ModuliInstance inst = instance(2, n, 2, d);
    const auto& G = inst.G();
    const GroupElem e = inst.identity();
    for (const auto& M : inst.X()) CHECK(inst.act(e, M) == M);
    const std::size_t step = G.size() > 16 ? G.size() / 16 : 1;
    for (std::size_t i = 0; i < G.size(); i += step) {
      const GroupElem& g = G[i];
      const GroupElem gi = inst.inverse(g);
      CHECK(inst.multiply(g, gi).gp == e.gp);
      CHECK(inst.multiply(gi, g).gp == e.gp);
      for (std::size_t j = 0; j < G.size(); j += step) {
        const GroupElem gh = inst.multiply(g, G[j]);
        for (const auto& M : inst.X()) CHECK(inst.act(gh, M) == inst.act(g, inst.act(G[j], M)));
      }
    }
    inst.verify_action();
  }
}

TEST_CASE("orbits partition X and invariants are constant on them") {
  for (int d = 0; d <= 2; ++d) {
    const ModuliInstance inst = instance(2, 1, 2, d);
    const ClassTable t = enumerate_orbits(inst);
    std::vector<std::uint64_t> sizes(t.classes.size(), 0);
    for (auto o : t.orbit_of) ++sizes[o];
    for (std::size_t c = 0; c < t.classes.size(); ++c) CHECK(sizes[c] == t.classes[c].orbit_size);
    auto r = check_orbit_invariants(inst, t);
    CHECK_MESSAGE(r.ok, r.reason);
    CHECK(mass_check(t).equal);
  }
}

TEST_CASE("orbit membership agrees with the isomorphism solver") {
  const ModuliInstance a = instance(2, 1, 2, 1);
  const IsomCrossCheck ca = cross_check_isom(a, enumerate_orbits(a));
  CHECK(ca.ok);
  CHECK(ca.pairs == 21);  // 15 unordered pairs plus 6 reflexive ones
  const ModuliInstance b = instance(2, 2, 1, 1);
  CHECK(b.X().size() == 2);
  CHECK(cross_check_isom(b, enumerate_orbits(b)).ok);
}

TEST_CASE("the measured class counts") {
  struct Row {
    int p, n, h, d;
    std::size_t classes;
    mpq_class mass;
  };
  for (const Row& r : {Row{2, 1, 2, 1, 2, mpq_class(3, 2)}, Row{2, 2, 2, 1, 8, mpq_class(3, 2)}}) {
    const ClassTable t = enumerate_orbits(instance(r.p, r.n, r.h, r.d));
    CHECK(t.classes.size() == r.classes);
    CHECK(mass_check(t).lhs == r.mass);
  }
}

TEST_CASE("supersingular classes have slopes one half") {
  const ClassTable t = enumerate_orbits(instance(2, 2, 2, 1));
  int supersingular = 0;
  for (const auto& c : t.classes) {
    if (!c.slopes) continue;
    CHECK(c.nilpotent == (c.slopes->min_slope() > 0));
    if (c.slopes->slopes == std::vector<mpq_class>{mpq_class(1, 2), mpq_class(1, 2)}) ++supersingular;
  }
  CHECK(supersingular > 0);
}

TEST_CASE("enumeration does not depend on the worker count") {
  const ModuliInstance inst = instance(2, 2, 2, 1);
  const ClassTable one = enumerate_orbits(inst, {1, true, 5}), two = enumerate_orbits(inst, {2, true, 5});
  REQUIRE(one.classes.size() == two.classes.size());
  CHECK(one.orbit_of == two.orbit_of);
  for (std::size_t i = 0; i < one.classes.size(); ++i) {
    CHECK(one.classes[i].rep == two.classes[i].rep);
    CHECK(one.classes[i].aut_order == two.classes[i].aut_order);
    CHECK(one.classes[i].dual_rep == two.classes[i].dual_rep);
  }
}

TEST_CASE("dual classes pair type d with type h - d") {
  const ModuliInstance i1 = instance(2, 1, 2, 0), i2 = instance(2, 1, 2, 2);
  const ClassTable t1 = enumerate_orbits(i1), t2 = enumerate_orbits(i2);
  for (const auto& c : t1.classes) {
    const auto pos = i2.index_of(c.dual_rep);
    CHECK(t2.classes[t2.orbit_of[pos]].rep == c.dual_rep);
    CHECK(t2.classes[t2.orbit_of[pos]].aut_order == c.aut_order);
  }
}

TEST_CASE("instances beyond the budget are refused") {
  CHECK_THROWS_AS(ModuliInstance(FiniteRing::parse("GF(2)"), 3, 6, 3), GuardExceeded);
  CHECK_THROWS_AS(ModuliInstance(FiniteRing::parse("GF(2)"), 1, 3, 1, 100), GuardExceeded);
  CHECK_THROWS_AS(ModuliInstance(FiniteRing::parse("GF(2)[x]/x^2"), 1, 1, 0), PreconditionError);
  CHECK_THROWS_AS(ModuliInstance(FiniteRing::parse("GF(2)"), 1, 2, 3), PreconditionError);
}
