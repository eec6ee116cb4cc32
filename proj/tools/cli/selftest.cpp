#include "selftest.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "tdisp/dieudonne.hpp"
#include "tdisp/error.hpp"
#include "tdisp/galois_ring.hpp"
#include "tdisp/hom.hpp"
#include "tdisp/io.hpp"
#include "tdisp/moduli.hpp"
#include "tdisp/newton.hpp"
#include "tdisp/witt_poly.hpp"

namespace tdisp::cli {

namespace {

using Clock = std::chrono::steady_clock;

// Runs body, which fills ok/detail, and stamps the elapsed time; a
// criterion over its time limit fails.
CriterionResult timed(std::string id, std::string title, double limit, const std::function<void(CriterionResult&)>& body) {
  CriterionResult r{std::move(id), std::move(title), true, "", 0, limit};
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.ok = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (r.seconds > limit) {
    r.ok = false;
    r.detail += " (over the time limit)";
  }
  return r;
}

void fail(CriterionResult& r, const std::string& why) {
  if (r.ok) r.detail = why;
  r.ok = false;
}

// Suite shared by the pre-display and V# criteria.
std::vector<Display> display_suite(std::uint64_t seed, const std::vector<std::string>& rings, int count, int max_n,
                                   int max_h) {
  std::mt19937_64 rng(seed);
  std::vector<Display> out;
  for (int i = 0; i < count; ++i) {
    auto R = FiniteRing::parse(rings[std::uniform_int_distribution<std::size_t>(0, rings.size() - 1)(rng)]);
    const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
    const int h = std::uniform_int_distribution<int>(1, max_h)(rng);
    const int d = std::uniform_int_distribution<int>(0, h)(rng);
    out.push_back(random_display(rng, R, n, h, d));
  }
  return out;
}

const std::vector<std::string> kDisplayRings = {"GF(2)", "GF(2^2)", "GF(2)[x]/x^3"};

std::vector<int> primes(Profile profile, std::vector<int> full) {
  if (profile == Profile::quick) return {2};
  return full;
}

}  // namespace

Display random_display(std::mt19937_64& rng, const RingPtr& R, int n, int h, int d) {
  auto W = WittRing::get(R, n);
  std::uniform_int_distribution<std::uint32_t> entry(0, W->size() - 1);
  for (;;) {
    WMatrix M(h, h);
    for (auto& e : M.a) e = WElem{entry(rng)};
    if (is_invertible(*W, M)) return Display::from_matrix(R, n, d, std::move(M));
  }
}

CriterionResult check_witt_correctness(Profile profile) {
  return timed("AC1", "Witt correctness: ghost identities, Galois ring oracle, frame identities", 10, [&](CriterionResult& r) {
    const std::vector<std::pair<int, int>> tables = {{2, 5}, {3, 4}, {5, 3}};
    int generated = 0;
    for (auto [p, top] : tables) {
      if (profile == Profile::quick && p != 2) continue;
      for (int n = 1; n <= top; ++n) {
        ++generated;
        if (!WittPolynomialTable::get(p, n)->ghost_identities_hold())
          fail(r, "ghost identities fail for p=" + std::to_string(p) + " n=" + std::to_string(n));
      }
    }
    int oracles = 0;
    for (int p : primes(profile, {2, 3}))
      for (int n = 1; n <= 3; ++n) {
        ++oracles;
        auto rep = galois_ring_oracle(FiniteRing::parse("GF(" + std::to_string(p) + ")"), n);
        if (!rep.isomorphic) fail(r, "W_" + std::to_string(n) + "(F_" + std::to_string(p) + ") vs Z/p^n: " + rep.failure);
      }
    // (ring, top level) with |W_top(R)| <= 64.
    std::vector<std::pair<std::string, int>> rings = {{"GF(2)", 5},        {"GF(2^2)", 3},      {"GF(2)[x]/x^2", 3},
                                                      {"GF(2)[x]/x^3", 2}, {"GF(2^3)", 2},      {"GF(2)*GF(2)", 3}};
    if (profile == Profile::full) {
      rings.emplace_back("GF(3)", 3);
      rings.emplace_back("GF(5)", 2);
      rings.emplace_back("GF(7)", 2);
    }
    std::uint64_t checked = 0;
    for (const auto& [name, top] : rings) {
      auto R = FiniteRing::parse(name);
      for (int n1 = 2; n1 <= top; ++n1) {
        auto Wn = WittRing::get(R, n1 - 1), Wn1 = WittRing::get(R, n1);
        for (std::uint32_t i = 0; i < Wn->size(); ++i) {
          const WElem x{i};
          auto c = Wn->coords(x);
          c.push_back(R->zero());
          const WElem lift = Wn1->from_coords(c);
          const WElem vx = verschiebung(*Wn, *Wn1, x);
          if (Wn1->frobenius(vx) != Wn1->scale(R->p(), lift)) fail(r, "f v != p over " + name);
          if (f1(*Wn1, *Wn, vx) != x) fail(r, "f1 v != id over " + name);
          // vx runs over the whole ideal I_{n+1} as x runs over W_n.
          if (Wn->scale(R->p(), f1(*Wn1, *Wn, vx)) != restrict_to(*Wn1, *Wn, Wn1->frobenius(vx)))
            fail(r, "p f1 != f on the ideal over " + name);
          ++checked;
        }
      }
    }
    if (r.ok)
      r.detail = std::to_string(generated) + " tables, " + std::to_string(oracles) + " oracle isomorphisms, " +
                 std::to_string(checked) + " frame checks";
  });
}

CriterionResult check_predisplay_suite(std::uint64_t seed) {
  return timed("AC2", "pre-display axioms on 200 random displays", 30, [&](CriterionResult& r) {
    auto suite = display_suite(seed, kDisplayRings, 200, 2, 3);
    for (const auto& D : suite)
      if (auto c = check_predisplay_axioms(D); !c) fail(r, D.ring()->name() + ": " + c.reason);
    if (r.ok) r.detail = std::to_string(suite.size()) + " displays";
  });
}

CriterionResult check_vsharp_suite(std::uint64_t seed) {
  return timed("AC3", "V# contract on all of Q, F#V# = V#F# = p", 30, [&](CriterionResult& r) {
    auto suite = display_suite(seed, kDisplayRings, 200, 2, 3);
    std::uint64_t elements = 0;
    for (const auto& D : suite) {
      if (auto c = check_vsharp(D, 1ull << 18); !c) fail(r, D.ring()->name() + ": " + c.reason);
      elements += D.q_size();
    }
    if (r.ok) r.detail = std::to_string(suite.size()) + " displays, " + std::to_string(elements) + " elements of Q";
  });
}

CriterionResult check_unit_hom_vanishing() {
  return timed("AC4", "Hom(etale unit, multiplicative unit) = 0", 5, [&](CriterionResult& r) {
    int cases = 0;
    for (const auto& name : kDisplayRings) {
      auto R = FiniteRing::parse(name);
      for (int n = 1; n <= 3; ++n) {
        auto E = Display::etale_unit(n, R), M = Display::mult_unit(n, R);
        auto H = hom_displays(E, M);
        if (H.log_order != 0 || !H.generators.empty()) fail(r, "nonzero Hom over " + name + " n=" + std::to_string(n));
        // Direct search: a hom E -> M is a single entry z (C = v(z)).
        const WittRing& W = E.W();
        for (std::uint32_t z = 0; z < W.size(); ++z) {
          DisplayHom g = zero_hom(E, M);
          g.Z(0, 0) = WElem{z};
          if (static_cast<bool>(verify_hom(E, M, g)) != (z == 0)) fail(r, "direct search disagrees over " + name);
        }
        ++cases;
      }
    }
    if (r.ok) r.detail = std::to_string(cases) + " (ring, level) pairs";
  });
}

CriterionResult check_mass_formula(Profile profile) {
  return timed("AC5", "mass formula sum 1/|Aut| = |X|/|G|", 120, [&](CriterionResult& r) {
    struct Case {
      int p, n, h;
    };
    std::vector<Case> cases;
    for (int p : primes(profile, {2, 3}))
      for (int n = 1; n <= 2; ++n)
        for (int h = 1; h <= 2; ++h) cases.push_back({p, n, h});
    cases.push_back({2, 1, 3});
    int tables = 0;
    for (auto c : cases)
      for (int d = 0; d <= c.h; ++d) {
        ModuliInstance inst(FiniteRing::parse("GF(" + std::to_string(c.p) + ")"), c.n, c.h, d);
        EnumerationOptions opt;
        opt.invariants = false;
        auto t = enumerate_orbits(inst, opt);
        auto m = mass_check(t);
        const std::string tag = "(" + std::to_string(c.p) + "," + std::to_string(c.n) + "," + std::to_string(c.h) + "," +
                                std::to_string(d) + ")";
        if (!m.equal) fail(r, tag + ": " + m.lhs.get_str() + " != " + m.rhs.get_str());
        if (c.p == 2 && c.n == 1 && c.h == 2 && d == 1 && m.rhs != mpq_class(3, 2)) fail(r, "(2,1,2,1) mass is not 3/2");
        ++tables;
      }
    if (r.ok) r.detail = std::to_string(tables) + " instances, (2,1,2,1) = 3/2";
  });
}

CriterionResult check_isom_oracle() {
  return timed("AC6", "same orbit <=> isom_displays", 120, [&](CriterionResult& r) {
    std::uint64_t pairs = 0;
    auto k = FiniteRing::parse("GF(2)");
    std::vector<std::tuple<int, int, int>> cases = {{1, 2, 0}, {1, 2, 1}, {1, 2, 2}, {2, 1, 0}, {2, 1, 1}};
    for (auto [n, h, d] : cases) {
      ModuliInstance inst(k, n, h, d);
      EnumerationOptions opt;
      opt.invariants = false;
      auto t = enumerate_orbits(inst, opt);
      auto c = cross_check_isom(inst, t);
      pairs += c.pairs;
      if (!c.ok)
        fail(r, "discrepancy at n=" + std::to_string(n) + " h=" + std::to_string(h) + " d=" + std::to_string(d) + " pair (" +
                    std::to_string(c.discrepancy->first) + "," + std::to_string(c.discrepancy->second) + ")");
    }
    if (r.ok) r.detail = std::to_string(pairs) + " pairs";
  });
}

CriterionResult check_dieudonne_round_trip(std::uint64_t seed) {
  return timed("AC7", "Dieudonne round trips", 60, [&](CriterionResult& r) {
    auto suite = display_suite(seed ^ 0x5eedull, {"GF(2)", "GF(2^2)"}, 50, 2, 3);
    for (const auto& D : suite) {
      const Display C = canonicalize(D);
      if (to_display(from_display(C)) != C) fail(r, "to_display(from_display(.)) moves a normal form");
      if (to_display(from_display(D)) != C) fail(r, "round trip differs from the normal form");
      auto Mod = from_display(D);
      auto real = to_display_with_basis(Mod);
      if (from_display(real.display) != Mod.transport(real.basis)) fail(r, "module round trip is not the basis change");
      if (!isom_displays(real.display, D)) fail(r, "round trip display is not isomorphic to the input");
    }
    if (r.ok) r.detail = std::to_string(suite.size()) + " displays";
  });
}

CriterionResult check_nilpotence_slopes() {
  return timed("AC8", "nilpotence <=> positive slopes; supersingular slopes 1/2, 1/2", 60, [&](CriterionResult& r) {
    auto k = FiniteRing::parse("GF(2)");
    int classes = 0, refused = 0;
    for (int h = 1; h <= 2; ++h)
      for (int d = 0; d <= h; ++d) {
        ModuliInstance inst(k, 2, h, d);
        auto t = enumerate_orbits(inst);
        for (const auto& e : t.classes) {
          if (!e.slopes) {
            ++refused;
            continue;
          }
          ++classes;
          if (e.nilpotent != (e.slopes->min_slope() > 0)) fail(r, "mismatch at h=" + std::to_string(h) + " d=" + std::to_string(d));
        }
      }
    auto W = WittRing::get(k, 2);
    WMatrix M(2, 2, W->zero());
    M(0, 1) = W->one();
    M(1, 0) = W->one();
    auto np = newton_polygon(from_display(Display::from_matrix(k, 2, 1, M)));
    if (np.slopes != std::vector<mpq_class>{mpq_class(1, 2), mpq_class(1, 2)}) fail(r, "supersingular slopes differ from 1/2, 1/2");
    if (r.ok) r.detail = std::to_string(classes) + " classes compared, " + std::to_string(refused) + " refused by the precision guard";
  });
}

CriterionResult check_duality() {
  return timed("AC9", "duality: involution, unit swap, d -> h - d", 30, [&](CriterionResult& r) {
    for (const char* name : {"GF(2)", "GF(2^2)", "GF(3)"}) {
      auto k = FiniteRing::parse(name);
      for (int n = 1; n <= 2; ++n) {
        auto e = from_display(Display::etale_unit(n, k)), m = from_display(Display::mult_unit(n, k));
        if (dual(e) != m || dual(m) != e) fail(r, std::string("dual does not swap the units over ") + name);
      }
    }
    auto k = FiniteRing::parse("GF(2)");
    int entries = 0;
    for (int n = 1; n <= 2; ++n)
      for (int h = 1; h <= 2; ++h)
        for (int d = 0; d <= h; ++d) {
          ModuliInstance inst(k, n, h, d), di(k, n, h, h - d);
          auto t = enumerate_orbits(inst);
          for (const auto& e : t.classes) {
            ++entries;
            auto dm = dual(from_display(inst.display(e.rep)));
            if (dm.d() != h - d) fail(r, "dual type is not h - d");
            if (orbit_minimum(inst, dual_structure_matrix(di.display(e.dual_rep))) != e.rep) fail(r, "dual is not an involution");
          }
        }
    if (r.ok) r.detail = std::to_string(entries) + " class table entries";
  });
}

CriterionResult check_determinism(const std::string& scratch_dir) {
  return timed("AC10", "classify output is byte-identical across runs", 60, [&](CriterionResult& r) {
    namespace fs = std::filesystem;
    fs::path root;
    bool temporary = scratch_dir.empty();
    if (temporary) {
      std::string tmpl = (fs::temp_directory_path() / "tdisp-selftest-XXXXXX").string();
      if (!mkdtemp(tmpl.data())) throw Error("cannot create a scratch directory");
      root = tmpl;
    } else {
      root = scratch_dir;
    }
    std::ostringstream sink;
    for (const std::string fmt : {"json", "csv"}) {
      ClassifyConfig cfg;
      cfg.p = 2;
      cfg.n = 2;
      cfg.h = 2;
      cfg.format = fmt;
      cfg.out = (root / "run1").string();
      auto first = classify_outputs(cfg);
      if (cmd_classify(cfg, sink, sink) != kOk) fail(r, "first classify run failed");
      cfg.out = (root / "run2").string();
      cfg.workers = 2;  // the worker count must not change the output
      auto second = classify_outputs(cfg);
      if (cmd_classify(cfg, sink, sink) != kOk) fail(r, "second classify run failed");
      for (std::size_t i = 0; i < first.size(); ++i)
        if (read_file(first[i]) != read_file(second[i])) fail(r, "files differ: " + first[i]);
    }
    if (temporary) fs::remove_all(root);
    if (r.ok) r.detail = "json and csv tables for p=2 n=2 h=2, 1 and 2 workers";
  });
}

std::vector<CriterionResult> run_acceptance_grid(Profile profile, std::uint64_t seed, const std::string& scratch_dir) {
  return {check_witt_correctness(profile), check_predisplay_suite(seed), check_vsharp_suite(seed), check_unit_hom_vanishing(),
          check_mass_formula(profile),     check_isom_oracle(),          check_dieudonne_round_trip(seed),
          check_nilpotence_slopes(),       check_duality(),              check_determinism(scratch_dir)};
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << std::left << std::setw(5) << r.id << (r.ok ? "PASS" : "FAIL") << "  " << r.title << "  [" << std::fixed
    << std::setprecision(2) << r.seconds << " s, limit " << std::setprecision(0) << r.limit_seconds << " s]";
  if (!r.detail.empty()) s << "  " << r.detail;
  return s.str();
}

int cmd_selftest(Profile profile, std::uint64_t seed, const std::string& scratch_dir, std::ostream& out) {
  bool ok = true;
  for (const auto& r : run_acceptance_grid(profile, seed, scratch_dir)) {
    out << format_result(r) << "\n";
    ok = ok && r.ok;
  }
  out << (ok ? "all criteria pass" : "some criteria FAIL") << "\n";
  return ok ? kOk : kCheckFailed;
}

}  // namespace tdisp::cli
