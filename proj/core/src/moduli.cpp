#include "tdisp/moduli.hpp"

#include <algorithm>
#include <exception>
#include <random>
#include <thread>

#include "tdisp/dieudonne.hpp"
#include "tdisp/error.hpp"

namespace tdisp {

namespace {

mpz_class gl_count_field(const mpz_class& q, int m) {
  mpz_class total = 1, qm;
  mpz_pow_ui(qm.get_mpz_t(), q.get_mpz_t(), m);
  for (int i = 0; i < m; ++i) {
    mpz_class qi;
    mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), i);
    total *= qm - qi;
  }
  return total;
}

mpz_class gl_count_witt(const mpz_class& q, int n, int m) {
  mpz_class lift;
  mpz_pow_ui(lift.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>((n - 1) * m * m));
  return lift * gl_count_field(q, m);
}

// |W|^cells, or nullopt once it passes limit.
std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::uint64_t cells, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < cells; ++i) {
    if (v > limit / base) return std::nullopt;
    v *= base;
  }
  return v;
}

WMatrix decode(std::uint64_t idx, std::size_t r, std::size_t c, std::uint32_t base) {
  WMatrix m(r, c);
  for (std::size_t i = m.a.size(); i-- > 0;) {
    m.a[i] = WElem{static_cast<std::uint32_t>(idx % base)};
    idx /= base;
  }
  return m;
}

// All r x c matrices in lexicographic order, optionally only invertible ones.
std::vector<WMatrix> all_matrices(const WittRing& W, std::size_t r, std::size_t c, bool invertible,
                                  std::uint64_t budget, const char* what) {
  auto count = bounded_power(W.size(), r * c, budget);
  if (!count) throw GuardExceeded(std::string("enumerating ") + what + " exceeds the budget");
  std::vector<WMatrix> out;
  for (std::uint64_t i = 0; i < *count; ++i) {
    WMatrix m = decode(i, r, c, W.size());
    if (!invertible || is_invertible(W, m)) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

ModuliInstance::ModuliInstance(RingPtr k, int n, int h, int d, std::uint64_t budget)
    : k_(std::move(k)), h_(h), d_(d), budget_(budget) {
  if (!k_->is_field()) throw PreconditionError("moduli counts are over finite fields, got " + k_->name());
  if (h < 1 || d < 0 || d > h) throw PreconditionError("need h >= 1 and 0 <= d <= h");
  if (n < 1) throw PreconditionError("level must be positive");
  if (budget_ == 0) throw PreconditionError("budget must be positive");
  W_ = WittRing::get(k_, n);
  const mpz_class work = x_count_formula() + g_count_formula();
  if (work > mpz_class(std::to_string(budget_)))
    throw GuardExceeded("|X| + |G| = " + work.get_str() + " exceeds the budget " + std::to_string(budget_));
  if (!bounded_power(W_->size(), static_cast<std::uint64_t>(h) * h, budget_))
    throw GuardExceeded("enumerating candidate structure matrices exceeds the budget");
  X_ = all_matrices(*W_, h_, h_, true, budget_, "X");
  const int l = h_ - d_;
  auto As = all_matrices(*W_, l, l, true, budget_, "GL(L)");
  auto Ds = all_matrices(*W_, d_, d_, true, budget_, "GL(T)");
  auto Bs = all_matrices(*W_, l, d_, false, budget_, "Hom(T,L)");
  auto Zs = all_matrices(*W_, d_, l, false, budget_, "Hom(L,T)");
  for (const auto& A : As)
    for (const auto& B : Bs)
      for (const auto& Z : Zs)
        for (const auto& D : Ds) G_.push_back(make_elem(DisplayHom{A, B, Z, D}));
}

mpz_class ModuliInstance::x_count_formula() const { return gl_count_witt(mpz_class(k_->size()), level(), h_); }

mpz_class ModuliInstance::g_count_formula() const {
  const mpz_class q(k_->size());
  const int l = h_ - d_;
  mpz_class off;
  mpz_pow_ui(off.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(2 * level() * d_ * l));
  return gl_count_witt(q, level(), l) * gl_count_witt(q, level(), d_) * off;
}

std::size_t ModuliInstance::index_of(const WMatrix& M) const {
  const auto& xs = X();
  auto it = std::lower_bound(xs.begin(), xs.end(), M);
  if (it == xs.end() || *it != M) throw PreconditionError("matrix is not a point of X");
  return static_cast<std::size_t>(it - xs.begin());
}

GroupElem ModuliInstance::make_elem(DisplayHom g) const {
  GroupElem e;
  e.gp = hom_p_matrix(*W_, g);
  e.twisted_inv = tdisp::inverse(*W_, hom_twisted_matrix(*W_, g));
  e.g = std::move(g);
  return e;
}

GroupElem ModuliInstance::identity() const {
  const int l = h_ - d_;
  const WElem z = W_->zero();
  return make_elem(DisplayHom{tdisp::identity(*W_, l), WMatrix(l, d_, z), WMatrix(d_, l, z), tdisp::identity(*W_, d_)});
}

GroupElem ModuliInstance::multiply(const GroupElem& x, const GroupElem& y) const {
  return make_elem(compose(*W_, x.g, y.g));
}

GroupElem ModuliInstance::inverse(const GroupElem& x) const {
  const std::size_t l = h_ - d_, d = d_;
  const WMatrix pinv = tdisp::inverse(*W_, x.gp);
  DisplayHom g{block(pinv, 0, 0, l, l), block(pinv, 0, l, l, d), block(x.twisted_inv, l, 0, d, l),
               block(pinv, l, l, d, d)};
  GroupElem inv = make_elem(std::move(g));
  const GroupElem one = identity();
  if (multiply(x, inv).g != one.g || multiply(inv, x).g != one.g)
    throw VerificationFailure("group inverse does not invert");
  return inv;
}

WMatrix ModuliInstance::act(const GroupElem& g, const WMatrix& M) const {
  return tdisp::multiply(*W_, tdisp::multiply(*W_, g.gp, M), g.twisted_inv);
}

void ModuliInstance::verify_action(std::size_t samples, std::uint64_t seed) const {
  const auto& xs = X();
  const auto& gs = G();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_x(0, xs.size() - 1), pick_g(0, gs.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto& M = xs[pick_x(rng)];
    const auto& g = gs[pick_g(rng)];
    Display src = display(M), dst = display(act(g, M));
    if (auto c = verify_isomorphism(src, dst, g.g); !c)
      throw VerificationFailure("action formula does not give an isomorphism: " + c.reason);
  }
}

namespace {

// Positions in X of act(g, M) over all g, computed in chunks of G.
std::vector<std::uint32_t> orbit_images(const ModuliInstance& inst, const WMatrix& M, unsigned workers) {
  const auto& gs = inst.G();
  std::vector<std::uint32_t> pos(gs.size());
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) pos[i] = static_cast<std::uint32_t>(inst.index_of(inst.act(gs[i], M)));
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(gs.size())));
  if (workers == 1) {
    run(0, gs.size());
    return pos;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (gs.size() + workers - 1) / workers;
  std::vector<std::exception_ptr> errs(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        run(std::min(gs.size(), w * chunk), std::min(gs.size(), (w + 1) * chunk));
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return pos;
}

std::optional<NewtonPolygon> try_newton(const DieudonneModule& Mod) {
  try {
    return newton_polygon(Mod);
  } catch (const InsufficientLevel&) {
    return std::nullopt;
  }
}

}  // namespace

WMatrix dual_structure_matrix(const Display& D) { return to_display(dual(from_display(D))).matrix(); }

WMatrix orbit_minimum(const ModuliInstance& inst, const WMatrix& M) {
  WMatrix best = M;
  for (const auto& g : inst.G()) best = std::min(best, inst.act(g, M));
  return best;
}

ClassTable enumerate_orbits(const ModuliInstance& inst, const EnumerationOptions& opt) {
  const auto& xs = inst.X();
  const auto& gs = inst.G();
  if (mpz_class(std::to_string(xs.size())) != inst.x_count_formula())
    throw VerificationFailure("|X| disagrees with the closed form");
  if (mpz_class(std::to_string(gs.size())) != inst.g_count_formula())
    throw VerificationFailure("|G| disagrees with the closed form");
  inst.verify_action(48, opt.seed);

  ClassTable t;
  const FiniteRing& k = *inst.field();
  t.field = k.name();
  t.p = k.p();
  t.q = k.size();
  t.n = inst.level();
  t.h = inst.h();
  t.d = inst.d();
  t.x_count = inst.x_count_formula();
  t.g_count = inst.g_count_formula();

  constexpr std::uint32_t unseen = ~0u;
  t.orbit_of.assign(xs.size(), unseen);
  std::uint64_t evaluations = 0;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    if (t.orbit_of[s] != unseen) continue;
    evaluations += gs.size();
    if (evaluations > inst.budget()) throw GuardExceeded("orbit enumeration exceeds the budget of group-action evaluations");
    const auto pos = orbit_images(inst, xs[s], opt.workers);
    const auto id = static_cast<std::uint32_t>(t.classes.size());
    ClassEntry e;
    e.rep = xs[s];
    for (auto p : pos) {
      if (p == s) ++e.aut_order;
      if (t.orbit_of[p] == unseen) {
        t.orbit_of[p] = id;
        ++e.orbit_size;
      } else if (t.orbit_of[p] != id) {
        throw VerificationFailure("orbits overlap");
      }
    }
    if (e.orbit_size * e.aut_order != gs.size()) throw VerificationFailure("orbit-stabilizer count fails");
    e.d = inst.d();
    t.classes.push_back(std::move(e));
  }

  if (opt.invariants) {
    std::optional<ModuliInstance> dual_inst;
    if (inst.h() - inst.d() != inst.d())
      dual_inst.emplace(inst.field(), inst.level(), inst.h(), inst.h() - inst.d(), inst.budget());
    const ModuliInstance& di = dual_inst ? *dual_inst : inst;
    for (auto& e : t.classes) {
      Display D = inst.display(e.rep);
      e.nilpotent = is_nilpotent(D);
      auto Mod = from_display(D);
      e.slopes = try_newton(Mod);
      e.dual_rep = orbit_minimum(di, dual_structure_matrix(D));
    }
  }
  return t;
}

MassCheck mass_check(const ClassTable& table) {
  MassCheck m;
  m.lhs = 0;
  for (const auto& e : table.classes) m.lhs += mpq_class(1, e.aut_order);
  m.rhs = mpq_class(table.x_count, table.g_count);
  m.rhs.canonicalize();
  m.lhs.canonicalize();
  m.equal = m.lhs == m.rhs;
  return m;
}

NilpotentLocus count_nilpotent_locus(const ClassTable& table) {
  NilpotentLocus n;
  for (const auto& e : table.classes)
    if (e.nilpotent) {
      ++n.classes;
      n.points += e.orbit_size;
    }
  return n;
}

CheckResult check_orbit_invariants(const ModuliInstance& inst, const ClassTable& table) {
  const auto& xs = inst.X();
  std::optional<ModuliInstance> dual_inst;
  if (inst.h() - inst.d() != inst.d())
    dual_inst.emplace(inst.field(), inst.level(), inst.h(), inst.h() - inst.d(), inst.budget());
  const ModuliInstance& di = dual_inst ? *dual_inst : inst;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const ClassEntry& e = table.classes.at(table.orbit_of.at(i));
    Display D = inst.display(xs[i]);
    auto Mod = from_display(D);
    if (Mod.d() != e.d) return CheckResult::fail("d varies on an orbit");
    if (is_nilpotent(D) != e.nilpotent) return CheckResult::fail("nilpotence varies on an orbit");
    if (try_newton(Mod) != e.slopes) return CheckResult::fail("Newton data varies on an orbit");
    if (orbit_minimum(di, dual_structure_matrix(D)) != e.dual_rep) return CheckResult::fail("dual class varies on an orbit");
  }
  return {};
}

IsomCrossCheck cross_check_isom(const ModuliInstance& inst, const ClassTable& table) {
  IsomCrossCheck r;
  const auto& xs = inst.X();
  std::vector<Display> ds;
  for (const auto& M : xs) ds.push_back(inst.display(M));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i; j < xs.size(); ++j) {
      ++r.pairs;
      const bool same = table.orbit_of[i] == table.orbit_of[j];
      const bool iso = isom_displays(ds[i], ds[j]).has_value();
      if (same != iso) {
        r.ok = false;
        r.discrepancy = std::make_pair(i, j);
        return r;
      }
    }
  return r;
}

}  // namespace tdisp
