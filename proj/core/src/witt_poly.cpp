#include "tdisp/witt_poly.hpp"

#include <algorithm>
#include <mutex>
#include <string>
#include <unordered_map>

#include "tdisp/error.hpp"

namespace tdisp {

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto b : m.e) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

namespace {

using Accum = std::unordered_map<Monomial, mpz_class, MonomialHash>;

std::vector<IntPoly::Term> collect(Accum&& acc) {
  std::vector<IntPoly::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.emplace_back(m, std::move(c));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace

IntPoly IntPoly::variable(int slot) {
  IntPoly p;
  Monomial m;
  m.e.at(slot) = 1;
  p.terms_.emplace_back(m, mpz_class(1));
  return p;
}

IntPoly IntPoly::constant(const mpz_class& c) {
  IntPoly p;
  if (c != 0) p.terms_.emplace_back(Monomial{}, c);
  return p;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  IntPoly r;
  auto i = terms_.begin(), j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
      r.terms_.push_back(*i++);
    } else if (i == terms_.end() || j->first < i->first) {
      r.terms_.push_back(*j++);
    } else {
      mpz_class c = i->second + j->second;
      if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + o.scaled(-1); }

IntPoly IntPoly::scaled(const mpz_class& c) const {
  IntPoly r;
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  Accum acc;
  acc.reserve(terms_.size() * o.terms_.size() / 2 + 1);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      for (std::size_t s = 0; s < m.e.size(); ++s) {
        unsigned e = static_cast<unsigned>(ma.e[s]) + mb.e[s];
        if (e > 255) throw GuardExceeded("Witt polynomial exponent overflow");
        m.e[s] = static_cast<std::uint8_t>(e);
      }
      acc[m] += ca * cb;
    }
  IntPoly r;
  r.terms_ = collect(std::move(acc));
  return r;
}

IntPoly IntPoly::pow(unsigned e) const {
  IntPoly result = constant(1);
  IntPoly base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

IntPoly IntPoly::divided_exact(const mpz_class& d) const {
  IntPoly r = *this;
  for (auto& t : r.terms_) {
    if (!mpz_divisible_p(t.second.get_mpz_t(), d.get_mpz_t()))
      throw VerificationFailure("Witt recursion: coefficient not divisible by " + d.get_str());
    mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), d.get_mpz_t());
  }
  return r;
}

int TableGuard::limit(int p) const {
  auto it = max_level.find(p);
  return it == max_level.end() ? fallback : it->second;
}

IntPoly WittPolynomialTable::ghost(int p, int k, int offset) {
  IntPoly w;
  mpz_class pi = 1;
  unsigned e = 1;
  for (int i = 0; i < k; ++i) e *= static_cast<unsigned>(p);
  for (int i = 0; i <= k; ++i) {
    w = w + IntPoly::variable(offset + i).pow(e).scaled(pi);
    pi *= p;
    e /= static_cast<unsigned>(p);
  }
  return w;
}

namespace {

// Per-prime incremental generation state.
struct Growth {
  std::vector<IntPoly> sum, prod;
  // pow_sum[i][j] = S_i^{p^j}
  std::vector<std::vector<IntPoly>> pow_sum, pow_prod;
};

void extend(Growth& g, int p, int level) {
  const mpz_class P(p);
  while (static_cast<int>(g.sum.size()) < level) {
    const int k = static_cast<int>(g.sum.size());
    IntPoly wx = WittPolynomialTable::ghost(p, k, 0);
    IntPoly wy = WittPolynomialTable::ghost(p, k, kMaxWittLevel);
    IntPoly rs = wx + wy;
    IntPoly rp = wx * wy;
    mpz_class pi = 1;
    for (int i = 0; i < k; ++i) {
      const int j = k - i;
      while (static_cast<int>(g.pow_sum[i].size()) <= j) {
        g.pow_sum[i].push_back(g.pow_sum[i].back().pow(static_cast<unsigned>(p)));
        g.pow_prod[i].push_back(g.pow_prod[i].back().pow(static_cast<unsigned>(p)));
      }
      rs = rs - g.pow_sum[i][j].scaled(pi);
      rp = rp - g.pow_prod[i][j].scaled(pi);
      pi *= P;
    }
    g.sum.push_back(rs.divided_exact(pi));
    g.prod.push_back(rp.divided_exact(pi));
    g.pow_sum.push_back({g.sum.back()});
    g.pow_prod.push_back({g.prod.back()});
  }
}

std::vector<ModTerm> reduce_mod(const IntPoly& poly, int p) {
  std::vector<ModTerm> out;
  for (const auto& [m, c] : poly.terms()) {
    mpz_class r = c % p;
    if (r < 0) r += p;
    if (r == 0) continue;
    ModTerm t;
    t.coef = static_cast<std::uint32_t>(r.get_ui());
    for (std::size_t s = 0; s < m.e.size(); ++s)
      if (m.e[s]) t.factors.emplace_back(static_cast<std::uint8_t>(s), m.e[s]);
    out.push_back(std::move(t));
  }
  return out;
}

std::mutex g_mutex;
std::map<int, Growth> g_growth;
std::map<std::pair<int, int>, std::shared_ptr<const WittPolynomialTable>> g_tables;

}  // namespace

std::shared_ptr<const WittPolynomialTable> WittPolynomialTable::get(int p, int level, const TableGuard& guard) {
  if (level < 1) throw PreconditionError("Witt level must be >= 1");
  if (level > guard.limit(p) || level > kMaxWittLevel)
    throw GuardExceeded("Witt polynomial tables for p=" + std::to_string(p) + " limited to level " +
                        std::to_string(std::min(guard.limit(p), kMaxWittLevel)) + " (requested " +
                        std::to_string(level) + ")");
  std::lock_guard<std::mutex> lock(g_mutex);
  auto key = std::make_pair(p, level);
  if (auto it = g_tables.find(key); it != g_tables.end()) return it->second;
  Growth& g = g_growth[p];
  extend(g, p, level);
  std::shared_ptr<WittPolynomialTable> t(new WittPolynomialTable());
  t->p_ = p;
  for (int k = 0; k < level; ++k) {
    t->sum_.push_back(g.sum[k]);
    t->prod_.push_back(g.prod[k]);
    t->sum_mod_.push_back(reduce_mod(g.sum[k], p));
    t->prod_mod_.push_back(reduce_mod(g.prod[k], p));
  }
  g_tables[key] = t;
  return t;
}

bool WittPolynomialTable::ghost_identities_hold() const {
  // Independent of the generation path: compose the stored S_i/P_i into
  // ghost components from scratch.
  for (int k = 0; k < level(); ++k) {
    IntPoly ws, wp;
    mpz_class pi = 1;
    unsigned e = 1;
    for (int i = 0; i < k; ++i) e *= static_cast<unsigned>(p_);
    for (int i = 0; i <= k; ++i) {
      ws = ws + sum_[i].pow(e).scaled(pi);
      wp = wp + prod_[i].pow(e).scaled(pi);
      pi *= p_;
      e /= static_cast<unsigned>(p_);
    }
    IntPoly wx = ghost(p_, k, 0), wy = ghost(p_, k, kMaxWittLevel);
    if (!(ws - wx - wy).is_zero()) return false;
    if (!(wp - wx * wy).is_zero()) return false;
  }
  return true;
}

}  // namespace tdisp
