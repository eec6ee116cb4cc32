#include "tdisp/newton.hpp"

#include <optional>

#include "tdisp/error.hpp"

namespace tdisp {

std::vector<std::pair<mpq_class, int>> NewtonPolygon::segments() const {
  std::vector<std::pair<mpq_class, int>> out;
  for (const auto& s : slopes) {
    if (!out.empty() && out.back().first == s)
      ++out.back().second;
    else
      out.emplace_back(s, 1);
  }
  return out;
}

std::string format_slope(const mpq_class& s) {
  mpq_class c = s;
  c.canonicalize();
  return c.get_str();
}

namespace {

// Sum of the principal k x k minors of m.
WElem principal_minor_sum(const WittRing& W, const WMatrix& m, int k) {
  const int h = static_cast<int>(m.rows);
  WElem acc = W.zero();
  for (unsigned mask = 0; mask < (1u << h); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<std::size_t> idx;
    for (int i = 0; i < h; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    WMatrix sub(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(a, b) = m(idx[a], idx[b]);
    acc = W.add(acc, determinant(W, sub));
  }
  return acc;
}

}  // namespace

NewtonPolygon newton_polygon(const DieudonneModule& Mod) {
  const WittRing& W = Mod.W();
  const int h = Mod.h(), n = W.level(), r = Mod.field()->dim();
  if (h == 0) throw PreconditionError("Newton polygon of the zero module");

  WMatrix Pi = Mod.V_matrix();
  for (int i = 1; i < r; ++i) Pi = multiply(W, frobenius(W, Mod.V_matrix(), i), Pi);

  const long end = static_cast<long>(r) * Mod.d();
  // val[k]: valuation of the coefficient of degree h-k, nullopt if >= n.
  std::vector<std::optional<long>> val(h + 1);
  val[0] = 0;
  for (int k = 1; k <= h; ++k) {
    WElem e = principal_minor_sum(W, Pi, k);
    if (e != W.zero()) val[k] = W.valuation(e);
  }
  if (val[h] && *val[h] != end) throw VerificationFailure("determinant of V has unexpected valuation");
  val[h] = end;

  // Lower convex hull over the known points, left to right.
  std::vector<int> hull;
  for (int k = 0; k <= h; ++k) {
    if (!val[k]) continue;
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull.back();
      // Drop b when it lies on or above the segment a -> k.
      mpz_class lhs = mpz_class(*val[b] - *val[a]) * (k - a);
      mpz_class rhs = mpz_class(*val[k] - *val[a]) * (b - a);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }

  NewtonPolygon np;
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    int a = hull[s], b = hull[s + 1];
    mpq_class slope(*val[b] - *val[a], b - a);
    slope.canonicalize();
    for (int k = a + 1; k < b; ++k) {
      // An unknown coefficient sits at valuation >= n; it cannot undercut
      // the hull only if the hull stays <= n there.
      mpq_class at = mpq_class(*val[a]) + slope * (k - a);
      if (!val[k] && at > n) throw InsufficientLevel("level " + std::to_string(n) + " does not determine the Newton polygon");
    }
    mpq_class norm = slope / r;
    norm.canonicalize();
    for (int k = a; k < b; ++k) np.slopes.push_back(norm);
  }
  return np;
}

}  // namespace tdisp
