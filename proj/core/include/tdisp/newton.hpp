#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tdisp/dieudonne.hpp"

namespace tdisp {

/// Slopes in [0,1], nondecreasing, one per rank; their sum is d.
struct NewtonPolygon {
  std::vector<mpq_class> slopes;

  /// (slope, multiplicity) in increasing slope order.
  std::vector<std::pair<mpq_class, int>> segments() const;
  mpq_class min_slope() const { return slopes.front(); }
  friend bool operator==(const NewtonPolygon& a, const NewtonPolygon& b) { return a.slopes == b.slopes; }
};

/// Slopes of V on M over W_n(F_q), q = p^r: the characteristic polynomial of
/// the linear map f^(r-1)(V#) ... f(V#) V# = f^r o V^r, its p-adic lower
/// hull, divided by r. The constant term has valuation r d exactly. Throws
/// InsufficientLevel when a coefficient hidden by p^n could still lie
/// below the hull, PreconditionError for the empty module.
NewtonPolygon newton_polygon(const DieudonneModule& Mod);

std::string format_slope(const mpq_class& s);

}  // namespace tdisp
