#pragma once

#include <vector>

#include "tdisp/witt.hpp"
#include "tdisp/zpn.hpp"

namespace tdisp {

/// Presentation of the additive group of W_n(R)^k as a Z/p^n-module.
///
/// Generators gamma_{e,j,b} = v^j[e_b] in entry e (e_b the F_p-basis of R);
/// every element has a unique digit expansion sum d * gamma with digits in
/// [0, p), obtained greedily from the lowest coordinate up.
class AdditivePresentation {
 public:
  AdditivePresentation(const WittRing& W, std::size_t entries);

  std::size_t entries() const { return entries_; }
  /// Generators per entry: n * dim R.
  std::size_t per_entry() const { return per_entry_; }
  std::size_t generators() const { return entries_ * per_entry_; }

  WElem generator(std::size_t g) const { return gens_[g % per_entry_]; }
  std::size_t entry_of(std::size_t g) const { return g / per_entry_; }

  /// Digits of a single entry value (length per_entry()).
  std::vector<long long> digits(WElem x) const;
  std::vector<long long> digits(const std::vector<WElem>& tuple) const;
  /// sum_g c_g gamma_g for arbitrary integer coefficients.
  std::vector<WElem> evaluate(const std::vector<long long>& coeffs) const;
  /// Relation columns p*gamma_g - digits(p*gamma_g).
  ZpnMatrix relations(const Zpn& Z) const;

 private:
  const WittRing& W_;
  std::size_t entries_;
  std::size_t per_entry_;
  std::vector<WElem> gens_;
};

}  // namespace tdisp
