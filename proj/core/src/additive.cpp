#include "tdisp/additive.hpp"

#include "tdisp/error.hpp"

namespace tdisp {

AdditivePresentation::AdditivePresentation(const WittRing& W, std::size_t entries)
    : W_(W), entries_(entries), per_entry_(static_cast<std::size_t>(W.level() * W.base().dim())) {
  const FiniteRing& R = W.base();
  for (int j = 0; j < W.level(); ++j)
    for (int b = 0; b < R.dim(); ++b) {
      std::vector<RingElem> c(W.level(), R.zero());
      c[j] = R.basis(b);
      gens_.push_back(W.from_coords(c));
    }
}

std::vector<long long> AdditivePresentation::digits(WElem x) const {
  const FiniteRing& R = W_.base();
  const int dim = R.dim();
  std::vector<long long> d(per_entry_, 0);
  for (int j = 0; j < W_.level(); ++j) {
    // Coordinates below j are already zero; coordinate j adds linearly.
    auto c = R.coords(W_.coord(x, j));
    for (int b = 0; b < dim; ++b) {
      d[j * dim + b] = c[b];
      if (c[b]) x = W_.sub(x, W_.scale(c[b], gens_[j * dim + b]));
    }
    if (W_.coord(x, j) != R.zero()) throw VerificationFailure("digit expansion failed to clear a coordinate");
  }
  if (x != W_.zero()) throw VerificationFailure("digit expansion left a remainder");
  return d;
}

std::vector<long long> AdditivePresentation::digits(const std::vector<WElem>& tuple) const {
  if (tuple.size() != entries_) throw PreconditionError("tuple length mismatch");
  std::vector<long long> d;
  d.reserve(generators());
  for (auto x : tuple) {
    auto e = digits(x);
    d.insert(d.end(), e.begin(), e.end());
  }
  return d;
}

std::vector<WElem> AdditivePresentation::evaluate(const std::vector<long long>& coeffs) const {
  if (coeffs.size() != generators()) throw PreconditionError("coefficient vector length mismatch");
  std::vector<WElem> t(entries_, W_.zero());
  for (std::size_t g = 0; g < coeffs.size(); ++g)
    if (coeffs[g]) t[entry_of(g)] = W_.add(t[entry_of(g)], W_.scale(coeffs[g], generator(g)));
  return t;
}

ZpnMatrix AdditivePresentation::relations(const Zpn& Z) const {
  const std::size_t N = generators();
  ZpnMatrix rel(N, N);
  std::vector<std::vector<long long>> local(per_entry_);
  for (std::size_t k = 0; k < per_entry_; ++k) local[k] = digits(W_.scale(W_.p(), gens_[k]));
  for (std::size_t g = 0; g < N; ++g) {
    const std::size_t base = entry_of(g) * per_entry_;
    const auto& d = local[g % per_entry_];
    for (std::size_t k = 0; k < per_entry_; ++k) rel(base + k, g) = Z.reduce(-d[k]);
    rel(g, g) = Z.reduce(rel(g, g) + W_.p());
  }
  return rel;
}

}  // namespace tdisp
