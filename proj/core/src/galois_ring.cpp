#include "tdisp/galois_ring.hpp"

#include <algorithm>

#include "tdisp/error.hpp"

namespace tdisp {

GaloisRing::GaloisRing(int p, int n, std::vector<int> modulus)
    : p_(p), n_(n), r_(static_cast<int>(modulus.size()) - 1), pn_(1) {
  if (r_ < 1) throw PreconditionError("Galois ring modulus must have degree >= 1");
  for (int i = 0; i < n_; ++i) pn_ *= p_;
  for (int c : modulus) modulus_.push_back(((c % pn_) + pn_) % pn_);
  if (modulus_.back() != 1) throw PreconditionError("Galois ring modulus must be monic");
}

std::uint64_t GaloisRing::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < r_; ++i) s *= static_cast<std::uint64_t>(pn_);
  return s;
}

GaloisRing::Elem GaloisRing::one() const { return from_int(1); }

GaloisRing::Elem GaloisRing::from_int(long long k) const {
  Elem e = zero();
  e[0] = ((k % pn_) + pn_) % pn_;
  return e;
}

GaloisRing::Elem GaloisRing::add(const Elem& a, const Elem& b) const {
  Elem c(r_);
  for (int i = 0; i < r_; ++i) c[i] = (a[i] + b[i]) % pn_;
  return c;
}

GaloisRing::Elem GaloisRing::mul(const Elem& a, const Elem& b) const {
  std::vector<long long> prod(2 * r_ - 1, 0);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % pn_;
  // Reduce by the monic modulus from the top degree down.
  for (int d = 2 * r_ - 2; d >= r_; --d) {
    long long c = prod[d];
    if (!c) continue;
    for (int i = 0; i <= r_; ++i) {
      long long& t = prod[d - r_ + i];
      t = ((t - c * modulus_[i]) % pn_ + pn_) % pn_;
    }
  }
  return Elem(prod.begin(), prod.begin() + r_);
}

GaloisRing::Elem GaloisRing::pow(Elem a, unsigned long long e) const {
  Elem acc = one();
  while (e) {
    if (e & 1) acc = mul(acc, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return acc;
}

std::uint64_t GaloisRing::index(const Elem& a) const {
  std::uint64_t v = 0;
  for (int i = r_ - 1; i >= 0; --i) v = v * static_cast<std::uint64_t>(pn_) + static_cast<std::uint64_t>(a[i]);
  return v;
}

GaloisRing::Elem GaloisRing::teichmuller(const FiniteRing& Fq, RingElem a) const {
  auto c = Fq.coords(a);
  Elem lift(r_, 0);
  for (int i = 0; i < r_; ++i) lift[i] = c[i];
  unsigned long long e = 1;
  for (int i = 0; i < n_ - 1; ++i) e *= Fq.size();
  return pow(lift, e);
}

OracleReport galois_ring_oracle(const RingPtr& Fq, int n) {
  OracleReport rep;
  if (!Fq->is_field()) throw PreconditionError("galois_ring_oracle needs a finite field");
  std::vector<int> modulus = Fq->spec().kind == RingKind::GaloisField ? Fq->spec().modulus : std::vector<int>{0, 1};
  const int p = Fq->p();
  GaloisRing G(p, n, modulus);
  auto W = WittRing::get(Fq, n);
  if (G.size() != W->size()) {
    rep.failure = "cardinality mismatch";
    return rep;
  }
  std::vector<GaloisRing::Elem> phi(W->size());
  std::vector<char> hit(G.size(), 0);
  for (std::uint32_t i = 0; i < W->size(); ++i) {
    auto c = W->coords(WElem{i});
    GaloisRing::Elem acc = G.zero();
    long long pk = 1;
    for (int k = 0; k < n; ++k) {
      RingElem root = c[k];
      for (int t = 0; t < k; ++t) root = Fq->frobenius_inverse(root);
      GaloisRing::Elem term = G.teichmuller(*Fq, root);
      for (auto& x : term) x = (x * pk) % G.modulus_pn();
      acc = G.add(acc, term);
      pk *= p;
    }
    phi[i] = acc;
    auto idx = G.index(acc);
    if (hit[idx]) {
      rep.failure = "map is not injective at " + W->format(WElem{i});
      return rep;
    }
    hit[idx] = 1;
    rep.image.push_back(idx);
  }
  for (std::uint32_t a = 0; a < W->size(); ++a)
    for (std::uint32_t b = 0; b < W->size(); ++b) {
      if (phi[W->add(WElem{a}, WElem{b}).v] != G.add(phi[a], phi[b])) {
        rep.failure = "not additive at " + W->format(WElem{a}) + ", " + W->format(WElem{b});
        return rep;
      }
      if (phi[W->mul(WElem{a}, WElem{b}).v] != G.mul(phi[a], phi[b])) {
        rep.failure = "not multiplicative at " + W->format(WElem{a}) + ", " + W->format(WElem{b});
        return rep;
      }
    }
  if (phi[W->one().v] != G.one()) {
    rep.failure = "1 does not map to 1";
    return rep;
  }
  rep.isomorphic = true;
  return rep;
}

}  // namespace tdisp
