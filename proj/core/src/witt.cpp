#include "tdisp/witt.hpp"

#include <cctype>
#include <map>

#include "tdisp/error.hpp"

namespace tdisp {

namespace {

std::mutex g_cache_mutex;
std::map<std::pair<std::string, int>, WittPtr> g_cache;

// Splits on top-level commas (ring elements may be parenthesized tuples).
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

WittPtr WittRing::get(const RingPtr& R, int n, const TableGuard& guard) {
  if (n < 1) throw PreconditionError("Witt level must be >= 1");
  auto key = std::make_pair(R->name(), n);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;
  }
  auto table = WittPolynomialTable::get(R->p(), n, guard);
  WittPtr w(new WittRing(R, n, std::move(table)));
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  return g_cache.emplace(key, w).first->second;
}

WittRing::WittRing(RingPtr R, int n, std::shared_ptr<const WittPolynomialTable> table)
    : R_(std::move(R)), n_(n), table_(std::move(table)) {
  std::uint64_t s = 1;
  for (int i = 0; i < n_; ++i) {
    s *= R_->size();
    if (s > (1ull << 32) - 1) throw GuardExceeded("W_" + std::to_string(n_) + "(" + R_->name() + ") too large");
  }
  size_ = static_cast<std::uint32_t>(s);
  std::vector<RingElem> c(n_, R_->zero());
  c[0] = R_->one();
  one_ = from_coords(c);
}

std::vector<RingElem> WittRing::coords(WElem x) const {
  std::vector<RingElem> c(n_);
  std::uint32_t v = x.v;
  for (int i = n_ - 1; i >= 0; --i) {
    c[i] = RingElem{v % R_->size()};
    v /= R_->size();
  }
  return c;
}

RingElem WittRing::coord(WElem x, int i) const {
  std::uint32_t v = x.v;
  for (int k = n_ - 1; k > i; --k) v /= R_->size();
  return RingElem{v % R_->size()};
}

WElem WittRing::from_coords(const std::vector<RingElem>& c) const {
  if (static_cast<int>(c.size()) != n_) throw PreconditionError("Witt vector has wrong length");
  std::uint32_t v = 0;
  for (auto e : c) v = v * R_->size() + e.v;
  return WElem{v};
}

std::vector<RingElem> WittRing::eval(bool product, const std::vector<RingElem>& x,
                                     const std::vector<RingElem>& y) const {
  const FiniteRing& R = *R_;
  std::vector<RingElem> out(n_);
  for (int k = 0; k < n_; ++k) {
    const auto& terms = product ? table_->product_mod(k) : table_->sum_mod(k);
    RingElem acc = R.zero();
    for (const auto& t : terms) {
      RingElem val = R.from_int(t.coef);
      for (auto [slot, e] : t.factors) {
        RingElem b = slot < kMaxWittLevel ? x[slot] : y[slot - kMaxWittLevel];
        val = R.mul(val, R.pow(b, e));
        if (val == R.zero()) break;
      }
      acc = R.add(acc, val);
    }
    out[k] = acc;
  }
  return out;
}

WElem WittRing::add_raw(WElem x, WElem y) const { return from_coords(eval(false, coords(x), coords(y))); }
WElem WittRing::mul_raw(WElem x, WElem y) const { return from_coords(eval(true, coords(x), coords(y))); }

void WittRing::build_tables() const {
  std::call_once(tables_once_, [this] {
    if (size_ > kTableLimit) return;
    std::vector<std::uint32_t> at(std::size_t(size_) * size_), mt(std::size_t(size_) * size_);
    for (std::uint32_t a = 0; a < size_; ++a)
      for (std::uint32_t b = a; b < size_; ++b) {
        auto s = add_raw(WElem{a}, WElem{b}).v;
        auto m = mul_raw(WElem{a}, WElem{b}).v;
        at[a * size_ + b] = at[b * size_ + a] = s;
        mt[a * size_ + b] = mt[b * size_ + a] = m;
      }
    add_table_ = std::move(at);
    mul_table_ = std::move(mt);
  });
}

WElem WittRing::add(WElem x, WElem y) const {
  build_tables();
  if (!add_table_.empty()) return WElem{add_table_[std::size_t(x.v) * size_ + y.v]};
  return add_raw(x, y);
}

WElem WittRing::mul(WElem x, WElem y) const {
  build_tables();
  if (!mul_table_.empty()) return WElem{mul_table_[std::size_t(x.v) * size_ + y.v]};
  return mul_raw(x, y);
}

WElem WittRing::scale(long long k, WElem x) const {
  bool negate = k < 0;
  unsigned long long m = negate ? 0ull - static_cast<unsigned long long>(k) : static_cast<unsigned long long>(k);
  WElem acc = zero(), b = x;
  while (m) {
    if (m & 1) acc = add(acc, b);
    m >>= 1;
    if (m) b = add(b, b);
  }
  return negate ? neg(acc) : acc;
}

WElem WittRing::neg(WElem x) const {
  // The additive group has exponent dividing p^n.
  unsigned long long pn = 1;
  for (int i = 0; i < n_; ++i) pn *= static_cast<unsigned long long>(p());
  return scale(static_cast<long long>(pn - 1), x);
}

WElem WittRing::from_int(long long k) const { return scale(k, one_); }

WElem WittRing::pow(WElem x, unsigned long long e) const {
  WElem acc = one_, b = x;
  while (e) {
    if (e & 1) acc = mul(acc, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return acc;
}

WElem WittRing::frobenius(WElem x, int times) const {
  auto c = coords(x);
  for (auto& e : c)
    for (int t = 0; t < times; ++t) e = R_->frobenius(e);
  return from_coords(c);
}

WElem WittRing::frobenius_inverse(WElem x, int times) const {
  if (!R_->is_perfect()) throw PreconditionError("Frobenius inverse needs a perfect ring, got " + R_->name());
  auto c = coords(x);
  for (auto& e : c)
    for (int t = 0; t < times; ++t) e = R_->frobenius_inverse(e);
  return from_coords(c);
}

WElem WittRing::teichmuller(RingElem a) const {
  std::vector<RingElem> c(n_, R_->zero());
  c[0] = a;
  return from_coords(c);
}

bool WittRing::is_unit(WElem x) const { return R_->is_unit(residue(x)); }

WElem WittRing::inverse(WElem x) const {
  if (!is_unit(x)) throw PreconditionError("Witt vector " + format(x) + " is not a unit");
  // Newton iteration y <- y(2 - xy); the error lies in the augmentation
  // ideal, whose n-th power vanishes.
  WElem y = teichmuller(R_->inverse(residue(x)));
  const WElem two = from_int(2);
  for (int i = 0; i <= n_; ++i) y = mul(y, sub(two, mul(x, y)));
  if (mul(x, y) != one_) throw VerificationFailure("Witt inverse did not converge");
  return y;
}

int WittRing::valuation(WElem x) const {
  auto c = coords(x);
  for (int i = 0; i < n_; ++i)
    if (c[i] != R_->zero()) return i;
  return n_;
}

WElem WittRing::divide_by_p_power(WElem x, int k) const {
  if (valuation(x) < k) throw PreconditionError("element not divisible by p^" + std::to_string(k));
  // p^k y = v^k(f^k(y)), so y_i = f^{-k}(x_{i+k}).
  auto c = coords(x);
  std::vector<RingElem> y(n_, R_->zero());
  for (int i = 0; i + k < n_; ++i) {
    RingElem e = c[i + k];
    for (int t = 0; t < k; ++t) e = R_->frobenius_inverse(e);
    y[i] = e;
  }
  return from_coords(y);
}

std::string WittRing::format(WElem x) const {
  std::string s = "w[";
  auto c = coords(x);
  for (int i = 0; i < n_; ++i) s += (i ? "," : "") + R_->format(c[i]);
  return s + "]";
}

WElem WittRing::parse(const std::string& raw) const {
  std::string t;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.size() < 3 || t.compare(0, 2, "w[") != 0 || t.back() != ']')
    throw ParseError("expected a Witt literal w[...], got '" + raw + "'");
  auto parts = split_top(t.substr(2, t.size() - 3));
  if (static_cast<int>(parts.size()) != n_)
    throw ParseError("Witt literal '" + raw + "' has " + std::to_string(parts.size()) + " coordinates, level is " +
                     std::to_string(n_));
  std::vector<RingElem> c;
  for (const auto& part : parts) c.push_back(R_->parse_elem(part));
  return from_coords(c);
}

// ---- value-level functions ----

WittVector to_vector(const WittRing& W, WElem x) { return WittVector{W.base_ptr(), W.coords(x)}; }

WElem from_vector(const WittRing& W, const WittVector& x) {
  if (!x.ring->same_as(W.base())) throw PreconditionError("Witt vector over the wrong ring");
  return W.from_coords(x.coords);
}

namespace {

void check_same(const WittVector& x, const WittVector& y) {
  if (!x.ring || !y.ring) throw PreconditionError("Witt vector without a ring");
  if (!x.ring->same_as(*y.ring)) throw PreconditionError("Witt vectors over different rings");
  if (x.level() != y.level())
    throw PreconditionError("Witt level mismatch: " + std::to_string(x.level()) + " vs " + std::to_string(y.level()));
}

WittPtr ring_of(const WittVector& x) {
  if (!x.ring) throw PreconditionError("Witt vector without a ring");
  if (x.level() < 1) throw PreconditionError("empty Witt vector");
  return WittRing::get(x.ring, x.level());
}

void check_ideal(const WittVector& a) {
  if (a.level() < 2) throw PreconditionError("ideal elements live at level >= 2");
  if (a.coords[0] != a.ring->zero()) throw PreconditionError("not in the augmentation ideal: leading coordinate nonzero");
}

}  // namespace

WittVector witt_add(const WittVector& x, const WittVector& y) {
  check_same(x, y);
  auto W = ring_of(x);
  return to_vector(*W, W->add(W->from_coords(x.coords), W->from_coords(y.coords)));
}

WittVector witt_mul(const WittVector& x, const WittVector& y) {
  check_same(x, y);
  auto W = ring_of(x);
  return to_vector(*W, W->mul(W->from_coords(x.coords), W->from_coords(y.coords)));
}

WittVector witt_neg(const WittVector& x) {
  auto W = ring_of(x);
  return to_vector(*W, W->neg(W->from_coords(x.coords)));
}

WittVector witt_frobenius(const WittVector& x) {
  WittVector r = x;
  for (auto& e : r.coords) e = x.ring->frobenius(e);
  return r;
}

WittVector witt_verschiebung(const WittVector& x) {
  WittVector r{x.ring, {x.ring->zero()}};
  r.coords.insert(r.coords.end(), x.coords.begin(), x.coords.end());
  return r;
}

WittVector witt_f1(const WittVector& a) {
  check_ideal(a);
  return WittVector{a.ring, std::vector<RingElem>(a.coords.begin() + 1, a.coords.end())};
}

WittVector witt_teichmuller(const RingPtr& R, RingElem a, int n) {
  if (n < 1) throw PreconditionError("Witt level must be >= 1");
  WittVector r{R, std::vector<RingElem>(n, R->zero())};
  r.coords[0] = a;
  return r;
}

WittVector witt_restrict(const WittVector& x) {
  if (x.level() < 2) throw PreconditionError("cannot restrict below level 1");
  return WittVector{x.ring, std::vector<RingElem>(x.coords.begin(), x.coords.end() - 1)};
}

WittVector witt_ideal_action(const WittVector& s, const WittVector& a) {
  check_ideal(a);
  if (!s.ring->same_as(*a.ring)) throw PreconditionError("Witt vectors over different rings");
  if (a.level() != s.level() + 1) throw PreconditionError("ideal element must be one level above the scalar");
  return witt_verschiebung(witt_mul(witt_frobenius(s), witt_f1(a)));
}

WittVector witt_ideal_inclusion(const WittVector& a) {
  check_ideal(a);
  return witt_restrict(a);
}

WElem verschiebung(const WittRing& Wn, const WittRing& Wn1, WElem x) {
  auto c = Wn.coords(x);
  c.insert(c.begin(), Wn.base().zero());
  return Wn1.from_coords(c);
}

WElem f1(const WittRing& Wn1, const WittRing& Wn, WElem a) {
  auto c = Wn1.coords(a);
  if (c[0] != Wn1.base().zero()) throw PreconditionError("f1 needs a zero leading coordinate");
  c.erase(c.begin());
  return Wn.from_coords(c);
}

WElem restrict_to(const WittRing& Wn1, const WittRing& Wn, WElem x) {
  auto c = Wn1.coords(x);
  c.resize(Wn.level());
  return Wn.from_coords(c);
}

WElem ideal_inclusion(const WittRing& Wn, WElem z) {
  auto c = Wn.coords(z);
  c.pop_back();
  c.insert(c.begin(), Wn.base().zero());
  return Wn.from_coords(c);
}

WElem ideal_action(const WittRing& Wn, WElem s, WElem z) { return Wn.mul(Wn.frobenius(s), z); }

}  // namespace tdisp
