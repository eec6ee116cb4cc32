#include "tdisp/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tdisp/error.hpp"

namespace tdisp {

namespace {

std::uint32_t ipow(std::uint32_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    r *= base;
    if (r > (1ull << 31)) throw GuardExceeded("ring too large");
  }
  return static_cast<std::uint32_t>(r);
}

int mod(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

// Polynomial remainder over F_p, both operands low degree first.
std::vector<int> poly_rem(std::vector<int> a, const std::vector<int>& m, int p) {
  const int dm = static_cast<int>(m.size()) - 1;
  int lead_inv = 1;
  while ((lead_inv * m.back()) % p != 1) ++lead_inv;
  for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
    int c = mod(static_cast<long long>(a[i]) * lead_inv, p);
    if (c == 0) continue;
    for (int j = 0; j <= dm; ++j) a[i - dm + j] = mod(a[i - dm + j] - static_cast<long long>(c) * m[j], p);
  }
  a.resize(std::max(dm, 0));
  return a;
}

class SpecParser {
 public:
  explicit SpecParser(std::string s) {
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
  }

  RingSpec parse() {
    RingSpec r = product();
    if (pos_ != text_.size()) fail("trailing characters");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("ring spec '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  bool eat(const std::string& tok) {
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }
  int integer() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 6) fail("integer too large");
    return std::stoi(text_.substr(start, pos_ - start));
  }

  RingSpec product() {
    std::vector<RingSpec> fs{term()};
    while (eat("*")) fs.push_back(term());
    if (fs.size() == 1) return fs.front();
    return RingSpec::product(std::move(fs));
  }

  RingSpec term() {
    RingSpec r = atom();
    while (eat("[x]/x^")) r = RingSpec::truncated(r, integer());
    return r;
  }

  RingSpec atom() {
    if (eat("(")) {
      RingSpec r = product();
      expect(")");
      return r;
    }
    expect("GF(");
    int p = integer();
    int r = 1;
    if (eat("^")) r = integer();
    std::vector<int> modulus;
    if (eat("|")) {
      modulus.push_back(integer());
      while (eat(",")) modulus.push_back(integer());
    }
    expect(")");
    if (r == 1 && modulus.empty()) return RingSpec::prime_field(p);
    return RingSpec::galois_field(p, r, std::move(modulus));
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool is_irreducible(const std::vector<int>& poly, int p) {
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg < 1 || poly.back() % p == 0) return false;
  // Try every monic divisor of degree 1..deg/2.
  for (int dd = 1; 2 * dd <= deg; ++dd) {
    std::uint32_t count = ipow(static_cast<std::uint32_t>(p), dd);
    for (std::uint32_t idx = 0; idx < count; ++idx) {
      std::vector<int> div(dd + 1, 0);
      std::uint32_t t = idx;
      for (int j = 0; j < dd; ++j) {
        div[j] = static_cast<int>(t % p);
        t /= p;
      }
      div[dd] = 1;
      auto rem = poly_rem(poly, div, p);
      if (std::all_of(rem.begin(), rem.end(), [](int c) { return c == 0; })) return false;
    }
  }
  return true;
}

std::vector<int> default_modulus(int p, int r) {
  if (r == 1) return {0, 1};
  switch (p) {
    case 2:
      if (r == 2) return {1, 1, 1};
      if (r == 3) return {1, 1, 0, 1};
      if (r == 4) return {1, 1, 0, 0, 1};
      break;
    case 3:
      if (r == 2) return {1, 0, 1};
      if (r == 3) return {1, 2, 0, 1};
      if (r == 4) return {2, 0, 0, 2, 1};
      break;
    case 5:
      if (r == 2) return {2, 0, 1};
      if (r == 3) return {3, 3, 0, 1};
      if (r == 4) return {2, 4, 4, 0, 1};
      break;
    default:
      break;
  }
  throw PreconditionError("no built-in modulus for GF(" + std::to_string(p) + "^" + std::to_string(r) +
                          "); supply one explicitly");
}

RingSpec RingSpec::prime_field(int p) {
  RingSpec s;
  s.kind = RingKind::PrimeField;
  s.p = p;
  s.r = 1;
  s.modulus = {0, 1};
  return s;
}

RingSpec RingSpec::galois_field(int p, int r, std::vector<int> modulus) {
  if (r == 1 && modulus.empty()) return prime_field(p);
  RingSpec s;
  s.kind = RingKind::GaloisField;
  s.p = p;
  s.r = r;
  s.modulus = modulus.empty() ? default_modulus(p, r) : std::move(modulus);
  return s;
}

RingSpec RingSpec::truncated(RingSpec base, int k) {
  RingSpec s;
  s.kind = RingKind::TruncatedPoly;
  s.p = base.p;
  s.k = k;
  s.factors = {std::move(base)};
  return s;
}

RingSpec RingSpec::product(std::vector<RingSpec> factors) {
  RingSpec s;
  s.kind = RingKind::Product;
  s.p = factors.empty() ? 2 : factors.front().p;
  s.factors = std::move(factors);
  return s;
}

std::string RingSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case RingKind::PrimeField:
      os << "GF(" << p << ")";
      break;
    case RingKind::GaloisField: {
      os << "GF(" << p << "^" << r;
      bool is_default = false;
      try {
        is_default = default_modulus(p, r) == modulus;
      } catch (const Error&) {
      }
      if (!is_default) {
        os << "|";
        for (std::size_t i = 0; i < modulus.size(); ++i) os << (i ? "," : "") << modulus[i];
      }
      os << ")";
      break;
    }
    case RingKind::TruncatedPoly: {
      const RingSpec& b = factors.front();
      if (b.kind == RingKind::Product)
        os << "(" << b.to_string() << ")";
      else
        os << b.to_string();
      os << "[x]/x^" << k;
      break;
    }
    case RingKind::Product:
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "*";
        if (factors[i].kind == RingKind::Product)
          os << "(" << factors[i].to_string() << ")";
        else
          os << factors[i].to_string();
      }
      break;
  }
  return os.str();
}

RingSpec parse_ring_spec(const std::string& text) { return SpecParser(text).parse(); }

// ---------------------------------------------------------------------------

FiniteRing::FiniteRing(RingSpec spec) : spec_(std::move(spec)) {}

RingPtr FiniteRing::make(const RingSpec& spec) {
  std::shared_ptr<FiniteRing> r(new FiniteRing(spec));
  r->build();
  return r;
}

void FiniteRing::build() {
  p_ = spec_.p;
  if (!is_prime(p_)) throw PreconditionError("characteristic " + std::to_string(p_) + " is not prime");
  switch (spec_.kind) {
    case RingKind::PrimeField:
    case RingKind::GaloisField: {
      if (spec_.r < 1) throw PreconditionError("extension degree must be positive");
      if (static_cast<int>(spec_.modulus.size()) != spec_.r + 1 || spec_.modulus.back() != 1)
        throw PreconditionError("modulus must be monic of degree r");
      for (int c : spec_.modulus)
        if (c < 0 || c >= p_) throw PreconditionError("modulus coefficients must lie in [0,p)");
      if (spec_.r > 1 && !is_irreducible(spec_.modulus, p_))
        throw PreconditionError("modulus of " + spec_.to_string() + " is reducible");
      dim_ = spec_.r;
      is_field_ = true;
      break;
    }
    case RingKind::TruncatedPoly: {
      if (spec_.k < 1) throw PreconditionError("truncation exponent must be >= 1");
      parts_ = {FiniteRing::make(spec_.factors.front())};
      dim_ = parts_[0]->dim() * spec_.k;
      is_field_ = spec_.k == 1 && parts_[0]->is_field();
      break;
    }
    case RingKind::Product: {
      if (spec_.factors.empty()) throw PreconditionError("empty product");
      dim_ = 0;
      for (const auto& f : spec_.factors) {
        if (f.p != p_) throw PreconditionError("product factors must share the characteristic");
        parts_.push_back(FiniteRing::make(f));
        dim_ += parts_.back()->dim();
      }
      is_field_ = parts_.size() == 1 && parts_[0]->is_field();
      break;
    }
  }
  size_ = ipow(static_cast<std::uint32_t>(p_), dim_);
  if (size_ > (1u << 20)) throw GuardExceeded("ring " + spec_.to_string() + " has more than 2^20 elements");

  // The unit element.
  switch (spec_.kind) {
    case RingKind::PrimeField:
    case RingKind::GaloisField: {
      std::vector<int> c(dim_, 0);
      c[0] = 1;
      one_ = from_coords(c);
      break;
    }
    case RingKind::TruncatedPoly: {
      // Coefficient of x^0 is the most significant block.
      std::uint32_t bs = parts_[0]->size();
      one_ = RingElem{parts_[0]->one().v * ipow(bs, spec_.k - 1)};
      break;
    }
    case RingKind::Product: {
      std::uint64_t acc = 0;
      for (const auto& f : parts_) acc = acc * f->size() + f->one().v;
      one_ = RingElem{static_cast<std::uint32_t>(acc)};
      break;
    }
  }

  if (size_ <= kTableLimit) {
    const std::uint32_t n = size_;
    add_table_.resize(n * n);
    mul_table_.resize(n * n);
    neg_table_.resize(n);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) {
        add_table_[a * n + b] = add_raw(RingElem{a}, RingElem{b}).v;
        mul_table_[a * n + b] = mul_raw(RingElem{a}, RingElem{b}).v;
      }
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        if (add_table_[a * n + b] == 0) neg_table_[a] = b;
    frob_table_.resize(n);
    for (std::uint32_t a = 0; a < n; ++a) frob_table_[a] = pow(RingElem{a}, static_cast<unsigned>(p_)).v;
    inv_table_.assign(n, n);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        if (mul_table_[a * n + b] == one_.v) {
          inv_table_[a] = b;
          break;
        }
  }

  // Perfectness: Frobenius bijective (exhaustive image check when feasible).
  if (size_ <= (1u << 16)) {
    std::vector<char> hit(size_, 0);
    std::uint32_t distinct = 0;
    for (std::uint32_t a = 0; a < size_; ++a) {
      auto f = frobenius(RingElem{a}).v;
      if (!hit[f]) {
        hit[f] = 1;
        ++distinct;
      }
    }
    is_perfect_ = distinct == size_;
  } else {
    is_perfect_ = true;
    for (const auto& rf : parts_) is_perfect_ = is_perfect_ && rf->is_perfect();
    if (spec_.kind == RingKind::TruncatedPoly && spec_.k > 1) is_perfect_ = false;
  }
  if (is_perfect_ && !frob_table_.empty()) {
    frob_inv_table_.resize(size_);
    for (std::uint32_t a = 0; a < size_; ++a) frob_inv_table_[frob_table_[a]] = a;
  }
}

std::vector<std::uint32_t> FiniteRing::split(RingElem a, std::uint32_t part_size, std::size_t parts) const {
  std::vector<std::uint32_t> out(parts);
  std::uint32_t t = a.v;
  for (std::size_t i = parts; i-- > 0;) {
    out[i] = t % part_size;
    t /= part_size;
  }
  return out;
}

std::vector<int> FiniteRing::coords(RingElem a) const {
  std::vector<int> c(dim_);
  std::uint32_t t = a.v;
  for (int i = dim_ - 1; i >= 0; --i) {
    c[i] = static_cast<int>(t % p_);
    t /= p_;
  }
  return c;
}

RingElem FiniteRing::from_coords(const std::vector<int>& c) const {
  if (static_cast<int>(c.size()) != dim_) throw PreconditionError("coordinate vector has wrong length");
  std::uint64_t v = 0;
  for (int x : c) v = v * p_ + mod(x, p_);
  return RingElem{static_cast<std::uint32_t>(v)};
}

RingElem FiniteRing::basis(int b) const {
  std::vector<int> c(dim_, 0);
  c.at(b) = 1;
  return from_coords(c);
}

RingElem FiniteRing::from_int(long long k) const {
  RingElem r = zero();
  int m = mod(k, p_);
  for (int i = 0; i < m; ++i) r = add(r, one_);
  return r;
}

RingElem FiniteRing::add_raw(RingElem a, RingElem b) const {
  // Addition is digitwise mod p for every supported kind.
  std::uint64_t v = 0, scale = 1;
  std::uint32_t x = a.v, y = b.v;
  for (int i = 0; i < dim_; ++i) {
    v += scale * ((x % p_ + y % p_) % p_);
    x /= p_;
    y /= p_;
    scale *= p_;
  }
  return RingElem{static_cast<std::uint32_t>(v)};
}

RingElem FiniteRing::mul_raw(RingElem a, RingElem b) const {
  switch (spec_.kind) {
    case RingKind::PrimeField:
      return RingElem{static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.v) * b.v) % p_)};
    case RingKind::GaloisField: {
      auto ca = coords(a), cb = coords(b);
      std::vector<int> prod(2 * dim_ - 1, 0);
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
      return from_coords(poly_rem(prod, spec_.modulus, p_));
    }
    case RingKind::TruncatedPoly: {
      const auto& base = *parts_[0];
      const std::size_t k = static_cast<std::size_t>(spec_.k);
      auto xa = split(a, base.size(), k), xb = split(b, base.size(), k);
      std::vector<std::uint32_t> out(k, 0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; i + j < k; ++j)
          out[i + j] = base.add(RingElem{out[i + j]}, base.mul(RingElem{xa[i]}, RingElem{xb[j]})).v;
      std::uint64_t v = 0;
      for (auto c : out) v = v * base.size() + c;
      return RingElem{static_cast<std::uint32_t>(v)};
    }
    case RingKind::Product: {
      std::vector<std::uint32_t> xa(parts_.size()), xb(parts_.size());
      std::uint32_t ta = a.v, tb = b.v;
      for (std::size_t i = parts_.size(); i-- > 0;) {
        xa[i] = ta % parts_[i]->size();
        ta /= parts_[i]->size();
        xb[i] = tb % parts_[i]->size();
        tb /= parts_[i]->size();
      }
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < parts_.size(); ++i)
        v = v * parts_[i]->size() + parts_[i]->mul(RingElem{xa[i]}, RingElem{xb[i]}).v;
      return RingElem{static_cast<std::uint32_t>(v)};
    }
  }
  return RingElem{};
}

RingElem FiniteRing::add(RingElem a, RingElem b) const {
  if (!add_table_.empty()) return RingElem{add_table_[a.v * size_ + b.v]};
  return add_raw(a, b);
}

RingElem FiniteRing::neg(RingElem a) const {
  if (!neg_table_.empty()) return RingElem{neg_table_[a.v]};
  auto c = coords(a);
  for (int& x : c) x = mod(-x, p_);
  return from_coords(c);
}

RingElem FiniteRing::mul(RingElem a, RingElem b) const {
  if (!mul_table_.empty()) return RingElem{mul_table_[a.v * size_ + b.v]};
  return mul_raw(a, b);
}

RingElem FiniteRing::pow(RingElem a, unsigned long long e) const {
  RingElem r = one_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

RingElem FiniteRing::frobenius(RingElem a) const {
  if (!frob_table_.empty()) return RingElem{frob_table_[a.v]};
  return pow(a, static_cast<unsigned>(p_));
}

RingElem FiniteRing::frobenius_inverse(RingElem a) const {
  if (!is_perfect_) throw PreconditionError("Frobenius of " + name() + " is not bijective");
  if (!frob_inv_table_.empty()) return RingElem{frob_inv_table_[a.v]};
  // In a finite perfect ring Frobenius has finite order; walk the cycle.
  RingElem prev = a, cur = frobenius(a);
  while (cur != a) {
    prev = cur;
    cur = frobenius(cur);
  }
  return prev;
}

bool FiniteRing::is_unit(RingElem a) const {
  if (!inv_table_.empty()) return inv_table_[a.v] != size_;
  switch (spec_.kind) {
    case RingKind::PrimeField:
    case RingKind::GaloisField:
      return a.v != 0;
    case RingKind::TruncatedPoly:
      return parts_[0]->is_unit(RingElem{split(a, parts_[0]->size(), spec_.k)[0]});
    case RingKind::Product: {
      std::uint32_t t = a.v;
      for (std::size_t i = parts_.size(); i-- > 0;) {
        if (!parts_[i]->is_unit(RingElem{t % parts_[i]->size()})) return false;
        t /= parts_[i]->size();
      }
      return true;
    }
  }
  return false;
}

RingElem FiniteRing::inverse(RingElem a) const {
  if (!is_unit(a)) throw PreconditionError("element " + format(a) + " is not a unit of " + name());
  if (!inv_table_.empty()) return RingElem{inv_table_[a.v]};
  if (is_field_) return pow(a, static_cast<unsigned long long>(size_) - 2);
  // Walk the cyclic subgroup generated by a; the element before 1 is a^-1.
  RingElem cur = a;
  RingElem prev = one_;
  while (cur != one_) {
    prev = cur;
    cur = mul(cur, a);
  }
  return prev;
}

std::vector<RingHom> FiniteRing::residue_fields() const {
  auto self = shared_from_this();
  std::vector<RingHom> out;
  switch (spec_.kind) {
    case RingKind::PrimeField:
    case RingKind::GaloisField:
      out.push_back(identity());
      break;
    case RingKind::TruncatedPoly: {
      RingHom to_base{self, parts_[0], std::vector<RingElem>(size_)};
      for (std::uint32_t a = 0; a < size_; ++a)
        to_base.image[a] = RingElem{split(RingElem{a}, parts_[0]->size(), spec_.k)[0]};
      for (const auto& h : parts_[0]->residue_fields()) out.push_back(h.compose_after(to_base));
      break;
    }
    case RingKind::Product: {
      std::uint32_t trailing = size_;
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        trailing /= parts_[i]->size();
        RingHom proj{self, parts_[i], std::vector<RingElem>(size_)};
        for (std::uint32_t a = 0; a < size_; ++a) proj.image[a] = RingElem{(a / trailing) % parts_[i]->size()};
        for (const auto& h : parts_[i]->residue_fields()) out.push_back(h.compose_after(proj));
      }
      break;
    }
  }
  return out;
}

RingHom FiniteRing::identity() const {
  RingHom h{shared_from_this(), shared_from_this(), std::vector<RingElem>(size_)};
  for (std::uint32_t a = 0; a < size_; ++a) h.image[a] = RingElem{a};
  return h;
}

RingHom FiniteRing::field_embedding(const RingPtr& src, const RingPtr& dst) {
  const auto& ss = src->spec();
  if (ss.kind != RingKind::PrimeField && ss.kind != RingKind::GaloisField)
    throw PreconditionError("field_embedding: source must be a prime or Galois field");
  if (!dst->is_field() || dst->p() != src->p() || dst->dim() % src->dim() != 0)
    throw PreconditionError("no field embedding " + src->name() + " -> " + dst->name());
  // Root of the source modulus in the target.
  RingElem root{};
  bool found = false;
  for (std::uint32_t t = 0; t < dst->size() && !found; ++t) {
    RingElem x{t}, acc = dst->zero(), pw = dst->one();
    for (int c : ss.modulus) {
      acc = dst->add(acc, dst->mul(dst->from_int(c), pw));
      pw = dst->mul(pw, x);
    }
    if (acc == dst->zero()) {
      root = x;
      found = true;
    }
  }
  if (!found) throw VerificationFailure("modulus of " + src->name() + " has no root in " + dst->name());
  RingHom h{src, dst, std::vector<RingElem>(src->size())};
  for (std::uint32_t a = 0; a < src->size(); ++a) {
    auto c = src->coords(RingElem{a});
    RingElem acc = dst->zero(), pw = dst->one();
    for (int ci : c) {
      acc = dst->add(acc, dst->mul(dst->from_int(ci), pw));
      pw = dst->mul(pw, root);
    }
    h.image[a] = acc;
  }
  return h;
}

std::string FiniteRing::format(RingElem a) const {
  auto c = coords(a);
  if (dim_ == 1) return std::to_string(c[0]);
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

RingElem FiniteRing::parse_elem(const std::string& raw) const {
  std::string t;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.empty()) throw ParseError("empty ring element");
  if (t.front() == '(') {
    if (t.back() != ')') throw ParseError("unbalanced ring element '" + raw + "'");
    std::vector<int> c;
    std::stringstream ss(t.substr(1, t.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        int v = std::stoi(item, &used);
        if (used != item.size()) throw ParseError("bad coordinate '" + item + "'");
        c.push_back(v);
      } catch (const std::logic_error&) {
        throw ParseError("bad coordinate '" + item + "'");
      }
    }
    if (static_cast<int>(c.size()) != dim_)
      throw ParseError("element '" + raw + "' needs " + std::to_string(dim_) + " coordinates for " + name());
    for (int v : c)
      if (v < 0 || v >= p_) throw ParseError("coordinate out of range in '" + raw + "'");
    return from_coords(c);
  }
  try {
    std::size_t used = 0;
    long long v = std::stoll(t, &used);
    if (used != t.size()) throw ParseError("bad ring element '" + raw + "'");
    return from_int(v);
  } catch (const std::logic_error&) {
    throw ParseError("bad ring element '" + raw + "'");
  }
}

bool FiniteRing::same_as(const FiniteRing& other) const {
  return this == &other || spec_.to_string() == other.spec_.to_string();
}

bool RingHom::is_homomorphism() const {
  const auto& A = *src;
  const auto& B = *dst;
  if (image.size() != A.size()) return false;
  if (image[A.one().v] != B.one()) return false;
  for (std::uint32_t a = 0; a < A.size(); ++a)
    for (std::uint32_t b = 0; b < A.size(); ++b) {
      RingElem x{a}, y{b};
      if (image[A.add(x, y).v] != B.add(image[a], image[b])) return false;
      if (image[A.mul(x, y).v] != B.mul(image[a], image[b])) return false;
    }
  return true;
}

RingHom RingHom::compose_after(const RingHom& first) const {
  RingHom h{first.src, dst, std::vector<RingElem>(first.image.size())};
  for (std::size_t a = 0; a < first.image.size(); ++a) h.image[a] = image[first.image[a].v];
  return h;
}

}  // namespace tdisp
