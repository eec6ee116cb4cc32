#include "expr.hpp"

#include <cctype>
#include <functional>
#include <optional>

#include "tdisp/error.hpp"

namespace tdisp::cli {

namespace {

// A value either lives at a fixed level or can be produced at any level.
struct Value {
  WittPtr W;  // set for fixed values
  WElem x{};
  std::function<WElem(const WittRing&)> at;  // set for level-free values

  bool fixed() const { return W != nullptr; }
};

class Parser {
 public:
  Parser(std::string text, RingPtr R) : s_(std::move(text)), R_(std::move(R)) {}

  Value parse() {
    Value v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  WittPtr ring_at(int n) const { return WittRing::get(R_, n); }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  // Brings both operands to a common level.
  static void unify(Value& a, Value& b) {
    if (a.fixed() && b.fixed()) {
      if (a.W->level() != b.W->level())
        throw PreconditionError("level mismatch: " + std::to_string(a.W->level()) + " vs " + std::to_string(b.W->level()));
      return;
    }
    if (a.fixed())
      b = Value{a.W, b.at(*a.W), nullptr};
    else if (b.fixed())
      a = Value{b.W, a.at(*b.W), nullptr};
  }

  using Op = WElem (WittRing::*)(WElem, WElem) const;
  static Value binary(Value a, Value b, Op op) {
    unify(a, b);
    if (a.fixed()) return Value{a.W, (a.W.get()->*op)(a.x, b.x), nullptr};
    return Value{nullptr, {}, [fa = a.at, fb = b.at, op](const WittRing& W) { return (W.*op)(fa(W), fb(W)); }};
  }

  Value expr() {
    Value v = term();
    for (;;) {
      if (eat('+'))
        v = binary(v, term(), &WittRing::add);
      else if (eat('-'))
        v = binary(v, term(), &WittRing::sub);
      else
        return v;
    }
  }

  Value term() {
    Value v = unary();
    while (eat('*')) v = binary(v, unary(), &WittRing::mul);
    return v;
  }

  Value unary() {
    if (eat('-')) {
      Value v = unary();
      if (v.fixed()) return Value{v.W, v.W->neg(v.x), nullptr};
      return Value{nullptr, {}, [f = v.at](const WittRing& W) { return W.neg(f(W)); }};
    }
    return primary();
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  // Raw text up to the parenthesis closing the one just consumed.
  std::string raw_argument() {
    int depth = 1;
    std::size_t start = pos_;
    for (; pos_ < s_.size(); ++pos_) {
      if (s_[pos_] == '(') ++depth;
      if (s_[pos_] == ')' && --depth == 0) break;
    }
    if (pos_ >= s_.size()) fail("unbalanced parenthesis");
    return s_.substr(start, pos_++ - start);
  }

  Value literal() {
    // "w[" already consumed.
    std::size_t start = pos_;
    int depth = 0, commas = 0;
    for (; pos_ < s_.size(); ++pos_) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) ++commas;
      if (c == ']' && depth == 0) break;
    }
    if (pos_ >= s_.size()) fail("unterminated Witt literal");
    std::string body = s_.substr(start, pos_ - start);
    ++pos_;
    auto W = ring_at(commas + 1);
    return Value{W, W->parse("w[" + body + "]"), nullptr};
  }

  Value primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (eat('(')) {
      Value v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      long long k;
      try {
        k = std::stoll(s_.substr(start, pos_ - start));
      } catch (const std::out_of_range&) {
        fail("integer out of range");
      }
      return Value{nullptr, {}, [k](const WittRing& W) { return W.from_int(k); }};
    }
    if (s_.compare(pos_, 2, "w[") == 0) {
      pos_ += 2;
      return literal();
    }
    std::string name = identifier();
    if (name.empty()) fail("expected an operand");
    expect('(');
    if (name == "teich") {
      RingElem a = R_->parse_elem(raw_argument());
      return Value{nullptr, {}, [a](const WittRing& W) { return W.teichmuller(a); }};
    }
    Value arg = expr();
    expect(')');
    if (name == "f") {
      if (arg.fixed()) return Value{arg.W, arg.W->frobenius(arg.x), nullptr};
      return Value{nullptr, {}, [g = arg.at](const WittRing& W) { return W.frobenius(g(W)); }};
    }
    if (name == "v") {
      if (arg.fixed()) {
        auto up = ring_at(arg.W->level() + 1);
        return Value{up, verschiebung(*arg.W, *up, arg.x), nullptr};
      }
      return Value{nullptr, {}, [g = arg.at](const WittRing& W) { return ideal_inclusion(W, g(W)); }};
    }
    if (name == "f1") {
      if (arg.fixed()) {
        if (arg.W->level() < 2) throw PreconditionError("f1 needs an argument of level >= 2");
        auto down = ring_at(arg.W->level() - 1);
        return Value{down, f1(*arg.W, *down, arg.x), nullptr};
      }
      return Value{nullptr, {}, [g = arg.at, R = R_](const WittRing& W) {
                     auto up = WittRing::get(R, W.level() + 1);
                     return f1(*up, W, g(*up));
                   }};
    }
    fail("unknown function '" + name + "'");
  }

  std::string s_;
  RingPtr R_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string evaluate_witt_expression(const std::string& text, const RingPtr& R, int default_level) {
  if (default_level < 1) throw PreconditionError("level must be positive");
  Parser parser(text, R);
  Value v = parser.parse();
  if (v.fixed()) return v.W->format(v.x);
  auto W = parser.ring_at(default_level);
  return W->format(v.at(*W));
}

}  // namespace tdisp::cli
