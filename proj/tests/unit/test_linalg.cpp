#include <doctest.h>

#include <random>

#include "../support/oracle.hpp"
#include "tdisp/error.hpp"
#include "tdisp/field_linalg.hpp"
#include "tdisp/wmatrix.hpp"
#include "tdisp/zpn.hpp"

using namespace tdisp;

namespace {

WMatrix random_matrix(std::mt19937_64& rng, const WittRing& W, std::size_t r, std::size_t c) {
  WMatrix m(r, c);
  std::uniform_int_distribution<std::uint32_t> pick(0, W.size() - 1);
  for (auto& x : m.a) x = WElem{pick(rng)};
  return m;
}

WMatrix diag_p_powers(const WittRing& W, const std::vector<int>& exps, std::size_t r, std::size_t c) {
  WMatrix m(r, c);
  for (std::size_t i = 0; i < exps.size(); ++i)
    m(i, i) = exps[i] >= W.level() ? W.zero() : W.pow(W.from_int(W.p()), static_cast<unsigned>(exps[i]));
  return m;
}

}  // namespace

TEST_CASE("matrix inverse over W_n(R) for several rings") {
  std::mt19937_64 rng(7);
  for (auto [name, n] : {std::pair{"GF(2)", 3}, {"GF(3^2)", 2}, {"GF(2)[x]/x^2", 2}, {"GF(2)*GF(2)", 2}}) {
    auto W = WittRing::get(FiniteRing::parse(name), n);
    int seen = 0;
    for (int t = 0; t < 60; ++t) {
      const WMatrix m = random_matrix(rng, *W, 3, 3);
      if (!is_invertible(*W, m)) {
        CHECK_THROWS_AS(inverse(*W, m), PreconditionError);
        continue;
      }
      ++seen;
      const WMatrix mi = inverse(*W, m);
      CHECK(multiply(*W, m, mi) == identity(*W, 3));
      CHECK(multiply(*W, mi, m) == identity(*W, 3));
      CHECK(W->is_unit(determinant(*W, m)));
    }
    CHECK(seen > 0);
  }
}

TEST_CASE("determinant is multiplicative") {
  std::mt19937_64 rng(11);
  auto W = WittRing::get(FiniteRing::parse("GF(2^2)"), 2);
  for (int t = 0; t < 40; ++t) {
    auto a = random_matrix(rng, *W, 3, 3), b = random_matrix(rng, *W, 3, 3);
    CHECK(determinant(*W, multiply(*W, a, b)) == W->mul(determinant(*W, a), determinant(*W, b)));
  }
}

TEST_CASE("Smith form over W_n(k) diagonalizes with p-power entries") {
  std::mt19937_64 rng(3);
  for (auto [name, n] : {std::pair{"GF(2)", 3}, {"GF(3)", 2}, {"GF(2^2)", 2}}) {
    auto W = WittRing::get(FiniteRing::parse(name), n);
    for (int t = 0; t < 40; ++t) {
      const std::size_t r = 1 + t % 3, c = 1 + (t / 3) % 3;
      WMatrix m = random_matrix(rng, *W, r, c);
      if (t % 2) m = scale(*W, W->p(), m);
      const SmithForm s = smith(*W, m);
      CHECK(is_invertible(*W, s.U));
      CHECK(is_invertible(*W, s.V));
      CHECK(multiply(*W, multiply(*W, s.U, m), s.V) == diag_p_powers(*W, s.exps, r, c));
      for (std::size_t i = 1; i < s.exps.size(); ++i) CHECK(s.exps[i - 1] <= s.exps[i]);
    }
  }
}

TEST_CASE("solve finds solutions exactly when they exist") {
  std::mt19937_64 rng(5);
  auto W = WittRing::get(FiniteRing::parse("GF(2)"), 3);
  for (int t = 0; t < 60; ++t) {
    WMatrix m = random_matrix(rng, *W, 2, 2);
    if (t % 2) m = scale(*W, 2, m);
    std::vector<WElem> x{WElem{static_cast<std::uint32_t>(rng() % 8)}, WElem{static_cast<std::uint32_t>(rng() % 8)}};
    auto b = apply(*W, m, x);
    auto sol = solve(*W, m, b);
    REQUIRE(sol);
    CHECK(apply(*W, m, *sol) == b);
    // Brute force on all right-hand sides agrees on solvability.
    std::vector<WElem> rhs{WElem{static_cast<std::uint32_t>(rng() % 8)}, WElem{static_cast<std::uint32_t>(rng() % 8)}};
    bool exists = false;
    for (std::uint32_t u = 0; u < 8 && !exists; ++u)
      for (std::uint32_t v = 0; v < 8 && !exists; ++v) exists = apply(*W, m, {WElem{u}, WElem{v}}) == rhs;
    CHECK(solve(*W, m, rhs).has_value() == exists);
  }
}

TEST_CASE("Frobenius on matrices is a ring map and inverts") {
  std::mt19937_64 rng(9);
  auto W = WittRing::get(FiniteRing::parse("GF(2^3)"), 2);
  for (int t = 0; t < 20; ++t) {
    auto a = random_matrix(rng, *W, 2, 2), b = random_matrix(rng, *W, 2, 2);
    CHECK(frobenius(*W, multiply(*W, a, b)) == multiply(*W, frobenius(*W, a), frobenius(*W, b)));
    CHECK(frobenius_inverse(*W, frobenius(*W, a)) == a);
    CHECK(frobenius(*W, a, 3) == a);
  }
}

TEST_CASE("field linear algebra: rank-nullity and kernels") {
  std::mt19937_64 rng(13);
  auto K = FiniteRing::parse("GF(3^2)");
  for (int t = 0; t < 40; ++t) {
    RMatrix m(3, 4);
    for (auto& x : m.a) x = RingElem{static_cast<std::uint32_t>(rng() % (t % 3 ? 2 : K->size()))};
    const RMatrix k = kernel_basis(*K, m);
    CHECK(rank(*K, m) + k.cols == 4);
    CHECK(is_zero(multiply(*K, m, k)));
    CHECK(same_column_space(*K, image_basis(*K, m), m));
  }
}

TEST_CASE("Z/p^n Smith form and kernels") {
  // Odd moduli matter: every unit of Z/8 is its own inverse.
  for (auto [p, n] : {std::pair{2, 3}, {3, 3}, {5, 2}}) {
    Zpn Z(p, n);
    const long long pn = Z.modulus();
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
      ZpnMatrix a(3, 4);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = static_cast<long long>(rng() % pn) * (t % 2 ? p : 1) % pn;
      auto s = Z.smith(a);
      auto d = Z.multiply(Z.multiply(s.U, a), s.V);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
          const long long want = i == j && s.exps[i] < n ? Z.pow_p(s.exps[i]) : 0;
          CHECK(d(i, j) == want);
        }
      auto id = Z.multiply(s.U, s.Uinv);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1 : 0));
      auto ker = Z.kernel(a);
      auto prod = Z.multiply(a, ker);
      for (std::size_t i = 0; i < prod.rows(); ++i)
        for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod(i, j) == 0);
      // |ker| * |image| = |Z/p^n|^4.
      CHECK(Z.column_span_log_order(a) + Z.column_span_log_order(ker) == 4 * n);
    }
  }
}

TEST_CASE("invertible matrix counts over W_n(F_p) match the closed form") {
  // |GL_h(W_n(F_p))| = p^((n-1)h^2) |GL_h(F_p)|.
  for (auto [p, n, h] : {std::tuple{2, 1, 2}, {2, 2, 2}, {3, 1, 2}, {2, 1, 3}}) {
    auto W = WittRing::get(FiniteRing::parse("GF(" + std::to_string(p) + ")"), n);
    const long long total = oracle::ipow(W->size(), h * h);
    long long count = 0;
    for (long long idx = 0; idx < total; ++idx) {
      WMatrix m(h, h);
      long long t = idx;
      for (auto& x : m.a) {
        x = WElem{static_cast<std::uint32_t>(t % W->size())};
        t /= W->size();
      }
      count += is_invertible(*W, m);
    }
    CHECK(static_cast<std::uint64_t>(count) == oracle::count_invertible(p, n, h));
    CHECK(static_cast<std::uint64_t>(count) == static_cast<std::uint64_t>(oracle::ipow(p, (n - 1) * h * h)) * oracle::count_invertible(p, 1, h));
  }
}
