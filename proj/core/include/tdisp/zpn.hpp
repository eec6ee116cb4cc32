#pragma once

#include <cstddef>
#include <vector>

namespace tdisp {

/// Dense matrix over Z/p^n with entries in [0, p^n).
class ZpnMatrix {
 public:
  ZpnMatrix() = default;
  ZpnMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  long long& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  long long operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::vector<long long> column(std::size_t j) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<long long> a_;
};

/// Arithmetic in the local ring Z/p^n.
class Zpn {
 public:
  Zpn(int p, int n);
  int p() const { return p_; }
  int n() const { return n_; }
  long long modulus() const { return pn_; }
  long long reduce(long long x) const;
  long long mul(long long a, long long b) const;
  /// p-adic valuation, n for zero.
  int valuation(long long x) const;
  long long inverse(long long unit) const;
  long long pow_p(int e) const;

  /// U * a * V = diag(p^exps[i]) with U, V invertible; exps[i] = n marks a
  /// zero diagonal entry. Uinv = U^{-1}.
  struct Smith {
    ZpnMatrix U, Uinv, V;
    std::vector<int> exps;
  };
  Smith smith(const ZpnMatrix& a) const;

  /// Generators of {x : a x = 0} as columns.
  ZpnMatrix kernel(const ZpnMatrix& a) const;
  /// log_p of the order of the subgroup generated by the columns.
  int column_span_log_order(const ZpnMatrix& a) const;
  /// Invariant-factor generators of the column span (nonzero columns only).
  ZpnMatrix column_span_generators(const ZpnMatrix& a) const;
  ZpnMatrix multiply(const ZpnMatrix& x, const ZpnMatrix& y) const;

 private:
  int p_, n_;
  long long pn_;
};

}  // namespace tdisp
