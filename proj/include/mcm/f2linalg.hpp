#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace mcm {

/// Bit vector over F2, packed into 64-bit words.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(size_t n) : n_(n), words_((n + 63) / 64, 0) {}
  BitVector(std::initializer_list<int> bits);

  /// Low n bits of `mask`, bit i -> entry i.
  static BitVector from_mask(uint64_t mask, size_t n);

  size_t size() const { return n_; }
  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    uint64_t m = 1ULL << (i & 63);
    if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
  }
  void flip(size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  void xor_with(const BitVector& o);
  /// Parity of the AND with `o` (F2 inner product).
  bool dot(const BitVector& o) const;
  bool any() const;
  size_t popcount() const;
  uint64_t to_mask() const;  // requires n <= 64
  std::string to_string() const;

  bool operator==(const BitVector& o) const { return n_ == o.n_ && words_ == o.words_; }

 private:
  size_t n_ = 0;
  std::vector<uint64_t> words_;
};

/// Dense binary matrix, bit-packed row-major.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}
  BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows);

  static BinaryMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool get(size_t r, size_t c) const { return data_[r].get(c); }
  void set(size_t r, size_t c, bool v) { data_[r].set(c, v); }
  const BitVector& row(size_t r) const { return data_[r]; }
  BitVector& row(size_t r) { return data_[r]; }

  void xor_rows(size_t dst, size_t src) { data_[dst].xor_with(data_[src]); }
  void swap_rows(size_t a, size_t b) { std::swap(data_[a], data_[b]); }

  BitVector mul_vec(const BitVector& v) const;      // M v
  BitVector mul_vec_left(const BitVector& v) const; // v M (row vector)
  BinaryMatrix mul(const BinaryMatrix& o) const;
  BinaryMatrix transpose() const;

  bool operator==(const BinaryMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  std::string to_string() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<BitVector> data_;
};

/// Rank over F2 by Gaussian elimination.
size_t rank_f2(const BinaryMatrix& m);

/// A solution of A x = b over F2, or nullopt if inconsistent. Free
/// variables are set to 0, making the result deterministic.
std::optional<BitVector> solve_f2(const BinaryMatrix& a, const BitVector& b);

/// Basis of the kernel of A (vectors x with A x = 0).
std::vector<BitVector> kernel_basis_f2(const BinaryMatrix& a);

/// True iff the square matrix is constant on every anti-diagonal.
bool is_hankel(const BinaryMatrix& m);

/// Coefficients beta with M = sum_k beta_k H_k, where H_k has 1s on the
/// k-th anti-diagonal. Requires is_hankel(M).
struct HankelCoefficients {
  size_t n = 0;
  BitVector beta;  // length 2n-1
};
HankelCoefficients hankel_decompose(const BinaryMatrix& m);

/// The basis matrix of Hankel coefficients: column i holds the
/// decomposition of the matrix whose row j is row (i+j) of Gamma_n M_n^(0).
/// Shape (2n-1) x n; beta of D_v is this matrix times v.
BinaryMatrix beta_basis(size_t n);

}  // namespace mcm
