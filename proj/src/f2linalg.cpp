#include "mcm/f2linalg.hpp"

#include <bit>
#include <stdexcept>

#include "mcm/gf2n.hpp"

namespace mcm {

BitVector::BitVector(std::initializer_list<int> bits) : BitVector(bits.size()) {
  size_t i = 0;
  for (int b : bits) set(i++, b != 0);
}

BitVector BitVector::from_mask(uint64_t mask, size_t n) {
  BitVector v(n);
  if (n > 0) v.words_[0] = (n >= 64) ? mask : (mask & ((1ULL << n) - 1));
  return v;
}

void BitVector::xor_with(const BitVector& o) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
}

bool BitVector::dot(const BitVector& o) const {
  uint64_t acc = 0;
  for (size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & o.words_[i];
  return std::popcount(acc) & 1;
}

bool BitVector::any() const {
  for (uint64_t w : words_) if (w) return true;
  return false;
}

size_t BitVector::popcount() const {
  size_t c = 0;
  for (uint64_t w : words_) c += std::popcount(w);
  return c;
}

uint64_t BitVector::to_mask() const {
  if (n_ > 64) throw std::logic_error("BitVector::to_mask: too wide");
  return words_.empty() ? 0 : words_[0];
}

std::string BitVector::to_string() const {
  std::string s(n_, '0');
  for (size_t i = 0; i < n_; ++i) if (get(i)) s[i] = '1';
  return s;
}

BinaryMatrix::BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged initializer");
    data_.emplace_back(r);
  }
}

BinaryMatrix BinaryMatrix::identity(size_t n) {
  BinaryMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitVector BinaryMatrix::mul_vec(const BitVector& v) const {
  BitVector out(rows_);
  for (size_t r = 0; r < rows_; ++r) out.set(r, data_[r].dot(v));
  return out;
}

BitVector BinaryMatrix::mul_vec_left(const BitVector& v) const {
  BitVector out(cols_);
  for (size_t r = 0; r < rows_; ++r)
    if (v.get(r)) out.xor_with(data_[r]);
  return out;
}

BinaryMatrix BinaryMatrix::mul(const BinaryMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch");
  BinaryMatrix out(rows_, o.cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t k = 0; k < cols_; ++k)
      if (get(r, k)) out.row(r).xor_with(o.row(k));
  return out;
}

BinaryMatrix BinaryMatrix::transpose() const {
  BinaryMatrix out(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c, r, true);
  return out;
}

std::string BinaryMatrix::to_string() const {
  std::string s;
  for (size_t r = 0; r < rows_; ++r) {
    s += data_[r].to_string();
    s += '\n';
  }
  return s;
}

size_t rank_f2(const BinaryMatrix& m) {
  BinaryMatrix a = m;
  size_t rank = 0;
  for (size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    size_t pivot = rank;
    while (pivot < a.rows() && !a.get(pivot, c)) ++pivot;
    if (pivot == a.rows()) continue;
    a.swap_rows(rank, pivot);
    for (size_t r = 0; r < a.rows(); ++r)
      if (r != rank && a.get(r, c)) a.xor_rows(r, rank);
    ++rank;
  }
  return rank;
}

namespace {

// Reduced row echelon form of [A | b] (b optional); returns pivot column
// per eliminated row.
struct Echelon {
  BinaryMatrix a;
  BitVector b;
  std::vector<size_t> pivot_cols;
};

Echelon reduce(const BinaryMatrix& a_in, const BitVector* b_in) {
  Echelon e{a_in, b_in ? *b_in : BitVector(a_in.rows()), {}};
  size_t rank = 0;
  for (size_t c = 0; c < e.a.cols() && rank < e.a.rows(); ++c) {
    size_t pivot = rank;
    while (pivot < e.a.rows() && !e.a.get(pivot, c)) ++pivot;
    if (pivot == e.a.rows()) continue;
    e.a.swap_rows(rank, pivot);
    bool bp = e.b.get(pivot), br = e.b.get(rank);
    e.b.set(pivot, br);
    e.b.set(rank, bp);
    for (size_t r = 0; r < e.a.rows(); ++r) {
      if (r != rank && e.a.get(r, c)) {
        e.a.xor_rows(r, rank);
        if (e.b.get(rank)) e.b.flip(r);
      }
    }
    e.pivot_cols.push_back(c);
    ++rank;
  }
  return e;
}

}  // namespace

std::optional<BitVector> solve_f2(const BinaryMatrix& a, const BitVector& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_f2: dimension mismatch");
  Echelon e = reduce(a, &b);
  size_t rank = e.pivot_cols.size();
  for (size_t r = rank; r < a.rows(); ++r)
    if (e.b.get(r)) return std::nullopt;
  BitVector x(a.cols());
  for (size_t r = 0; r < rank; ++r)
    if (e.b.get(r)) x.set(e.pivot_cols[r], true);
  return x;
}

std::vector<BitVector> kernel_basis_f2(const BinaryMatrix& a) {
  Echelon e = reduce(a, nullptr);
  std::vector<bool> is_pivot(a.cols(), false);
  for (size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<BitVector> basis;
  for (size_t c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    BitVector v(a.cols());
    v.set(c, true);
    for (size_t r = 0; r < e.pivot_cols.size(); ++r)
      if (e.a.get(r, c)) v.set(e.pivot_cols[r], true);
    basis.push_back(v);
  }
  return basis;
}

bool is_hankel(const BinaryMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("is_hankel: square matrix required");
  size_t n = m.rows();
  for (size_t i = 0; i + 1 < n; ++i)
    for (size_t j = 1; j < n; ++j)
      if (m.get(i, j) != m.get(i + 1, j - 1)) return false;
  return true;
}

HankelCoefficients hankel_decompose(const BinaryMatrix& m) {
  if (!is_hankel(m)) throw std::invalid_argument("hankel_decompose: not Hankel");
  size_t n = m.rows();
  HankelCoefficients h{n, BitVector(2 * n - 1)};
  for (size_t k = 0; k < 2 * n - 1; ++k) {
    size_t i = k < n ? 0 : k - n + 1;
    h.beta.set(k, m.get(i, k - i));
  }
  return h;
}

BinaryMatrix beta_basis(size_t n) {
  BinaryMatrix mn = m_n_matrix(n);  // (2n-1) x n
  BinaryMatrix out(2 * n - 1, n);
  for (size_t i = 0; i < n; ++i) {
    BinaryMatrix di(n, n);
    for (size_t j = 0; j < n; ++j) di.row(j) = mn.row(i + j);
    HankelCoefficients h = hankel_decompose(di);
    for (size_t k = 0; k < 2 * n - 1; ++k) out.set(k, i, h.beta.get(k));
  }
  return out;
}

}  // namespace mcm
