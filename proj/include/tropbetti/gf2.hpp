#pragma once

// Exact linear algebra over the two-element field.
//
// Vectors and matrices are bit-packed into 64-bit words; addition is XOR.
// All elimination routines pick pivots in increasing column order so that
// every returned basis or solution is reproducible.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropbetti {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an internal consistency check fails (a bug, never bad input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace gf2 {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t length);
  Vector(std::initializer_list<int> bits);

  static Vector unit(std::size_t length, std::size_t index);

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  Vector& operator^=(const Vector& other);
  friend Vector operator^(Vector a, const Vector& b) { return a ^= b; }
  friend Vector operator+(Vector a, const Vector& b) { return a ^= b; }

  /// Standard bilinear pairing sum_i a_i b_i.
  bool dot(const Vector& other) const;
  bool is_zero() const;
  std::size_t popcount() const;
  /// Index of the first set bit, if any.
  std::optional<std::size_t> lowest() const;
  std::vector<std::size_t> support() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  std::string to_string() const;

  friend bool operator==(const Vector&, const Vector&) = default;
  friend std::strong_ordering operator<=>(const Vector& a, const Vector& b);

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value = true);
  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
  }

  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {data_.data() + r * stride_, stride_};
  }
  std::span<std::uint64_t> row_words(std::size_t r) {
    return {data_.data() + r * stride_, stride_};
  }
  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;

  Vector operator*(const Vector& x) const;
  /// Product this * other; cost scales with the set bits of this.
  Matrix operator*(const Matrix& other) const;
  Matrix transposed() const;
  bool is_zero() const;
  std::size_t popcount() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

std::size_t rank(const Matrix& a);
/// Rank of the span of a list of equal-length vectors.
std::size_t rank(const std::vector<Vector>& vectors);
bool independent(const std::vector<Vector>& vectors);

/// Column-sparse matrix: each column lists its nonzero rows in increasing order.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::uint32_t>> columns;

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}
  static SparseMatrix from_dense(const Matrix& m);
  Matrix to_dense() const;
  std::size_t nonzeros() const;
};

/// Rank by left-to-right column reduction keyed on the largest row index.
/// Columns with skip[j] set are known to reduce to zero and are not touched.
/// When `pivot_rows` is given it receives the pivot row of every surviving
/// column.
std::size_t rank(const SparseMatrix& a, const std::vector<bool>* skip = nullptr,
                 std::vector<std::uint32_t>* pivot_rows = nullptr);

/// Whether b * a is the zero matrix (requires b.cols == a.rows).
bool product_is_zero(const SparseMatrix& b, const SparseMatrix& a);

/// Some x with a*x = b, or nullopt when inconsistent. Free variables are 0
/// and pivots are taken left to right.
std::optional<Vector> solve_affine(const Matrix& a, const Vector& b);

/// Basis of {x : a*x = 0}, one vector per free column in increasing order.
std::vector<Vector> kernel_basis(const Matrix& a);

/// Expresses vectors in the coordinates of a fixed independent list.
class CoordinateSystem {
 public:
  CoordinateSystem() = default;
  /// Throws ContractViolation if `basis` is dependent.
  CoordinateSystem(std::vector<Vector> basis, std::size_t ambient_dim);

  std::size_t dim() const { return basis_.size(); }
  std::size_t ambient_dim() const { return ambient_; }
  const std::vector<Vector>& basis() const { return basis_; }
  /// Coefficients c with sum c_i basis_i = x, or nullopt when x is outside.
  std::optional<Vector> decompose(const Vector& x) const;
  bool contains(const Vector& x) const { return decompose(x).has_value(); }

 private:
  struct Pivot {
    std::size_t bit;
    Vector row;
    Vector combo;
  };
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
  std::vector<Pivot> pivots_;  // sorted by bit
};

/// Coordinates of the p-th exterior power of F_2^d: one coordinate per
/// p-subset of {0..d-1}, subsets in lexicographic order.
class WedgeBasis {
 public:
  WedgeBasis(std::size_t ambient_dim, std::size_t degree);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return subsets_.size(); }
  const std::vector<std::size_t>& subset(std::size_t index) const { return subsets_[index]; }
  std::size_t index_of(const std::vector<std::size_t>& sorted_subset) const;

  /// Coordinates of v_1 ^ ... ^ v_p (p = degree) via mod-2 minors.
  Vector wedge(const std::vector<Vector>& factors) const;

 private:
  std::size_t ambient_;
  std::size_t degree_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::vector<std::size_t> rank_table_;  // mask -> index, ambient <= 20
};

std::uint64_t binomial(std::size_t n, std::size_t k);

/// All p-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t p);

/// Basis of the image of the p-th exterior power of span(basis).
std::vector<Vector> wedge_subspace(const std::vector<Vector>& basis, std::size_t p);

/// Projection from span(space) onto span(space)/span(subspace).
///
/// The complement basis is chosen greedily: space vectors are scanned in
/// order and kept when independent of the subspace and of earlier picks.
class Quotient {
 public:
  Quotient() = default;
  /// `space` must be independent; `subspace` may be any spanning list
  /// contained in span(space), else ContractViolation.
  Quotient(const std::vector<Vector>& space, const std::vector<Vector>& subspace);

  std::size_t dim() const { return complement_.size(); }
  std::size_t ambient_dim() const { return coords_.ambient_dim(); }
  /// Chosen complement representatives (a subset of the space list).
  const std::vector<Vector>& complement() const { return complement_; }
  const std::vector<std::size_t>& complement_indices() const { return complement_indices_; }
  /// Quotient coordinates of an ambient vector lying in span(space).
  Vector project(const Vector& ambient) const;
  /// Matrix taking coordinates w.r.t. `space` to quotient coordinates.
  Matrix matrix() const;

 private:
  std::size_t subspace_rank_ = 0;
  std::vector<Vector> space_;
  std::vector<Vector> complement_;
  std::vector<std::size_t> complement_indices_;
  CoordinateSystem coords_;  // subspace basis first, then complement
};

}  // namespace gf2
}  // namespace tropbetti
