#include "tropbetti/gf2.hpp"

#include <algorithm>
#include <bit>
#include <iterator>

namespace tropbetti::gf2 {

namespace {

constexpr std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

std::optional<std::size_t> lowest_bit(std::span<const std::uint64_t> words, std::size_t from_word = 0) {
  for (std::size_t w = from_word; w < words.size(); ++w) {
    if (words[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words[w]));
  }
  return std::nullopt;
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t from_word = 0) {
  for (std::size_t w = from_word; w < dst.size(); ++w) dst[w] ^= src[w];
}

// Reduced row echelon form in place; returns pivot column of each pivot row.
std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      auto a = m.row_words(p);
      auto b = m.row_words(r);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i != r && m.get(i, c)) xor_into(m.row_words(i), m.row_words(r), c >> 6);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(std::size_t length) : size_(length), words_(word_count(length), 0) {}

Vector::Vector(std::initializer_list<int> bits) : Vector(bits.size()) {
  std::size_t i = 0;
  for (int b : bits) set(i++, (b & 1) != 0);
}

Vector Vector::unit(std::size_t length, std::size_t index) {
  Vector v(length);
  v.set(index);
  return v;
}

void Vector::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value)
    words_[i >> 6] |= mask;
  else
    words_[i >> 6] &= ~mask;
}

Vector& Vector::operator^=(const Vector& other) {
  if (other.size_ != size_) throw ContractViolation("gf2::Vector: length mismatch in addition");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

bool Vector::dot(const Vector& other) const {
  if (other.size_ != size_) throw ContractViolation("gf2::Vector: length mismatch in pairing");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return (std::popcount(acc) & 1) != 0;
}

bool Vector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Vector::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::optional<std::size_t> Vector::lowest() const { return lowest_bit(words_); }

std::vector<std::size_t> Vector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::string Vector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::strong_ordering operator<=>(const Vector& a, const Vector& b) {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t i = 0; i < a.size_; ++i) {
    if (a.get(i) != b.get(i)) return a.get(i) ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(word_count(cols)), data_(rows * word_count(cols), 0) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ContractViolation("gf2::Matrix::from_rows: row length mismatch");
    auto dst = m.row_words(r);
    std::copy(rows[r].words().begin(), rows[r].words().end(), dst.begin());
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw ContractViolation("gf2::Matrix::from_columns: column length mismatch");
    for (auto r : columns[c].support()) m.set(r, c);
  }
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (c & 63);
  auto& w = data_[r * stride_ + (c >> 6)];
  if (value)
    w |= mask;
  else
    w &= ~mask;
}

Vector Matrix::row(std::size_t r) const {
  Vector v(cols_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    if (get(r, c)) v.set(r);
  return v;
}

Vector Matrix::operator*(const Vector& x) const {
  if (x.size() != cols_) throw ContractViolation("gf2::Matrix: vector length mismatch");
  Vector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    auto row = row_words(r);
    for (std::size_t w = 0; w < stride_; ++w) acc ^= row[w] & x.words()[w];
    if (std::popcount(acc) & 1) y.set(r);
  }
  return y;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (other.rows_ != cols_) throw ContractViolation("gf2::Matrix: inner dimension mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto dst = out.row_words(r);
    auto row = row_words(r);
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t bits = row[w];
      while (bits != 0) {
        const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        xor_into(dst, other.row_words(k));
        bits &= bits - 1;
      }
    }
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto row = row_words(r);
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t bits = row[w];
      while (bits != 0) {
        t.set(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)), r);
        bits &= bits - 1;
      }
    }
  }
  return t;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Matrix::popcount() const {
  std::size_t n = 0;
  for (auto w : data_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// ---------------------------------------------------------------- rank etc.

std::size_t rank(const Matrix& a) {
  // Incremental reduction keyed on the lowest set bit; a pivot row with
  // lowest bit b is zero below word b/64, so XORs start there.
  const std::size_t stride = a.words_per_row();
  std::vector<std::uint64_t> pivots;
  pivots.reserve(std::min(a.rows(), a.cols()) * stride);
  std::vector<std::int64_t> slot(a.cols(), -1);
  std::vector<std::uint64_t> work(stride);
  std::size_t r = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto src = a.row_words(i);
    std::copy(src.begin(), src.end(), work.begin());
    std::size_t from = 0;
    while (auto b = lowest_bit(work, from)) {
      from = *b >> 6;
      if (slot[*b] < 0) {
        slot[*b] = static_cast<std::int64_t>(r++);
        pivots.insert(pivots.end(), work.begin(), work.end());
        break;
      }
      xor_into(work, {pivots.data() + static_cast<std::size_t>(slot[*b]) * stride, stride}, from);
    }
  }
  return r;
}

std::size_t rank(const std::vector<Vector>& vectors) {
  if (vectors.empty()) return 0;
  return rank(Matrix::from_rows(vectors, vectors.front().size()));
}

bool independent(const std::vector<Vector>& vectors) { return rank(vectors) == vectors.size(); }

std::optional<Vector> solve_affine(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw ContractViolation("solve_affine: rows(A) != length(b)");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) aug.set(r, c);
    if (b.get(r)) aug.set(r, a.cols());
  }
  const auto pivots = rref(aug);
  Vector x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == a.cols()) return std::nullopt;
    if (aug.get(i, a.cols())) x.set(pivots[i]);
  }
  return x;
}

std::vector<Vector> kernel_basis(const Matrix& a) {
  Matrix m = a;
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector x(a.cols());
    x.set(f);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (m.get(i, f)) x.set(pivots[i]);
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------- CoordinateSystem

CoordinateSystem::CoordinateSystem(std::vector<Vector> basis, std::size_t ambient_dim)
    : ambient_(ambient_dim), basis_(std::move(basis)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].size() != ambient_) throw ContractViolation("CoordinateSystem: length mismatch");
    Vector row = basis_[i];
    Vector combo = Vector::unit(basis_.size(), i);
    for (const auto& p : pivots_) {
      if (row.get(p.bit)) {
        row ^= p.row;
        combo ^= p.combo;
      }
    }
    auto bit = row.lowest();
    if (!bit) throw ContractViolation("CoordinateSystem: basis is dependent");
    // Keep pivots fully reduced against each other.
    for (auto& p : pivots_) {
      if (p.row.get(*bit)) {
        p.row ^= row;
        p.combo ^= combo;
      }
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), *bit,
                                [](const Pivot& p, std::size_t b) { return p.bit < b; });
    pivots_.insert(pos, Pivot{*bit, std::move(row), std::move(combo)});
  }
}

std::optional<Vector> CoordinateSystem::decompose(const Vector& x) const {
  if (x.size() != ambient_) throw ContractViolation("CoordinateSystem::decompose: length mismatch");
  Vector rest = x;
  Vector coeff(basis_.size());
  for (const auto& p : pivots_) {
    if (rest.get(p.bit)) {
      rest ^= p.row;
      coeff ^= p.combo;
    }
  }
  if (!rest.is_zero()) return std::nullopt;
  return coeff;
}

// ---------------------------------------------------------------- wedges

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t p) {
  std::vector<std::vector<std::size_t>> out;
  if (p > n) return out;
  std::vector<std::size_t> cur(p);
  for (std::size_t i = 0; i < p; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = p;
    while (i > 0 && cur[i - 1] == n - p + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

WedgeBasis::WedgeBasis(std::size_t ambient_dim, std::size_t degree)
    : ambient_(ambient_dim), degree_(degree), subsets_(subsets(ambient_dim, degree)) {
  if (ambient_ > 16) throw ContractViolation("WedgeBasis: ambient dimension above 16 is unsupported");
  rank_table_.assign(std::size_t{1} << ambient_, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < subsets_.size(); ++i) {
    std::size_t mask = 0;
    for (auto e : subsets_[i]) mask |= std::size_t{1} << e;
    rank_table_[mask] = i;
  }
}

std::size_t WedgeBasis::index_of(const std::vector<std::size_t>& sorted_subset) const {
  std::size_t mask = 0;
  for (auto e : sorted_subset) {
    if (e >= ambient_) throw ContractViolation("WedgeBasis::index_of: element out of range");
    mask |= std::size_t{1} << e;
  }
  const auto idx = rank_table_[mask];
  if (idx == static_cast<std::size_t>(-1)) throw ContractViolation("WedgeBasis::index_of: wrong subset size");
  return idx;
}

Vector WedgeBasis::wedge(const std::vector<Vector>& factors) const {
  if (factors.size() != degree_) throw ContractViolation("WedgeBasis::wedge: wrong number of factors");
  Vector out(subsets_.size());
  if (degree_ == 0) {
    out.set(0);
    return out;
  }
  for (const auto& f : factors)
    if (f.size() != ambient_) throw ContractViolation("WedgeBasis::wedge: factor length mismatch");
  // Coefficient on e_S is the mod-2 determinant of the minor on columns S,
  // i.e. whether the restricted factors are independent.
  std::vector<Vector> minor(degree_, Vector(degree_));
  for (std::size_t s = 0; s < subsets_.size(); ++s) {
    const auto& cols = subsets_[s];
    for (std::size_t i = 0; i < degree_; ++i)
      for (std::size_t j = 0; j < degree_; ++j) minor[i].set(j, factors[i].get(cols[j]));
    if (rank(minor) == degree_) out.set(s);
  }
  return out;
}

std::vector<Vector> wedge_subspace(const std::vector<Vector>& basis, std::size_t p) {
  if (p > basis.size()) throw ContractViolation("wedge_subspace: degree exceeds basis size");
  if (!basis.empty() && !independent(basis)) throw ContractViolation("wedge_subspace: basis is dependent");
  const std::size_t d = basis.empty() ? 0 : basis.front().size();
  const WedgeBasis wb(d, p);
  std::vector<Vector> out;
  std::vector<Vector> factors(p);
  for (const auto& s : subsets(basis.size(), p)) {
    for (std::size_t i = 0; i < p; ++i) factors[i] = basis[s[i]];
    out.push_back(wb.wedge(factors));
  }
  return out;
}

// ---------------------------------------------------------------- Quotient

Quotient::Quotient(const std::vector<Vector>& space, const std::vector<Vector>& subspace) : space_(space) {
  const std::size_t d = !space.empty() ? space.front().size() : (!subspace.empty() ? subspace.front().size() : 0);
  if (!space.empty() && !independent(space)) throw ContractViolation("Quotient: space list is dependent");
  // Independent part of the subspace, in order.
  std::vector<Vector> sub;
  for (const auto& v : subspace) {
    auto trial = sub;
    trial.push_back(v);
    if (independent(trial)) sub = std::move(trial);
  }
  if (!sub.empty()) {
    const CoordinateSystem space_coords(space, d);
    for (const auto& v : sub)
      if (!space_coords.contains(v)) throw ContractViolation("Quotient: subspace not contained in space");
  }
  subspace_rank_ = sub.size();
  std::vector<Vector> acc = sub;
  for (std::size_t i = 0; i < space.size(); ++i) {
    acc.push_back(space[i]);
    if (independent(acc)) {
      complement_.push_back(space[i]);
      complement_indices_.push_back(i);
    } else {
      acc.pop_back();
    }
  }
  coords_ = CoordinateSystem(std::move(acc), d);
}

Vector Quotient::project(const Vector& ambient) const {
  auto c = coords_.decompose(ambient);
  if (!c) throw ContractViolation("Quotient::project: vector outside the space");
  Vector out(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    if (c->get(subspace_rank_ + i)) out.set(i);
  return out;
}

Matrix Quotient::matrix() const {
  Matrix m(dim(), space_.size());
  for (std::size_t j = 0; j < space_.size(); ++j) {
    const auto col = project(space_[j]);
    for (auto i : col.support()) m.set(i, j);
  }
  return m;
}

}  // namespace tropbetti::gf2

namespace tropbetti::gf2 {

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
  SparseMatrix s(m.rows(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m.get(r, c)) s.columns[c].push_back(static_cast<std::uint32_t>(r));
  return s;
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (auto r : columns[c]) m.flip(r, c);
  return m;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.size();
  return n;
}

namespace {

void symmetric_difference_into(std::vector<std::uint32_t>& acc, const std::vector<std::uint32_t>& other,
                               std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(acc.begin(), acc.end(), other.begin(), other.end(), std::back_inserter(scratch));
  acc.swap(scratch);
}

}  // namespace

std::size_t rank(const SparseMatrix& a, const std::vector<bool>* skip, std::vector<std::uint32_t>* pivot_rows) {
  if (skip && skip->size() != a.cols) throw ContractViolation("sparse rank: skip mask has wrong length");
  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> owner(a.rows, none);
  std::vector<std::vector<std::uint32_t>> reduced;
  std::vector<std::uint32_t> work;
  std::vector<std::uint32_t> scratch;
  for (std::size_t j = 0; j < a.cols; ++j) {
    if (skip && (*skip)[j]) continue;
    work = a.columns[j];
    while (!work.empty()) {
      const auto low = work.back();
      if (owner[low] == none) {
        owner[low] = static_cast<std::uint32_t>(reduced.size());
        reduced.push_back(work);
        if (pivot_rows) pivot_rows->push_back(low);
        break;
      }
      symmetric_difference_into(work, reduced[owner[low]], scratch);
    }
  }
  return reduced.size();
}

bool product_is_zero(const SparseMatrix& b, const SparseMatrix& a) {
  if (b.cols != a.rows) throw ContractViolation("product_is_zero: dimension mismatch");
  std::vector<std::uint8_t> acc(b.rows, 0);
  std::vector<std::uint32_t> touched;
  for (const auto& col : a.columns) {
    touched.clear();
    for (auto k : col) {
      for (auto r : b.columns[k]) {
        acc[r] ^= 1U;
        touched.push_back(r);
      }
    }
    bool zero = true;
    for (auto r : touched) {
      if (acc[r]) zero = false;
      acc[r] = 0;
    }
    if (!zero) return false;
  }
  return true;
}

}  // namespace tropbetti::gf2
