#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "tropbetti/gf2.hpp"

using namespace tropbetti;
using gf2::Matrix;
using gf2::Vector;

namespace {

// Reference rank over plain int vectors, no bit packing.
std::size_t naive_rank(std::vector<std::vector<int>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && !m[piv][c]) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && m[r][c])
        for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
    ++rank;
  }
  return rank;
}

std::vector<std::vector<int>> to_ints(const Matrix& a) {
  std::vector<std::vector<int>> out(a.rows(), std::vector<int>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = a.get(r, c);
  return out;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  // Density varies per matrix so that low-rank and full-rank cases both occur.
  Matrix matrix(std::size_t rows, std::size_t cols) {
    const double density = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    std::bernoulli_distribution bit(density);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (bit(rng)) m.set(r, c);
    return m;
  }
  Vector vector(std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1U) v.set(i);
    return v;
  }
};

Vector bits(std::initializer_list<int> b) { return Vector(b); }

// Wedge of vectors by expanding every factor into unit vectors and summing
// the wedges of distinct index tuples.
Vector multilinear_wedge(const std::vector<Vector>& factors, std::size_t d) {
  const std::size_t p = factors.size();
  const auto subsets = gf2::subsets(d, p);
  Vector out(subsets.size());
  std::vector<std::size_t> idx(p, 0);
  while (true) {
    bool ok = true;
    for (std::size_t k = 0; k < p; ++k) ok = ok && factors[k].get(idx[k]);
    auto sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      const auto pos = std::find(subsets.begin(), subsets.end(), sorted) - subsets.begin();
      out.flip(static_cast<std::size_t>(pos));
    }
    std::size_t k = 0;
    while (k < p && ++idx[k] == d) idx[k++] = 0;
    if (k == p) break;
  }
  return out;
}

}  // namespace

TEST_CASE("rank of small fixed matrices") {
  CHECK(gf2::rank(Matrix::identity(3)) == 3);
  CHECK(gf2::rank(Matrix(4, 7)) == 0);
  CHECK(gf2::rank(Matrix::from_rows({bits({1, 1}), bits({1, 1})}, 2)) == 1);
}

TEST_CASE("solve_affine examples") {
  auto x = gf2::solve_affine(Matrix::identity(2), bits({1, 0}));
  REQUIRE(x);
  CHECK(*x == bits({1, 0}));

  x = gf2::solve_affine(Matrix::from_rows({bits({1, 1})}, 2), bits({1}));
  REQUIRE(x);
  CHECK(*x == bits({1, 0}));

  CHECK_FALSE(gf2::solve_affine(Matrix::from_rows({bits({1, 0}), bits({1, 0})}, 2), bits({1, 0})));
  CHECK_THROWS_AS(gf2::solve_affine(Matrix::identity(2), bits({1, 0, 1})), ContractViolation);
}

TEST_CASE("kernel_basis examples") {
  CHECK(gf2::kernel_basis(Matrix::identity(5)).empty());
  CHECK(gf2::kernel_basis(Matrix(2, 3)).size() == 3);
  const auto k = gf2::kernel_basis(Matrix::from_rows({bits({1, 1, 0})}, 3));
  REQUIRE(k.size() == 2);
  CHECK(gf2::independent(k));
  for (const auto& v : k) CHECK((Matrix::from_rows({bits({1, 1, 0})}, 3) * v).is_zero());
}

TEST_CASE("wedge_subspace examples") {
  const auto e1 = bits({1, 0, 0}), e2 = bits({0, 1, 0}), e3 = bits({0, 0, 1});
  const gf2::WedgeBasis w2(3, 2);

  auto w = gf2::wedge_subspace({e1, e2}, 2);
  REQUIRE(w.size() == 1);
  Vector e12(3);
  e12.set(w2.index_of({0, 1}));
  CHECK(w[0] == e12);

  w = gf2::wedge_subspace({e1 + e2, e3}, 2);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == multilinear_wedge({e1 + e2, e3}, 3));
  Vector expected(3);
  expected.set(w2.index_of({0, 2}));
  expected.set(w2.index_of({1, 2}));
  CHECK(w[0] == expected);

  w = gf2::wedge_subspace({e1 + e2, e3}, 0);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == bits({1}));

  CHECK_THROWS_AS(gf2::wedge_subspace({e1, e1}, 1), ContractViolation);
}

TEST_CASE("wedge agrees with multilinear expansion on random factors") {
  Gen g(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = g.size(2, 7);
    const std::size_t p = g.size(1, d);
    std::vector<Vector> f;
    for (std::size_t k = 0; k < p; ++k) f.push_back(g.vector(d));
    CHECK(gf2::WedgeBasis(d, p).wedge(f) == multilinear_wedge(f, d));
  }
}

TEST_CASE("quotient examples") {
  const auto e1 = bits({1, 0, 0}), e2 = bits({0, 1, 0}), e3 = bits({0, 0, 1});
  gf2::Quotient q({bits({1, 0}), bits({0, 1})}, {bits({1, 0})});
  CHECK(q.dim() == 1);
  CHECK(q.project(bits({1, 0})).is_zero());
  CHECK(q.project(bits({0, 1})) == bits({1}));

  gf2::Quotient full({e1, e2}, {e1, e2});
  CHECK(full.dim() == 0);

  gf2::Quotient q3({e1, e2, e3}, {e1 + e2});
  CHECK(q3.dim() == 2);
  // Kernel by brute force over all 8 vectors of F_2^3.
  int in_kernel = 0;
  for (int mask = 0; mask < 8; ++mask) {
    Vector v = bits({mask & 1, (mask >> 1) & 1, (mask >> 2) & 1});
    const bool zero = q3.project(v).is_zero();
    CHECK(zero == (v.is_zero() || v == e1 + e2));
    in_kernel += zero;
  }
  CHECK(in_kernel == 2);

  CHECK_THROWS_AS(gf2::Quotient({e1, e2}, {e3}), ContractViolation);
}

TEST_CASE("rank-nullity and rank oracle on random matrices") {
  Gen g(2024);
  for (int trial = 0; trial < 1500; ++trial) {
    const auto rows = g.size(1, 90);
    const auto cols = g.size(1, 90);
    const auto a = g.matrix(rows, cols);
    const auto r = gf2::rank(a);
    const auto kernel = gf2::kernel_basis(a);
    REQUIRE(r + kernel.size() == cols);
    REQUIRE(r <= std::min(rows, cols));
    REQUIRE(r == naive_rank(to_ints(a)));
    for (const auto& v : kernel) REQUIRE((a * v).is_zero());
    REQUIRE(gf2::independent(kernel));
  }
}

TEST_CASE("rank is invariant under row and column permutations") {
  Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = g.matrix(g.size(1, 40), g.size(1, 70));
    std::vector<std::size_t> rp(a.rows()), cp(a.cols());
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), g.rng);
    std::shuffle(cp.begin(), cp.end(), g.rng);
    Matrix b(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) b.set(rp[r], cp[c], a.get(r, c));
    CHECK(gf2::rank(b) == gf2::rank(a));
  }
}

TEST_CASE("solve_affine is exact and its failures are rank certificates") {
  Gen g(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = g.matrix(g.size(1, 50), g.size(1, 50));
    const auto b = g.vector(a.rows());
    const auto x = gf2::solve_affine(a, b);
    std::vector<Vector> cols_a, cols_ab;
    for (std::size_t c = 0; c < a.cols(); ++c) cols_a.push_back(a.column(c));
    cols_ab = cols_a;
    cols_ab.push_back(b);
    if (x) {
      REQUIRE(a * *x == b);
    } else {
      REQUIRE(gf2::rank(cols_ab) > gf2::rank(cols_a));
    }
  }
}

TEST_CASE("solution picks zero free variables") {
  // x0 + x1 + x2 = 1 and x1 = 1: pivots at columns 0 and 1, x2 free.
  const auto a = Matrix::from_rows({bits({1, 1, 1}), bits({0, 1, 0})}, 3);
  const auto x = gf2::solve_affine(a, bits({1, 1}));
  REQUIRE(x);
  CHECK(*x == bits({0, 1, 0}));
}

TEST_CASE("wedge_subspace dimension is binomial for independent input") {
  Gen g(99);
  int done = 0;
  while (done < 200) {
    const std::size_t d = g.size(1, 8);
    const std::size_t k = g.size(1, d);
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < k; ++i) basis.push_back(g.vector(d));
    if (!gf2::independent(basis)) continue;
    const std::size_t p = g.size(0, k);
    const auto w = gf2::wedge_subspace(basis, p);
    CHECK(w.size() == gf2::binomial(k, p));
    CHECK(gf2::rank(w) == w.size());
    ++done;
  }
}

TEST_CASE("quotient kills the subspace and keeps the complement") {
  Gen g(31);
  int done = 0;
  while (done < 300) {
    const std::size_t d = g.size(1, 12);
    const std::size_t k = g.size(1, d);
    std::vector<Vector> space;
    for (std::size_t i = 0; i < k; ++i) space.push_back(g.vector(d));
    if (!gf2::independent(space)) continue;
    std::vector<Vector> sub;
    const std::size_t s = g.size(0, k + 2);
    for (std::size_t i = 0; i < s; ++i) {
      Vector v(d);
      for (const auto& b : space)
        if (g.rng() & 1U) v ^= b;
      sub.push_back(v);
    }
    gf2::Quotient q(space, sub);
    CHECK(q.dim() == k - (sub.empty() ? 0 : gf2::rank(sub)));
    for (const auto& v : sub) CHECK(q.project(v).is_zero());
    for (std::size_t i = 0; i < q.complement().size(); ++i) {
      const auto img = q.project(q.complement()[i]);
      CHECK(img == Vector::unit(q.dim(), i));
    }
    ++done;
  }
}

TEST_CASE("sparse column reduction agrees with dense rank") {
  Gen g(8);
  for (int trial = 0; trial < 400; ++trial) {
    const auto a = g.matrix(g.size(1, 80), g.size(1, 80));
    const auto s = gf2::SparseMatrix::from_dense(a);
    CHECK(s.to_dense() == a);
    CHECK(gf2::rank(s) == gf2::rank(a));
  }
}

TEST_CASE("product_is_zero matches the dense product") {
  Gen g(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = g.size(1, 30), m = g.size(1, 30), k = g.size(1, 30);
    auto a = g.matrix(m, n);
    Matrix b;
    if (trial % 2 == 0) {
      // Rows of b orthogonal to the column space of a.
      const auto left = gf2::kernel_basis(a.transposed());
      b = Matrix(left.size(), m);
      for (std::size_t r = 0; r < left.size(); ++r)
        for (auto c : left[r].support()) b.set(r, c);
      if (b.rows() == 0) continue;
    } else {
      b = g.matrix(k, m);
    }
    const bool expected = (b * a).is_zero();
    CHECK(gf2::product_is_zero(gf2::SparseMatrix::from_dense(b), gf2::SparseMatrix::from_dense(a)) == expected);
  }
}

TEST_CASE("vector arithmetic") {
  Gen g(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = g.size(1, 200);
    const auto v = g.vector(n), w = g.vector(n);
    CHECK((v + v).is_zero());
    CHECK((v + w) + w == v);
    std::size_t dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += v.get(i) & w.get(i);
    CHECK(v.dot(w) == static_cast<bool>(dot & 1U));
  }
}
