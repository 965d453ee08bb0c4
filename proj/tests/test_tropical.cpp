#include <algorithm>

#include "doctest.h"
#include "tropbetti/tropical.hpp"

using namespace tropbetti;

namespace {

using Table = std::vector<std::vector<std::int64_t>>;

struct Pair {
  LatticePolytope delta, dual;
  CentralTriangulation t, tdual;

  explicit Pair(const std::string& name)
      : delta(polytopes::builtin(name)),
        dual(delta.dual()),
        t(generate(delta, Strategy::Staircase)),
        tdual(generate(dual, Strategy::Staircase)) {}
};

std::uint64_t choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

TEST_CASE("min_cone on the 3-cube") {
  const auto c = polytopes::cube(3);
  CHECK(min_cone(c, {}).dim == -1);
  CHECK(min_cone(c, {{1, 0, 0}}).dim == 2);
  CHECK(min_cone(c, {{1, 1, 1}}).dim == 0);
  CHECK(min_cone(c, {{1, 1, 0}, {1, 1, 1}}).dim == 1);
  CHECK(min_cone(c, {{1, 1, 0}, {1, -1, 0}}).dim == 2);
  CHECK(min_cone(c, {{1, 1, 0}, {1, -1, 0}}) == min_cone(c, {{1, 0, 0}}));
  CHECK_THROWS_AS(min_cone(c, {{1, 0, 0}, {0, 1, 0}}), ContractViolation);
  CHECK_THROWS_AS(min_cone(c, {{0, 0, 0}}), ContractViolation);
}

TEST_CASE("dual_face on the octahedron") {
  const auto o = polytopes::cross_polytope(3);
  CHECK(dual_face(o, {}).dim == 3);
  CHECK(dual_face(o, {{1, 1, 1}}).dim == 2);
  CHECK(dual_face(o, {{1, 1, 0}}).dim == 1);
  CHECK(dual_face(o, {{1, 0, 0}}).dim == 0);
  CHECK(dual_face(o, {{1, 0, 0}}).vertices.size() == 1);
  CHECK(dual_face(o, {{1, 1, 1}, {1, 1, -1}}).dim == 1);
}

TEST_CASE("fiber dimensions follow the binomial count") {
  for (const auto& name : {"elliptic", "k3-cube"}) {
    CAPTURE(name);
    const Pair pr(name);
    const TropicalComplex cx(pr.tdual, pr.t);
    for (std::size_t p = 0; p <= cx.n() + 1; ++p) {
      for (std::size_t i = 0; i < cx.cells().size(); ++i) {
        const auto& c = cx.cells()[i];
        const auto w = static_cast<std::int64_t>(cx.n() + 1 - c.tau.size());
        const std::int64_t s = c.sigma_dim();
        const auto f = cx.fiber(p, i);
        const auto pp = static_cast<std::int64_t>(p);
        CHECK(f.numerator_dim == choose(w, pp));
        CHECK(f.dim() == choose(w, pp) - choose(w - s, pp - s));
        CHECK(f.ambient_wedge_dim == choose(static_cast<std::int64_t>(cx.n() + 1), pp));
        CHECK(c.dim == w - s);
      }
    }
  }
}

TEST_CASE("cofaces raise the dimension by one") {
  const Pair pr("k3-cube");
  const TropicalComplex cx(pr.tdual, pr.t);
  std::size_t total = 0;
  for (int q = 0; q <= static_cast<int>(cx.n()); ++q) total += cx.cells_of_dim(q).size();
  CHECK(total == cx.cells().size());
  for (std::size_t i = 0; i < cx.cells().size(); ++i)
    for (auto j : cx.cofaces(i)) CHECK(cx.cells()[j].dim == cx.cells()[i].dim + 1);
  CHECK(cx.cells_of_dim(-1).empty());
  CHECK(cx.cells_of_dim(7).empty());
  for (std::size_t i = 0; i < cx.cells().size(); ++i) CHECK(cx.find(cx.cells()[i]) == i);
}

TEST_CASE("the coboundary squares to zero") {
  for (const auto& name : {"elliptic", "k3-cube"}) {
    CAPTURE(name);
    const Pair pr(name);
    for (const auto& cx : {TropicalComplex(pr.tdual, pr.t), TropicalComplex(pr.t, pr.tdual)}) {
      for (std::size_t p = 0; p <= cx.n(); ++p)
        for (int q = 0; q + 1 < static_cast<int>(cx.n()); ++q)
          CHECK(gf2::product_is_zero(cx.coboundary(p, q + 1), cx.coboundary(p, q)));
    }
  }
}

TEST_CASE("elliptic curve cohomology") {
  const Pair pr("elliptic");
  const auto tab = TropicalComplex(pr.tdual, pr.t).cohomology_table();
  CHECK(tab.n == 1);
  CHECK(tab.dims == Table{{1, 1}, {1, 1}});
}

TEST_CASE("K3 cohomology") {
  const Pair pr("k3-cube");
  const auto x = TropicalComplex(pr.tdual, pr.t).cohomology_table();
  const auto m = TropicalComplex(pr.t, pr.tdual).cohomology_table();
  CHECK(x.dims == Table{{1, 0, 1}, {0, 20, 0}, {1, 0, 1}});
  CHECK(m.dims == x.dims);
  CHECK(mirror_check(x, m));
}

TEST_CASE("chain-level and cohomological Euler characteristics agree") {
  for (const auto& name : {"elliptic", "k3-cube", "cross:4"}) {
    CAPTURE(name);
    const Pair pr(name);
    const auto tab = TropicalComplex(pr.tdual, pr.t).cohomology_table();
    for (std::size_t p = 0; p <= tab.n; ++p) {
      std::int64_t chain = 0;
      for (std::size_t q = 0; q < tab.chain_dims[p].size(); ++q) chain += (q % 2 ? -1 : 1) * tab.chain_dims[p][q];
      CHECK(chain == tab.euler(p));
      for (std::size_t q = 0; q < tab.dims[p].size(); ++q) {
        const auto in = q ? tab.ranks[p][q - 1] : 0;
        CHECK(tab.dims[p][q] == tab.chain_dims[p][q] - tab.ranks[p][q] - in);
      }
    }
  }
}

TEST_CASE("quintic and its mirror") {
  const Pair pr("quintic");
  const auto x = TropicalComplex(pr.tdual, pr.t).cohomology_table();
  const auto m = TropicalComplex(pr.t, pr.tdual).cohomology_table();
  CHECK(x.dims == Table{{1, 0, 0, 1}, {0, 1, 101, 0}, {0, 101, 1, 0}, {1, 0, 0, 1}});
  CHECK(mirror_check(x, m));
  CHECK(m.dims[1][1] == 101);
}

TEST_CASE("4-cube hypersurface and its mirror") {
  const Pair pr("cube:4");
  const auto x = TropicalComplex(pr.tdual, pr.t).cohomology_table(2);
  CHECK(x.dims[1] == std::vector<std::int64_t>{0, 4, 68, 0});
  CHECK(x.dims[2] == std::vector<std::int64_t>{0, 68, 4, 0});
  const auto m = TropicalComplex(pr.t, pr.tdual).cohomology_table(2);
  CHECK(mirror_check(x, m));
}

TEST_CASE("thread count does not change the table") {
  const Pair pr("k3-cube");
  const TropicalComplex cx(pr.tdual, pr.t);
  const auto a = cx.cohomology_table(1), b = cx.cohomology_table(3);
  CHECK(a.dims == b.dims);
  CHECK(a.ranks == b.ranks);
}

TEST_CASE("mirror_check reports the first mismatch") {
  CohomologyTable a, b;
  a.n = b.n = 2;
  a.dims = {{1, 0, 1}, {0, 20, 0}, {1, 0, 1}};
  b.dims = a.dims;
  std::pair<std::size_t, std::size_t> at{9, 9};
  CHECK(mirror_check(a, b, &at));
  b.dims[1][2] = 3;
  CHECK_FALSE(mirror_check(a, b, &at));
  CHECK(at == std::pair<std::size_t, std::size_t>{1, 2});
  b = a;
  b.dims[0][1] = 5;  // compared against a.dims[2][1]
  CHECK_FALSE(mirror_check(a, b, &at));
  CHECK(at == std::pair<std::size_t, std::size_t>{2, 1});
}

TEST_CASE("mismatched ranks are rejected") {
  const Pair a("elliptic"), b("k3-cube");
  CHECK_THROWS_AS(TropicalComplex(a.t, b.t), ContractViolation);
}
