#include <algorithm>
#include <set>

#include "doctest.h"
#include "tropbetti/divisor.hpp"
#include "tropbetti/lattice.hpp"

using namespace tropbetti;

namespace {

const std::vector<std::string> kReflexive = {"cube:3", "cube:4", "cross:3", "cross:4", "quintic",
                                             "elliptic", "k3-cube", "triangle-product"};

// Cofactor expansion; fine for d <= 5.
std::int64_t laplace_det(const std::vector<IntVec>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  std::int64_t total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<IntVec> minor;
    for (std::size_t r = 1; r < n; ++r) {
      IntVec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    const std::int64_t sign = c % 2 ? -1 : 1;
    total += sign * m[0][c] * laplace_det(minor);
  }
  return total;
}

// Every integer vector in [-r, r]^d.
std::vector<IntVec> box(std::size_t d, std::int64_t r) {
  std::vector<IntVec> out;
  IntVec x(d, -r);
  while (true) {
    out.push_back(x);
    std::size_t k = 0;
    while (k < d && x[k] == r) x[k++] = -r;
    if (k == d) break;
    ++x[k];
  }
  return out;
}

// Facet normals a with max <a, v> = 1 attained on an affine hyperplane's worth
// of vertices, found by scanning small integer vectors.
std::set<IntVec> scanned_facet_normals(const std::vector<IntVec>& verts, std::int64_t r) {
  const std::size_t d = verts.front().size();
  std::set<IntVec> out;
  for (const auto& a : box(d, r)) {
    std::int64_t mx = INT64_MIN;
    for (const auto& v : verts) mx = std::max(mx, dot(a, v));
    if (mx != 1) continue;
    std::vector<IntVec> tight;
    for (const auto& v : verts)
      if (dot(a, v) == 1) tight.push_back(v);
    if (affine_dimension(tight) == static_cast<int>(d) - 1) out.insert(a);
  }
  return out;
}

std::size_t parities_of(const std::vector<IntVec>& pts) {
  std::set<gf2::Vector> s;
  for (const auto& x : pts) s.insert(parity(x));
  return s.size();
}

}  // namespace

TEST_CASE("cube and cross-polytope are dual") {
  const auto cube = polytopes::cube(4);
  CHECK(cube.dual() == polytopes::cross_polytope(4));
  CHECK(cube.dual().dual() == cube);
}

TEST_CASE("dualize is an involution on every reflexive builtin") {
  for (const auto& name : kReflexive) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    REQUIRE(p.is_reflexive());
    const auto d = p.dual();
    CHECK(d.dual() == p);
    std::set<IntVec> normals, dual_vertices(d.vertices().begin(), d.vertices().end());
    for (const auto& f : p.facets()) normals.insert(f.normal);
    CHECK(normals == dual_vertices);
  }
}

TEST_CASE("quintic facet normals match a direct scan") {
  const auto p = polytopes::builtin("quintic");
  const auto scanned = scanned_facet_normals(p.vertices(), 2);
  std::set<IntVec> computed;
  for (const auto& f : p.facets()) computed.insert(f.normal);
  CHECK(scanned.size() == 5);
  CHECK(scanned == computed);
  const std::set<IntVec> expected{{-1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}, {1, 1, 1, 1}};
  CHECK(scanned == expected);
  const auto dual_vertices = p.dual().vertices();
  CHECK(std::set<IntVec>(dual_vertices.begin(), dual_vertices.end()) == expected);
}

TEST_CASE("facets of every builtin match a direct scan") {
  for (const auto& name : {"cube:3", "cross:3", "k3-cube", "elliptic", "cube:4", "cross:4"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    std::set<IntVec> computed;
    for (const auto& f : p.facets()) computed.insert(f.normal);
    CHECK(scanned_facet_normals(p.vertices(), 1) == computed);
  }
}

TEST_CASE("reflexivity and smoothness verdicts") {
  const auto cube = polytopes::cube(4);
  CHECK(cube.is_reflexive());
  CHECK(cube.is_smooth());
  CHECK(polytopes::builtin("quintic").is_smooth());

  // Smoothness oracle: the dual facet of every vertex has exactly d vertices
  // with determinant +-1.
  auto oracle = [](const LatticePolytope& p) {
    const auto d = p.dual();
    for (const auto& r : p.vertices()) {
      std::vector<IntVec> dual_facet;
      for (const auto& n : d.vertices())
        if (dot(n, r) == 1) dual_facet.push_back(n);
      if (dual_facet.size() != p.dim()) return false;
      if (std::abs(laplace_det(dual_facet)) != 1) return false;
    }
    return true;
  };
  for (const auto& name : kReflexive) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    CHECK(p.is_smooth() == oracle(p));
  }
  const auto cross = polytopes::cross_polytope(4);
  CHECK_FALSE(oracle(cross));
  CHECK_FALSE(cross.is_smooth());
  CHECK(cross.is_reflexive());
}

TEST_CASE("twice the unit simplex is reflexive only on the line") {
  for (std::size_t d = 1; d <= 4; ++d) {
    CAPTURE(d);
    std::vector<IntVec> verts{IntVec(d, 0)};
    for (std::size_t i = 0; i < d; ++i) {
      IntVec v(d, 0);
      v[i] = 2;
      verts.push_back(v);
    }
    const LatticePolytope p(verts);
    // Interior lattice points of conv(0, 2e_i): x_i >= 1 and sum x_i <= 1.
    std::size_t oracle = 0;
    for (const auto& x : box(d, 2)) {
      std::int64_t s = 0;
      bool positive = true;
      for (auto c : x) {
        s += c;
        positive = positive && c >= 1;
      }
      if (positive && s < 2) ++oracle;
    }
    CHECK(p.interior_points().size() == oracle);
    CHECK(oracle == (d == 1 ? 1U : 0U));
    if (d == 1) {
      const auto centred = p.translated({-1});
      CHECK(centred.is_reflexive());
    } else {
      CHECK_FALSE(p.is_reflexive());
      CHECK_THROWS_AS(p.dual(), NotReflexive);
    }
  }
}

TEST_CASE("face counts") {
  auto counts = [](const LatticePolytope& p) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.dim(); ++k) out.push_back(p.faces(static_cast<int>(k)).size());
    return out;
  };
  CHECK(counts(polytopes::cube(4)) == std::vector<std::size_t>{16, 32, 24, 8});
  CHECK(counts(polytopes::reflexive_simplex(4)) == std::vector<std::size_t>{5, 10, 10, 5});
  CHECK(counts(polytopes::builtin("quintic")) == std::vector<std::size_t>{5, 10, 10, 5});
  CHECK(counts(polytopes::cross_polytope(4)) == std::vector<std::size_t>{8, 24, 32, 16});
}

TEST_CASE("Euler relation on boundary spheres") {
  for (const auto& name : kReflexive) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    std::int64_t chi = 0;
    for (std::size_t k = 0; k < p.dim(); ++k)
      chi += (k % 2 ? -1 : 1) * static_cast<std::int64_t>(p.faces(static_cast<int>(k)).size());
    // chi(S^{d-1}) = 1 + (-1)^{d-1}.
    CHECK(chi == (p.dim() % 2 == 1 ? 2 : 0));
  }
}

TEST_CASE("smooth 4-polytopes: every vertex has 4 edges and 6 two-faces") {
  for (const auto& name : {"cube:4", "quintic", "triangle-product"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    for (std::size_t v = 0; v < p.vertices().size(); ++v) {
      auto through = [&](int k) {
        return std::count_if(p.faces(k).begin(), p.faces(k).end(), [&](const Face& f) {
          return std::binary_search(f.vertices.begin(), f.vertices.end(), v);
        });
      };
      CHECK(through(1) == 4);
      CHECK(through(2) == 6);
    }
  }
}

TEST_CASE("lattice point counts") {
  const auto cube = polytopes::cube(4);
  for (const auto& e : cube.faces(1)) CHECK(cube.lattice_points(e).size() == 3);

  const auto q = polytopes::builtin("quintic");
  // x_i >= -1, sum x_i <= 1, scanned over the bounding box.
  std::size_t inside = 0, interior = 0;
  for (const auto& x : box(4, 5)) {
    std::int64_t s = 0;
    bool ok = true, strict = true;
    for (auto c : x) {
      s += c;
      ok = ok && c >= -1;
      strict = strict && c > -1;
    }
    if (ok && s <= 1) ++inside;
    if (strict && s < 1) ++interior;
  }
  CHECK(inside == 126);
  CHECK(interior == 1);
  CHECK(q.lattice_points().size() == inside);
  CHECK(q.boundary_points().size() == 125);
}

TEST_CASE("interior points of reflexive polytopes are the origin") {
  for (const auto& name : kReflexive) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    const auto in = p.interior_points();
    REQUIRE(in.size() == 1);
    CHECK(in.front() == IntVec(p.dim(), 0));
  }
}

TEST_CASE("skeleton points of the 4-cube") {
  const auto cube = polytopes::cube(4);
  // In a 2-face iff at least two coordinates are +-1.
  std::set<IntVec> oracle;
  for (const auto& x : box(4, 1)) {
    const auto extreme = std::count_if(x.begin(), x.end(), [](std::int64_t c) { return c != 0; });
    if (extreme >= 2) oracle.insert(x);
  }
  const auto sk = cube.skeleton_points(2);
  CHECK(std::set<IntVec>(sk.begin(), sk.end()) == oracle);
  CHECK(oracle.size() == 72);
}

TEST_CASE("edge lengths and boundary parities") {
  const auto cube = polytopes::cube(4);
  for (const auto& e : cube.faces(1)) CHECK(cube.edge_length(e) == 2);
  for (const auto& f : cube.faces(2)) {
    const auto pts = cube.lattice_points(f);
    std::vector<IntVec> bd;
    for (const auto& x : pts)
      if (cube.carrier(x).dim < 2) bd.push_back(x);
    CHECK(bd.size() == 8);
    CHECK(cube.boundary_parities(f).size() == parities_of(bd));
    CHECK(parities_of(bd) == 3);
  }

  const auto q = polytopes::builtin("quintic");
  for (const auto& e : q.faces(1)) CHECK(q.edge_length(e) == 5);
  for (const auto& f : q.faces(2)) {
    // Boundary of the 5-dilated triangle through barycentric steps.
    const auto& v0 = q.vertices()[f.vertices[0]];
    const auto& v1 = q.vertices()[f.vertices[1]];
    const auto& v2 = q.vertices()[f.vertices[2]];
    std::vector<IntVec> bd;
    for (std::int64_t a = 0; a <= 5; ++a)
      for (std::int64_t b = 0; a + b <= 5; ++b) {
        if (a != 0 && b != 0 && a + b != 5) continue;
        IntVec x(4);
        for (std::size_t i = 0; i < 4; ++i) x[i] = v0[i] + (a * (v1[i] - v0[i]) + b * (v2[i] - v0[i])) / 5;
        bd.push_back(x);
      }
    CHECK(bd.size() == 15);
    CHECK(parities_of(bd) == 3);
    CHECK(q.boundary_parities(f).size() == 3);
  }

  const auto tp = polytopes::triangle_product();
  bool four = false;
  for (const auto& f : tp.faces(2)) four = four || tp.boundary_parities(f).size() == 4;
  CHECK(four);
}

TEST_CASE("proper faces avoid the origin mod 2") {
  for (const auto& name : kReflexive) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    const gf2::Vector zero(p.dim());
    for (std::size_t k = 0; k < p.dim(); ++k)
      for (const auto& f : p.faces(static_cast<int>(k))) CHECK_FALSE(p.parity_flat(f).contains(zero));
  }
}

TEST_CASE("mod-2 relations around vertices of smooth polytopes") {
  for (const auto& name : {"cube:4", "quintic"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    const auto t = generate(p, Strategy::Staircase);
    const DivisorLab lab(p, t);
    for (std::size_t v = 0; v < p.vertices().size(); ++v) {
      const auto fr = lab.vertex_frame(v);
      REQUIRE(fr.edges.size() == 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          CHECK(parity(fr.opposite_normals[i]).dot(parity(fr.next_points[j])) == (i != j));
    }
  }
}

TEST_CASE("normalized volumes") {
  CHECK(polytopes::cube(4).normalized_volume() == 384);
  CHECK(polytopes::builtin("quintic").normalized_volume() == 625);
  CHECK(polytopes::cross_polytope(4).normalized_volume() == 16);
  CHECK(polytopes::builtin("k3-cube").normalized_volume() == 48);
}

TEST_CASE("translation moves parities and breaks reflexivity") {
  const auto cube = polytopes::cube(3);
  const auto shifted = cube.translated({1, 0, 0});
  CHECK_FALSE(shifted.is_reflexive());
  CHECK(parity(shifted.vertices().front()) != parity(cube.vertices().front()));
  CHECK_THROWS_AS(shifted.dual(), NotReflexive);
}

TEST_CASE("degenerate input is rejected") {
  CHECK_THROWS_AS(LatticePolytope({{0, 0}, {1, 1}, {2, 2}}), PolytopeError);
  CHECK_THROWS_AS(polytopes::builtin("dodecahedron"), PolytopeError);
}
