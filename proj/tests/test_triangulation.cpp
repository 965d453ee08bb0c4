#include <algorithm>
#include <set>

#include "doctest.h"
#include "tropbetti/triangulation.hpp"

using namespace tropbetti;

namespace {

// Lattice points of conv(w) for a simplex whose vertices are linearly
// independent, by Cramer's rule over the bounding box.
std::size_t points_in_simplex(const std::vector<IntVec>& w) {
  const std::size_t d = w.size();
  std::vector<IntVec> cols(d, IntVec(d));
  IntVec lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = hi[i] = w[0][i];
    for (const auto& v : w) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  auto det_with = [&](std::size_t k, const IntVec& x) {
    std::vector<IntVec> rows(d, IntVec(d));
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) rows[i][j] = j == k ? x[i] : w[j][i];
    return determinant(rows);
  };
  const auto full = det_with(d, IntVec(d, 0));  // k = d replaces nothing
  std::size_t count = 0;
  IntVec x = lo;
  while (true) {
    std::int64_t sum = 0;
    bool nonneg = true;
    for (std::size_t k = 0; k < d; ++k) {
      auto num = det_with(k, x);
      if (full < 0) num = -num;
      nonneg = nonneg && num >= 0;
      sum += num;
    }
    if (nonneg && sum == std::abs(full)) ++count;
    std::size_t k = 0;
    while (k < d && x[k] == hi[k]) x[k] = lo[k], ++k;
    if (k == d) break;
    ++x[k];
  }
  return count;
}

bool on_common_facet(const LatticePolytope& p, const Face& f, const IntVec& w) {
  for (auto fi : f.facets)
    if (dot(p.facets()[fi].normal, w) == p.facets()[fi].rhs) return true;
  return false;
}

}  // namespace

TEST_CASE("staircase triangulations pass the volume certificate") {
  struct Case {
    const char* name;
    std::size_t simplices;
  };
  for (const auto& c : {Case{"cube:4", 384}, Case{"quintic", 625}, Case{"cross:4", 16}, Case{"k3-cube", 48},
                        Case{"elliptic", 9}, Case{"cube:3", 48}}) {
    CAPTURE(c.name);
    const auto p = polytopes::builtin(c.name);
    const auto t = generate(p, Strategy::Staircase);
    CHECK(t.boundary_simplices.size() == c.simplices);
    CHECK(static_cast<std::int64_t>(t.boundary_simplices.size()) == p.normalized_volume());
    const auto rep = validate(p, t);
    CHECK(rep.ok());
    CHECK(rep.volume_sum == rep.expected_volume);
    CHECK(t.points.size() == p.boundary_points().size());
  }
}

TEST_CASE("each facet of the 4-cube gets 48 tetrahedra") {
  const auto p = polytopes::cube(4);
  const auto t = generate(p, Strategy::Staircase);
  for (const auto& f : p.facets()) {
    const auto n = std::count_if(t.boundary_simplices.begin(), t.boundary_simplices.end(), [&](const IndexSet& s) {
      return std::all_of(s.begin(), s.end(), [&](std::size_t v) { return dot(f.normal, t.points[v]) == 1; });
    });
    CHECK(n == 48);
  }
}

TEST_CASE("validation rejects a skipped boundary point") {
  const auto p = polytopes::builtin("elliptic");
  auto t = generate(p, Strategy::Staircase);
  // Pick a non-vertex point and merge its two segments into one.
  std::size_t skip = 0;
  for (; skip < t.points.size(); ++skip)
    if (p.carrier(t.points[skip]).dim == 1) break;
  REQUIRE(skip < t.points.size());
  IndexSet ends;
  std::vector<IndexSet> kept;
  for (const auto& s : t.boundary_simplices) {
    if (std::binary_search(s.begin(), s.end(), skip)) {
      for (auto v : s)
        if (v != skip) ends.push_back(v);
    } else {
      kept.push_back(s);
    }
  }
  REQUIRE(ends.size() == 2);
  std::sort(ends.begin(), ends.end());
  kept.push_back(ends);
  t.boundary_simplices = kept;
  const auto rep = validate(p, t);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.primitive);
  CHECK_FALSE(rep.complete);
  const auto it = std::find_if(rep.issues.begin(), rep.issues.end(),
                               [](const ValidationIssue& i) { return i.kind == "primitivity"; });
  REQUIRE(it != rep.issues.end());
  CHECK(it->witness == ends);
}

TEST_CASE("validation rejects overlapping simplices") {
  const auto p = polytopes::builtin("k3-cube");
  auto t = generate(p, Strategy::Staircase);
  t.boundary_simplices.push_back(t.boundary_simplices.front());
  const auto rep = validate(p, t);
  CHECK_FALSE(rep.covering);
  CHECK(rep.volume_sum > rep.expected_volume);
}

TEST_CASE("validation rejects a simplex off the boundary facets") {
  const auto p = polytopes::builtin("elliptic");
  auto t = generate(p, Strategy::Staircase);
  // A chord between points of two different edges.
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < t.points.size(); ++i)
    for (std::size_t j = i + 1; j < t.points.size(); ++j) {
      const auto fi = p.carrier(t.points[i]), fj = p.carrier(t.points[j]);
      if (fi.dim == 1 && fj.dim == 1 && !(fi == fj) && !a && !b) a = i, b = j;
    }
  REQUIRE(a != b);
  t.boundary_simplices.front() = {a, b};
  const auto rep = validate(p, t);
  CHECK_FALSE(rep.central);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("pulling succeeds on polygons and is deterministic") {
  for (const auto& name : {"k3-cube", "elliptic", "cross:4", "cube:3"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto t = generate(p, Strategy::Pulling, seed);
      CHECK(validate(p, t).ok());
      CHECK(t == generate(p, Strategy::Pulling, seed));
    }
  }
}

TEST_CASE("pulling on the quintic fails with an empty non-unimodular witness") {
  const auto p = polytopes::builtin("quintic");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CAPTURE(seed);
    try {
      (void)generate(p, Strategy::Pulling, seed);
      FAIL("expected PrimitivityFailed");
    } catch (const PrimitivityFailed& e) {
      REQUIRE(e.witness.size() == 4);
      CHECK(std::abs(determinant(e.witness)) > 1);
      // The witness lies on one facet and contains no other lattice point.
      bool on_facet = false;
      for (const auto& f : p.facets())
        on_facet = on_facet || std::all_of(e.witness.begin(), e.witness.end(),
                                           [&](const IntVec& w) { return dot(f.normal, w) == f.rhs; });
      CHECK(on_facet);
      CHECK(points_in_simplex(e.witness) == 4);
    }
  }
}

TEST_CASE("seeded permutations") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFULL}) {
    const auto a = seeded_permutation(50, seed);
    CHECK(a == seeded_permutation(50, seed));
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  }
  CHECK(seeded_permutation(50, 1) != seeded_permutation(50, 2));
  CHECK(seeded_permutation(0, 3).empty());
}

TEST_CASE("adjacent points have distinct parities") {
  for (const auto& name : {"cube:4", "quintic", "k3-cube", "cross:4", "elliptic"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    const auto t = generate(p, Strategy::Staircase);
    const Adjacency adj(t);
    for (std::size_t r = 0; r < t.points.size(); ++r) {
      CHECK(adj.adjacent(r, r));
      for (auto w : adj.neighbors(r)) {
        CHECK(w != r);
        CHECK(parity(t.points[w]) != parity(t.points[r]));
        CHECK(adj.adjacent(w, r));
      }
    }
  }
}

TEST_CASE("neighbours of a cube vertex include the edge midpoints") {
  const auto p = polytopes::cube(4);
  const auto t = generate(p, Strategy::Staircase);
  const Adjacency adj(t);
  const IntVec r{-1, -1, -1, -1};
  const auto ri = t.index_of(r);
  for (std::size_t j = 0; j < 4; ++j) {
    auto v = r;
    v[j] = 0;
    CHECK(adj.adjacent(ri, t.index_of(v)));
  }
}

TEST_CASE("stars stay inside faces containing the carrier") {
  for (const auto& name : {"cube:4", "quintic"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    const auto t = generate(p, Strategy::Staircase);
    const Adjacency adj(t);
    for (std::size_t r = 0; r < t.points.size(); ++r) {
      const auto carrier = p.carrier(t.points[r]);
      for (auto w : adj.neighbors(r)) CHECK(on_common_facet(p, carrier, t.points[w]));
      for (auto s : adj.star(r))
        CHECK(std::binary_search(t.boundary_simplices[s].begin(), t.boundary_simplices[s].end(), r));
    }
  }
}

TEST_CASE("every polytope edge of length l carries l triangulation edges") {
  for (const auto& name : {"cube:4", "quintic", "k3-cube"}) {
    CAPTURE(name);
    const auto p = polytopes::builtin(name);
    const auto t = generate(p, Strategy::Staircase);
    const auto t_edges = t.faces(1);
    for (const auto& e : p.faces(1)) {
      const auto pts = p.lattice_points(e);
      std::set<std::size_t> on_edge;
      for (const auto& x : pts) on_edge.insert(t.index_of(x));
      const auto n = std::count_if(t_edges.begin(), t_edges.end(), [&](const IndexSet& s) {
        return on_edge.count(s[0]) && on_edge.count(s[1]);
      });
      CHECK(n == p.edge_length(e));
    }
  }
}

TEST_CASE("unsupported facets are reported") {
  CHECK_THROWS_AS(generate(polytopes::triangle_product(), Strategy::Staircase), PolytopeError);
  CHECK(parse_strategy("pulling") == Strategy::Pulling);
  CHECK(to_string(Strategy::Staircase) == "staircase");
  CHECK_THROWS(parse_strategy("regular"));
}
