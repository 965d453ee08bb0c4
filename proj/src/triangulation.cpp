#include "tropbetti/triangulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace tropbetti {

namespace {

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

int sign(std::int64_t x) { return (x > 0) - (x < 0); }

std::int64_t simplex_det(const std::vector<IntVec>& coords) { return determinant(coords); }

std::string describe(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::vector<std::vector<std::size_t>> permutations(std::size_t m) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Odometer over [0, hi)^m.
bool advance(std::vector<std::int64_t>& c, const std::vector<std::int64_t>& hi) {
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] + 1 < hi[i]) {
      ++c[i];
      return true;
    }
    c[i] = 0;
  }
  return false;
}

// Facet of the form w0 + k * (unimodular simplex), triangulated by the
// Freudenthal subdivision of {k >= z_1 >= ... >= z_m >= 0}.
std::vector<std::vector<IntVec>> staircase_simplex(const std::vector<IntVec>& w) {
  const std::size_t m = w.size() - 1;
  std::vector<IntVec> diffs;
  std::int64_t k = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    diffs.push_back(w[i] - w[0]);
    k = std::gcd(k, gcd_of(diffs.back()));
  }
  std::vector<IntVec> frame{w[0]};
  for (auto& dvec : diffs) {
    for (auto& x : dvec) x /= k;
    frame.push_back(dvec);
  }
  if (abs64(determinant(frame)) != 1)
    throw PolytopeError("staircase: simplex facet is not a dilated unimodular simplex");
  std::vector<std::vector<IntVec>> out;
  const auto perms = permutations(m);
  std::vector<std::int64_t> c(m, 0);
  const std::vector<std::int64_t> hi(m, k);
  auto to_point = [&](const std::vector<std::int64_t>& z) {
    IntVec pt = w[0];
    for (std::size_t i = 0; i < m; ++i) {
      const auto a = z[i] - (i + 1 < m ? z[i + 1] : 0);
      for (std::size_t j = 0; j < pt.size(); ++j) pt[j] += a * diffs[i][j];
    }
    return pt;
  };
  auto in_region = [&](const std::vector<std::int64_t>& z) {
    if (z[0] > k || z[m - 1] < 0) return false;
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (z[i] < z[i + 1]) return false;
    return true;
  };
  do {
    for (const auto& perm : perms) {
      auto z = c;
      std::vector<IntVec> simplex{to_point(z)};
      bool inside = in_region(z);
      for (std::size_t j = 0; j < m && inside; ++j) {
        ++z[perm[j]];
        inside = in_region(z);
        simplex.push_back(to_point(z));
      }
      if (inside) out.push_back(std::move(simplex));
    }
  } while (advance(c, hi));
  return out;
}

// Axis-aligned lattice box facet, Freudenthal subdivision of each unit cell.
std::optional<std::vector<std::vector<IntVec>>> staircase_box(const std::vector<IntVec>& w, std::size_t m) {
  const std::size_t d = w.front().size();
  IntVec lo = w.front();
  IntVec hi = w.front();
  for (const auto& v : w) {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < d; ++i)
    if (lo[i] != hi[i]) free.push_back(i);
  if (free.size() != m || w.size() != (std::size_t{1} << m)) return std::nullopt;
  for (const auto& v : w)
    for (auto i : free)
      if (v[i] != lo[i] && v[i] != hi[i]) return std::nullopt;
  std::vector<std::int64_t> extent;
  for (auto i : free) extent.push_back(hi[i] - lo[i]);
  std::vector<std::vector<IntVec>> out;
  const auto perms = permutations(m);
  std::vector<std::int64_t> c(m, 0);
  do {
    IntVec base = lo;
    for (std::size_t j = 0; j < m; ++j) base[free[j]] += c[j];
    for (const auto& perm : perms) {
      IntVec x = base;
      std::vector<IntVec> simplex{x};
      for (auto j : perm) {
        ++x[free[j]];
        simplex.push_back(x);
      }
      out.push_back(std::move(simplex));
    }
  } while (advance(c, extent));
  return out;
}

IntVec drop(const IntVec& v, std::size_t j) {
  IntVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != j) out.push_back(v[i]);
  return out;
}

// Sequential pulling refinement of one facet. Cells are global point-index
// sets listing their vertices.
std::vector<IndexSet> pull_facet(const std::vector<IntVec>& all_points, const Facet& facet,
                                 const IndexSet& facet_vertices, const IndexSet& facet_points,
                                 const std::vector<std::size_t>& rank) {
  std::size_t drop_at = 0;
  while (facet.normal[drop_at] == 0) ++drop_at;
  std::map<std::size_t, IntVec> proj;
  for (auto i : facet_points) proj[i] = drop(all_points[i], drop_at);

  auto order = facet_points;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });

  std::vector<IndexSet> cells{facet_vertices};
  for (auto q : order) {
    std::vector<IndexSet> next;
    for (const auto& cell : cells) {
      std::vector<IntVec> coords;
      for (auto i : cell) coords.push_back(proj[i]);
      if (coords.size() == 1) {
        next.push_back(cell);
        continue;
      }
      const auto facets = brute_force_facets(coords);
      const auto& x = proj[q];
      bool inside = true;
      for (const auto& f : facets) inside = inside && dot(f.normal, x) <= f.rhs;
      if (!inside) {
        next.push_back(cell);
        continue;
      }
      for (const auto& f : facets) {
        if (dot(f.normal, x) == f.rhs) continue;
        IndexSet pyramid;
        for (auto li : f.vertices) pyramid.push_back(cell[li]);
        pyramid.push_back(q);
        std::sort(pyramid.begin(), pyramid.end());
        next.push_back(std::move(pyramid));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace

std::size_t CentralTriangulation::index_of(const IntVec& p) const {
  auto i = find(p);
  if (!i) throw ContractViolation("point is not a vertex of the triangulation");
  return *i;
}

std::optional<std::size_t> CentralTriangulation::find(const IntVec& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - points.begin());
}

std::vector<IntVec> CentralTriangulation::coordinates(const IndexSet& simplex) const {
  std::vector<IntVec> out;
  for (auto i : simplex) out.push_back(points.at(i));
  return out;
}

std::vector<IndexSet> CentralTriangulation::faces(int k) const {
  std::set<IndexSet> out;
  if (k < 0) return {IndexSet{}};
  for (const auto& s : boundary_simplices) {
    if (static_cast<std::size_t>(k) + 1 > s.size()) continue;
    for (const auto& sub : gf2::subsets(s.size(), static_cast<std::size_t>(k) + 1)) {
      IndexSet f;
      for (auto i : sub) f.push_back(s[i]);
      out.insert(std::move(f));
    }
  }
  return {out.begin(), out.end()};
}

ValidationReport validate(const LatticePolytope& p, const CentralTriangulation& t) {
  ValidationReport rep;
  const std::size_t d = p.dim();
  rep.expected_volume = p.normalized_volume();
  auto issue = [&](const std::string& kind, const std::string& msg, IndexSet w = {}) {
    rep.issues.push_back({kind, msg, std::move(w)});
  };

  bool shape_ok = true;
  for (const auto& s : t.boundary_simplices) {
    const bool sized = s.size() == d;
    const bool in_range = std::all_of(s.begin(), s.end(), [&](std::size_t i) { return i < t.points.size(); });
    const bool sorted = std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end();
    if (!sized || !in_range || !sorted) {
      shape_ok = false;
      issue("shape", "simplex " + describe(s) + " is malformed", s);
    }
  }
  for (const auto& pt : t.points) {
    if (pt.size() != d) {
      shape_ok = false;
      issue("shape", "point of wrong dimension");
      break;
    }
  }
  if (!shape_ok) {
    rep.primitive = rep.central = rep.covering = rep.complete = false;
    return rep;
  }

  const auto boundary = p.boundary_points();
  if (t.points != boundary) {
    rep.complete = false;
    issue("completeness", "vertex list differs from the boundary lattice points of the polytope (" +
                              std::to_string(t.points.size()) + " vs " + std::to_string(boundary.size()) + ")");
  }
  std::vector<bool> used(t.points.size(), false);
  for (const auto& s : t.boundary_simplices)
    for (auto i : s) used[i] = true;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) {
      rep.complete = false;
      issue("completeness", "point " + std::to_string(i) + " is not a vertex of any simplex", {i});
    }
  }

  for (const auto& s : t.boundary_simplices) {
    const auto coords = t.coordinates(s);
    const auto det = simplex_det(coords);
    rep.volume_sum += abs64(det);
    if (abs64(det) != 1) {
      rep.primitive = false;
      issue("primitivity", "simplex " + describe(s) + " has |det| = " + std::to_string(abs64(det)), s);
    }
    const bool on_facet = std::any_of(p.facets().begin(), p.facets().end(), [&](const Facet& f) {
      return std::all_of(coords.begin(), coords.end(), [&](const IntVec& x) { return dot(f.normal, x) == f.rhs; });
    });
    if (!on_facet) {
      rep.central = false;
      issue("centrality", "simplex " + describe(s) + " does not lie in a facet", s);
    }
  }

  if (rep.volume_sum != rep.expected_volume) {
    rep.covering = false;
    issue("covering", "volume sum " + std::to_string(rep.volume_sum) + " differs from normalized volume " +
                          std::to_string(rep.expected_volume));
  }
  std::set<IndexSet> distinct(t.boundary_simplices.begin(), t.boundary_simplices.end());
  if (distinct.size() != t.boundary_simplices.size()) {
    rep.covering = false;
    issue("covering", "duplicate simplices");
  }
  // Cones over boundary simplices must meet ridge-to-ridge from opposite sides.
  std::map<IndexSet, std::vector<std::pair<std::size_t, std::size_t>>> ridges;
  for (std::size_t si = 0; si < t.boundary_simplices.size(); ++si) {
    const auto& s = t.boundary_simplices[si];
    for (std::size_t drop_i = 0; drop_i < s.size(); ++drop_i) {
      IndexSet r;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != drop_i) r.push_back(s[j]);
      ridges[r].push_back({si, s[drop_i]});
    }
  }
  for (const auto& [r, owners] : ridges) {
    if (owners.size() != 2) {
      rep.covering = false;
      issue("covering", "ridge " + describe(r) + " lies in " + std::to_string(owners.size()) + " simplices",
            t.boundary_simplices[owners.front().first]);
      continue;
    }
    const auto normal = hyperplane_normal(t.coordinates(r), d);
    const int a = sign(dot(normal, t.points[owners[0].second]));
    const int b = sign(dot(normal, t.points[owners[1].second]));
    if (a * b >= 0) {
      rep.covering = false;
      issue("covering", "simplices " + describe(t.boundary_simplices[owners[0].first]) + " and " +
                            describe(t.boundary_simplices[owners[1].first]) + " overlap",
            t.boundary_simplices[owners[0].first]);
    }
  }
  return rep;
}

Strategy parse_strategy(const std::string& name) {
  if (name == "staircase") return Strategy::Staircase;
  if (name == "pulling") return Strategy::Pulling;
  throw ContractViolation("unknown triangulation strategy '" + name + "'");
}

std::string to_string(Strategy s) { return s == Strategy::Staircase ? "staircase" : "pulling"; }

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 gen(seed);
  for (std::size_t i = n; i > 1; --i) {
    // Rejection sampling keeps the draw unbiased and independent of the
    // standard library's distribution implementation.
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = gen();
    while (x >= limit) x = gen();
    std::swap(perm[i - 1], perm[x % bound]);
  }
  return perm;
}

CentralTriangulation generate(const LatticePolytope& p, Strategy strategy, std::uint64_t seed) {
  if (!p.is_reflexive()) throw NotReflexive("triangulation requires a reflexive polytope");
  const std::size_t d = p.dim();
  CentralTriangulation t;
  t.points = p.boundary_points();
  std::set<IndexSet> simplices;

  if (strategy == Strategy::Staircase) {
    for (const auto& f : p.facets()) {
      std::vector<IntVec> w;
      for (auto v : f.vertices) w.push_back(p.vertices()[v]);
      std::vector<std::vector<IntVec>> pieces;
      if (w.size() == d) {
        pieces = staircase_simplex(w);
      } else if (auto box = staircase_box(w, d - 1)) {
        pieces = std::move(*box);
      } else {
        throw PolytopeError("staircase: facet is neither a dilated simplex nor a lattice box");
      }
      for (const auto& piece : pieces) {
        IndexSet s;
        for (const auto& x : piece) s.push_back(t.index_of(x));
        std::sort(s.begin(), s.end());
        simplices.insert(std::move(s));
      }
    }
  } else {
    const auto order = seeded_permutation(t.points.size(), seed);
    std::vector<std::size_t> rank(t.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    for (const auto& f : p.facets()) {
      IndexSet verts;
      IndexSet pts;
      for (auto v : f.vertices) verts.push_back(t.index_of(p.vertices()[v]));
      for (std::size_t i = 0; i < t.points.size(); ++i)
        if (dot(f.normal, t.points[i]) == f.rhs) pts.push_back(i);
      std::sort(verts.begin(), verts.end());
      for (auto& cell : pull_facet(t.points, f, verts, pts, rank)) {
        if (cell.size() != d) {
          throw PrimitivityFailed("pulling produced a non-simplicial cell", t.coordinates(cell));
        }
        simplices.insert(std::move(cell));
      }
    }
  }
  t.boundary_simplices.assign(simplices.begin(), simplices.end());
  for (const auto& s : t.boundary_simplices) {
    const auto coords = t.coordinates(s);
    if (abs64(simplex_det(coords)) != 1)
      throw PrimitivityFailed(to_string(strategy) + " produced a non-unimodular simplex", coords);
  }
  return t;
}

Adjacency::Adjacency(const CentralTriangulation& t) : nbrs_(t.points.size()), star_(t.points.size()) {
  std::vector<std::set<std::size_t>> sets(t.points.size());
  for (std::size_t si = 0; si < t.boundary_simplices.size(); ++si) {
    const auto& s = t.boundary_simplices[si];
    for (auto a : s) {
      star_[a].push_back(si);
      for (auto b : s)
        if (a != b) sets[a].insert(b);
    }
  }
  for (std::size_t r = 0; r < sets.size(); ++r) {
    nbrs_[r].assign(sets[r].begin(), sets[r].end());
    const auto pr = parity(t.points[r]);
    for (auto v : nbrs_[r])
      if (parity(t.points[v]) == pr)
        throw InternalError("adjacent points " + std::to_string(r) + " and " + std::to_string(v) +
                            " share a parity; the triangulation is not primitive");
  }
}

bool Adjacency::adjacent(std::size_t r, std::size_t v) const {
  if (r == v) return true;
  const auto& n = nbrs_.at(r);
  return std::binary_search(n.begin(), n.end(), v);
}

}  // namespace tropbetti
