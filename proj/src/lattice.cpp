#include "tropbetti/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace tropbetti {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw PolytopeError("integer overflow in exact arithmetic");
  return static_cast<std::int64_t>(v);
}

bool intersects_sorted(const IndexSet& small, const IndexSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

IntVec hyperplane_normal(const std::vector<IntVec>& dirs, std::size_t d) {
  IntVec n(d, 0);
  std::vector<IntVec> minor(dirs.size(), IntVec(d - 1));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t r = 0; r < dirs.size(); ++r) {
      std::size_t c2 = 0;
      for (std::size_t c = 0; c < d; ++c)
        if (c != j) minor[r][c2++] = dirs[r][c];
    }
    const auto m = d == 1 ? 1 : determinant(minor);
    n[j] = (j % 2 == 0) ? m : -m;
  }
  return n;
}

std::int64_t dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw ContractViolation("dot: dimension mismatch");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IntVec operator-(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IntVec operator+(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::int64_t determinant(const std::vector<IntVec>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return 1;
  std::vector<std::vector<i128>> m(n, std::vector<i128>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ContractViolation("determinant: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = rows[i][j];
  }
  // Bareiss fraction-free elimination.
  i128 sign = 1;
  i128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    }
    prev = m[k][k];
  }
  return narrow(sign * m[n - 1][n - 1]);
}

std::size_t rational_rank(std::vector<IntVec> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<i128>> m(rows.size(), std::vector<i128>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = rows[i][j];
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const i128 a = m[r][c];
      const i128 b = m[i][c];
      i128 g = 0;
      for (std::size_t j = c; j < cols; ++j) {
        m[i][j] = m[i][j] * a - m[r][j] * b;
        g = gcd128(g, m[i][j]);
      }
      if (g > 1)
        for (std::size_t j = c; j < cols; ++j) m[i][j] /= g;
    }
    ++r;
  }
  return r;
}

int affine_dimension(const std::vector<IntVec>& points) {
  if (points.empty()) return -1;
  std::vector<IntVec> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(points[i] - points[0]);
  return static_cast<int>(rational_rank(std::move(diffs)));
}

std::int64_t gcd_of(const IntVec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

gf2::Vector parity(const IntVec& v) {
  gf2::Vector p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] & 1) p.set(i);
  return p;
}

bool ModTwoFlat::contains(const gf2::Vector& p) const {
  const auto rel = p ^ base;
  if (rel.is_zero()) return true;
  auto with = directions;
  with.push_back(rel);
  return gf2::rank(with) == directions.size();
}

std::vector<gf2::Vector> ModTwoFlat::elements() const {
  std::vector<gf2::Vector> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << directions.size()); ++mask) {
    auto v = base;
    for (std::size_t i = 0; i < directions.size(); ++i)
      if (mask >> i & 1U) v ^= directions[i];
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Facet> brute_force_facets(const std::vector<IntVec>& points) {
  if (points.empty()) throw PolytopeError("no points");
  const std::size_t d = points.front().size();
  if (affine_dimension(points) != static_cast<int>(d)) throw PolytopeError("point set is not full-dimensional");
  std::map<IntVec, Facet> found;
  std::vector<IntVec> dirs(d - 1);
  for (const auto& s : gf2::subsets(points.size(), d)) {
    for (std::size_t i = 1; i < d; ++i) dirs[i - 1] = points[s[i]] - points[s[0]];
    IntVec n = hyperplane_normal(dirs, d);
    const auto g = gcd_of(n);
    if (g == 0) continue;
    for (auto& x : n) x /= g;
    const auto c = dot(n, points[s[0]]);
    bool below = false;
    bool above = false;
    for (const auto& p : points) {
      const auto v = dot(n, p);
      below |= v < c;
      above |= v > c;
      if (below && above) break;
    }
    if (below && above) continue;
    std::int64_t rhs = c;
    if (above) {
      for (auto& x : n) x = -x;
      rhs = -c;
    }
    if (found.count(n)) continue;
    Facet f{n, rhs, {}};
    for (std::size_t i = 0; i < points.size(); ++i)
      if (dot(n, points[i]) == rhs) f.vertices.push_back(i);
    found.emplace(n, std::move(f));
  }
  std::vector<Facet> out;
  for (auto& [k, f] : found) out.push_back(std::move(f));
  return out;
}

// ---------------------------------------------------------------- LatticePolytope

LatticePolytope::LatticePolytope(std::vector<IntVec> points) {
  if (points.empty()) throw PolytopeError("polytope needs at least one point");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  dim_ = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim_) throw PolytopeError("points have inconsistent dimensions");
  auto raw = brute_force_facets(points);
  // A point is a vertex iff no other point lies on all facets through it.
  std::vector<IntVec> verts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    IndexSet through;
    for (std::size_t f = 0; f < raw.size(); ++f)
      if (std::binary_search(raw[f].vertices.begin(), raw[f].vertices.end(), i)) through.push_back(f);
    bool alone = true;
    for (std::size_t j = 0; j < points.size() && alone; ++j) {
      if (j == i) continue;
      bool on_all = true;
      for (auto f : through)
        if (!std::binary_search(raw[f].vertices.begin(), raw[f].vertices.end(), j)) on_all = false;
      if (on_all) alone = false;
    }
    if (alone) verts.push_back(points[i]);
  }
  vertices_ = std::move(verts);
  for (auto& f : raw) {
    f.vertices.clear();
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (dot(f.normal, vertices_[i]) == f.rhs) f.vertices.push_back(i);
  }
  facets_ = std::move(raw);
  build_faces();
  enumerate_points();
}

void LatticePolytope::build_faces() {
  const int d = static_cast<int>(dim_);
  faces_.assign(dim_ + 1, {});
  auto facets_containing = [&](const IndexSet& verts) {
    IndexSet out;
    for (std::size_t f = 0; f < facets_.size(); ++f)
      if (intersects_sorted(verts, facets_[f].vertices)) out.push_back(f);
    return out;
  };
  auto coords = [&](const IndexSet& verts) {
    std::vector<IntVec> pts;
    for (auto v : verts) pts.push_back(vertices_[v]);
    return pts;
  };
  IndexSet all(vertices_.size());
  std::iota(all.begin(), all.end(), 0);
  faces_[dim_].push_back(Face{d, all, {}});
  std::set<IndexSet> seen;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (seen.insert(facets_[f].vertices).second)
      faces_[dim_ - 1].push_back(Face{d - 1, facets_[f].vertices, facets_containing(facets_[f].vertices)});
  }
  for (int k = d - 1; k >= 1; --k) {
    for (const auto& face : faces_[static_cast<std::size_t>(k)]) {
      for (std::size_t f = 0; f < facets_.size(); ++f) {
        if (std::binary_search(face.facets.begin(), face.facets.end(), f)) continue;
        auto sub = intersect(face.vertices, facets_[f].vertices);
        if (sub.empty() || seen.count(sub)) continue;
        if (affine_dimension(coords(sub)) != k - 1) continue;
        seen.insert(sub);
        faces_[static_cast<std::size_t>(k - 1)].push_back(Face{k - 1, sub, facets_containing(sub)});
      }
    }
  }
  for (auto& level : faces_) std::sort(level.begin(), level.end());
}

void LatticePolytope::enumerate_points() {
  IntVec lo = vertices_.front();
  IntVec hi = vertices_.front();
  for (const auto& v : vertices_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  IntVec x = lo;
  while (true) {
    if (contains(x)) points_.push_back(x);
    std::size_t i = dim_;
    while (i > 0) {
      --i;
      if (x[i] < hi[i]) {
        ++x[i];
        for (std::size_t j = i + 1; j < dim_; ++j) x[j] = lo[j];
        break;
      }
      if (i == 0) return;
    }
    if (dim_ == 0) return;
  }
}

bool LatticePolytope::contains(const IntVec& x) const {
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, x) <= f.rhs; });
}

bool LatticePolytope::is_interior(const IntVec& x) const {
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, x) < f.rhs; });
}

bool LatticePolytope::is_reflexive() const {
  return std::all_of(facets_.begin(), facets_.end(), [](const Facet& f) { return f.rhs == 1; });
}

bool LatticePolytope::is_smooth() const {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    std::vector<IntVec> normals;
    for (const auto& f : facets_)
      if (std::binary_search(f.vertices.begin(), f.vertices.end(), v)) normals.push_back(f.normal);
    if (normals.size() != dim_) return false;
    const auto det = determinant(normals);
    if (det != 1 && det != -1) return false;
  }
  return true;
}

LatticePolytope LatticePolytope::dual() const {
  if (!is_reflexive()) throw NotReflexive("dual: polytope is not reflexive");
  std::vector<IntVec> normals;
  for (const auto& f : facets_) normals.push_back(f.normal);
  return LatticePolytope(std::move(normals));
}

LatticePolytope LatticePolytope::translated(const IntVec& offset) const {
  std::vector<IntVec> moved;
  for (const auto& v : vertices_) moved.push_back(v + offset);
  return LatticePolytope(std::move(moved));
}

Face LatticePolytope::face_of_facets(const IndexSet& facet_ids) const {
  if (facet_ids.empty()) return faces_[dim_].front();
  IndexSet verts = facets_.at(facet_ids.front()).vertices;
  for (auto f : facet_ids) verts = intersect(verts, facets_.at(f).vertices);
  for (const auto& level : faces_) {
    auto it = std::lower_bound(level.begin(), level.end(), Face{-1, verts, {}});
    if (it != level.end() && it->vertices == verts) return *it;
  }
  throw PolytopeError("face_of_facets: facets do not meet in a face");
}

Face LatticePolytope::carrier(const IntVec& x) const {
  if (!contains(x)) throw ContractViolation("carrier: point outside the polytope");
  IndexSet tight;
  for (std::size_t f = 0; f < facets_.size(); ++f)
    if (dot(facets_[f].normal, x) == facets_[f].rhs) tight.push_back(f);
  return face_of_facets(tight);
}

std::vector<IntVec> LatticePolytope::lattice_points(const Face& f) const {
  std::vector<IntVec> out;
  for (const auto& p : points_) {
    bool on = true;
    for (auto id : f.facets) on = on && dot(facets_[id].normal, p) == facets_[id].rhs;
    if (on) out.push_back(p);
  }
  return out;
}

std::vector<IntVec> LatticePolytope::boundary_points() const {
  std::vector<IntVec> out;
  for (const auto& p : points_)
    if (!is_interior(p)) out.push_back(p);
  return out;
}

std::vector<IntVec> LatticePolytope::interior_points() const {
  std::vector<IntVec> out;
  for (const auto& p : points_)
    if (is_interior(p)) out.push_back(p);
  return out;
}

std::vector<IntVec> LatticePolytope::skeleton_points(int k) const {
  std::vector<IntVec> out;
  for (const auto& p : points_) {
    if (is_interior(p)) continue;
    if (carrier(p).dim <= k) out.push_back(p);
  }
  return out;
}

std::int64_t LatticePolytope::edge_length(const Face& edge) const {
  if (edge.dim != 1 || edge.vertices.size() != 2) throw ContractViolation("edge_length: face is not an edge");
  return gcd_of(vertices_[edge.vertices[1]] - vertices_[edge.vertices[0]]);
}

std::set<gf2::Vector> LatticePolytope::boundary_parities(const Face& face) const {
  if (face.dim != 2) throw ContractViolation("boundary_parities: face is not 2-dimensional");
  std::set<gf2::Vector> out;
  for (const auto& p : lattice_points(face))
    if (carrier(p).dim < 2) out.insert(parity(p));
  return out;
}

ModTwoFlat LatticePolytope::parity_flat(const Face& face) const {
  const auto pts = lattice_points(face);
  ModTwoFlat flat{parity(pts.front()), {}};
  for (const auto& p : pts) {
    auto dir = parity(p) ^ flat.base;
    if (dir.is_zero()) continue;
    auto trial = flat.directions;
    trial.push_back(dir);
    if (gf2::independent(trial)) flat.directions = std::move(trial);
  }
  return flat;
}

std::int64_t LatticePolytope::normalized_volume() const {
  // Vertex-pulling decomposition: cone the first vertex of each face over
  // the faces of codimension one not containing it.
  std::map<IndexSet, std::vector<IndexSet>> memo;
  std::function<const std::vector<IndexSet>&(const Face&)> pull = [&](const Face& g) -> const std::vector<IndexSet>& {
    auto it = memo.find(g.vertices);
    if (it != memo.end()) return it->second;
    std::vector<IndexSet> out;
    if (g.dim == 0) {
      out.push_back(g.vertices);
    } else {
      const auto apex = g.vertices.front();
      for (const auto& h : faces_[static_cast<std::size_t>(g.dim - 1)]) {
        if (!intersects_sorted(h.vertices, g.vertices)) continue;
        if (std::binary_search(h.vertices.begin(), h.vertices.end(), apex)) continue;
        for (auto s : pull(h)) {
          s.push_back(apex);
          out.push_back(std::move(s));
        }
      }
    }
    return memo.emplace(g.vertices, std::move(out)).first->second;
  };
  std::int64_t vol = 0;
  for (const auto& s : pull(faces_[dim_].front())) {
    std::vector<IntVec> rows;
    for (std::size_t i = 1; i < s.size(); ++i) rows.push_back(vertices_[s[i]] - vertices_[s[0]]);
    const auto det = determinant(rows);
    vol += det < 0 ? -det : det;
  }
  return vol;
}

// ---------------------------------------------------------------- builtins

namespace polytopes {

LatticePolytope cube(std::size_t d) {
  std::vector<IntVec> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    IntVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (mask >> i & 1U) ? 1 : -1;
    pts.push_back(v);
  }
  return LatticePolytope(std::move(pts));
}

LatticePolytope cross_polytope(std::size_t d) {
  std::vector<IntVec> pts;
  for (std::size_t i = 0; i < d; ++i) {
    IntVec v(d, 0);
    v[i] = 1;
    pts.push_back(v);
    v[i] = -1;
    pts.push_back(v);
  }
  return LatticePolytope(std::move(pts));
}

LatticePolytope reflexive_simplex(std::size_t d) {
  std::vector<IntVec> pts;
  pts.emplace_back(d, -1);
  for (std::size_t i = 0; i < d; ++i) {
    IntVec v(d, -1);
    v[i] = static_cast<std::int64_t>(d);
    pts.push_back(v);
  }
  return LatticePolytope(std::move(pts));
}

LatticePolytope product(const LatticePolytope& a, const LatticePolytope& b) {
  std::vector<IntVec> pts;
  for (const auto& u : a.vertices()) {
    for (const auto& v : b.vertices()) {
      IntVec w = u;
      w.insert(w.end(), v.begin(), v.end());
      pts.push_back(std::move(w));
    }
  }
  return LatticePolytope(std::move(pts));
}

LatticePolytope triangle_product() { return product(reflexive_simplex(2), reflexive_simplex(2)); }

LatticePolytope builtin(const std::string& name) {
  auto arg = [&](const std::string& prefix) -> std::size_t {
    return static_cast<std::size_t>(std::stoul(name.substr(prefix.size())));
  };
  if (name == "quintic") return reflexive_simplex(4);
  if (name == "elliptic") return reflexive_simplex(2);
  if (name == "k3-cube") return cube(3);
  if (name == "triangle-product") return triangle_product();
  if (name.rfind("cube:", 0) == 0) return cube(arg("cube:"));
  if (name.rfind("cross:", 0) == 0) return cross_polytope(arg("cross:"));
  if (name.rfind("simplex:", 0) == 0) return reflexive_simplex(arg("simplex:"));
  throw PolytopeError("unknown builtin polytope '" + name + "'");
}

}  // namespace polytopes

}  // namespace tropbetti
