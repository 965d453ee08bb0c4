#pragma once

// Lattice polytopes in a rank-d lattice: vertex and facet presentations,
// duality, face lattice, lattice points and mod-2 parities.

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropbetti/gf2.hpp"

namespace tropbetti {

using IntVec = std::vector<std::int64_t>;
using IndexSet = std::vector<std::size_t>;  // sorted ascending

class NotReflexive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PolytopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::int64_t dot(const IntVec& a, const IntVec& b);
IntVec operator-(const IntVec& a, const IntVec& b);
IntVec operator+(const IntVec& a, const IntVec& b);
/// Exact determinant of a square integer matrix given by rows.
std::int64_t determinant(const std::vector<IntVec>& rows);
/// Rank over the rationals.
std::size_t rational_rank(std::vector<IntVec> rows);
/// Affine dimension of a finite point set (-1 when empty).
int affine_dimension(const std::vector<IntVec>& points);
std::int64_t gcd_of(const IntVec& v);
/// Normal to the span of d-1 vectors in Q^d via signed maximal minors;
/// zero iff the vectors are dependent.
IntVec hyperplane_normal(const std::vector<IntVec>& dirs, std::size_t d);

/// Parity of a lattice vector: its reduction modulo 2.
gf2::Vector parity(const IntVec& v);

/// The mod-2 reduction of an affine lattice span: base + span(directions).
struct ModTwoFlat {
  gf2::Vector base;
  std::vector<gf2::Vector> directions;  // independent

  std::size_t dim() const { return directions.size(); }
  bool contains(const gf2::Vector& p) const;
  /// All 2^dim elements, sorted.
  std::vector<gf2::Vector> elements() const;
};

struct Facet {
  IntVec normal;        // primitive; <normal, x> <= rhs on the polytope
  std::int64_t rhs = 0;
  IndexSet vertices;    // vertices on the facet
};

struct Face {
  int dim = -1;
  IndexSet vertices;  // canonical identity
  IndexSet facets;    // facets containing the face

  friend bool operator==(const Face& a, const Face& b) { return a.vertices == b.vertices; }
  friend bool operator<(const Face& a, const Face& b) { return a.vertices < b.vertices; }
};

class LatticePolytope {
 public:
  LatticePolytope() = default;
  /// Full-dimensional polytope with the given lattice vertices (redundant
  /// points are removed; vertices are stored in lexicographic order).
  explicit LatticePolytope(std::vector<IntVec> points);

  std::size_t dim() const { return dim_; }
  const std::vector<IntVec>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }

  bool contains(const IntVec& x) const;
  bool is_interior(const IntVec& x) const;

  bool is_reflexive() const;
  /// Every vertex lies on exactly dim facets whose normals form a lattice basis.
  bool is_smooth() const;

  /// Polar dual; throws NotReflexive unless reflexive.
  LatticePolytope dual() const;
  LatticePolytope translated(const IntVec& offset) const;

  /// faces[k] lists all k-dimensional faces, k = 0..dim (faces[dim] = P).
  const std::vector<std::vector<Face>>& face_lattice() const { return faces_; }
  const std::vector<Face>& faces(int k) const { return faces_.at(static_cast<std::size_t>(k)); }
  /// Smallest face containing x (x must lie in P).
  Face carrier(const IntVec& x) const;
  /// Face cut out by the given facets (their common vertices).
  Face face_of_facets(const IndexSet& facet_ids) const;

  /// All lattice points of P, lexicographically sorted.
  const std::vector<IntVec>& lattice_points() const { return points_; }
  std::vector<IntVec> lattice_points(const Face& f) const;
  std::vector<IntVec> boundary_points() const;
  std::vector<IntVec> interior_points() const;
  /// Boundary lattice points lying on some face of dimension <= k.
  std::vector<IntVec> skeleton_points(int k) const;

  /// Number of primitive segments of an edge.
  std::int64_t edge_length(const Face& edge) const;
  /// Distinct parities of lattice points on the relative boundary of a 2-face.
  std::set<gf2::Vector> boundary_parities(const Face& face) const;
  /// [F]: mod-2 reduction of the affine span of F.
  ModTwoFlat parity_flat(const Face& face) const;

  /// dim! * Euclidean volume, from a vertex-pulling decomposition.
  std::int64_t normalized_volume() const;

  friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  void build_faces();
  void enumerate_points();

  std::size_t dim_ = 0;
  std::vector<IntVec> vertices_;
  std::vector<Facet> facets_;
  std::vector<std::vector<Face>> faces_;
  std::vector<IntVec> points_;
};

/// Facets of a full-dimensional point configuration in Q^d, by brute force
/// over d-subsets. Returned normals are primitive and outward.
std::vector<Facet> brute_force_facets(const std::vector<IntVec>& points);

namespace polytopes {
/// [-1,1]^d.
LatticePolytope cube(std::size_t d);
/// conv(+-e_i).
LatticePolytope cross_polytope(std::size_t d);
/// {x : x_i >= -1, sum x_i <= 1} = (d+1) * unit simplex, translated.
LatticePolytope reflexive_simplex(std::size_t d);
/// (3P) x (3P) for P the unit triangle, each factor recentred.
LatticePolytope triangle_product();
LatticePolytope product(const LatticePolytope& a, const LatticePolytope& b);
/// Named builtins: "cube:<d>", "cross:<d>", "simplex:<d>", "quintic",
/// "elliptic", "k3-cube", "triangle-product".
LatticePolytope builtin(const std::string& name);
}  // namespace polytopes

}  // namespace tropbetti
