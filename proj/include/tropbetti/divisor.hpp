#pragma once

// Mod-2 toric divisors on the boundary lattice points of a primitive central
// triangulation: principal divisors, the local Case 1 / Case 2 solvers, the
// vertex and edge configuration classifiers, the global construction for
// smooth 4-dimensional polytopes, and the cup-product model of the cube.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropbetti/gf2.hpp"
#include "tropbetti/lattice.hpp"
#include "tropbetti/triangulation.hpp"

namespace tropbetti {

class HypothesisFailed : public std::runtime_error {
 public:
  HypothesisFailed(const std::string& what, std::vector<IntVec> witness)
      : std::runtime_error(what), witness(std::move(witness)) {}
  std::vector<IntVec> witness;
};

/// The set {v : eps_v = 1} of point indices of the triangulation.
struct DivisorF2 {
  IndexSet support;  // sorted

  static DivisorF2 from(IndexSet s);
  bool empty() const { return support.empty(); }
  bool contains(std::size_t v) const;
  friend DivisorF2 operator+(const DivisorF2& a, const DivisorF2& b);
  friend bool operator==(const DivisorF2&, const DivisorF2&) = default;
};

enum class CaseStatus { Case1, Case2, Fail };
std::string to_string(CaseStatus s);

struct LocalVerdict {
  std::size_t point = 0;
  CaseStatus status = CaseStatus::Fail;
  std::optional<gf2::Vector> witness;
  std::size_t constraint_count = 0;
  IndexSet local_support;  // the set L_r
};

struct AdmissibilityReport {
  bool admissible = false;
  bool strict_adjacency = false;
  /// Whether the surjectivity hypothesis (n >= 3) holds; otherwise passing
  /// certifies the condition only in the ambient toric variety.
  bool ambient_only = false;
  std::vector<LocalVerdict> verdicts;  // one per skeleton point, in index order
  std::vector<std::string> notes;

  std::size_t failures() const;
};

enum class Restriction { Zero, NonzeroCertified, Unknown };
std::string to_string(Restriction r);

struct RestrictionReport {
  Restriction verdict = Restriction::Unknown;
  std::optional<gf2::Vector> witness;  // m with L + principal(m) invisible
  bool surjectivity_hypothesis = false;
  std::optional<std::int64_t> kernel_dim;          // ambient Pic minus mirror h^{1,1}
  std::int64_t invisible_rank = 0;                 // facet-interior divisors mod principal
  std::string reason;
};

enum class ConfigKind {
  SimpleVertex,
  PointedVertex,
  NonAdmissibleVertex,
  SimpleEdge,
  EmptyEdge,
  NonAdmissibleEdge,
  Other
};
std::string to_string(ConfigKind k);

struct ConfigClass {
  ConfigKind kind = ConfigKind::Other;
  /// For PointedVertex: index (into vertex_edges) of the distinguished edge.
  std::optional<std::size_t> distinguished_edge;
  std::string detail;
};

/// Local data around a vertex r of a smooth polytope: the edges E_j through
/// r, the points v_j of E_j next to r, and the facet normals n_j with n_j
/// not tight on E_j.
struct VertexFrame {
  std::size_t vertex = 0;              // polytope vertex index
  std::vector<Face> edges;             // E_j
  std::vector<IntVec> next_points;     // v_j
  std::vector<IntVec> opposite_normals;  // n_j
};

struct HypothesisAudit {
  bool smooth = false;
  bool four_dimensional = false;
  bool even_edges = false;
  std::optional<Face> odd_edge;           // witness against even_edges
  bool three_parities = false;
  std::optional<Face> bad_face;           // witness against three_parities
  std::size_t bad_face_parities = 0;
};

/// Checks the two alternative hypotheses of the global construction: every
/// edge has even length, or every 2-face boundary shows exactly 3 parities.
HypothesisAudit audit_hypotheses(const LatticePolytope& p);
/// The audit, or HypothesisFailed (with a witness face) unless p is smooth,
/// 4-dimensional and satisfies one of the two hypotheses.
HypothesisAudit require_construction_hypotheses(const LatticePolytope& p);

struct GlobalConstruction {
  DivisorF2 divisor;
  std::string bullet;  // "even-edges" or "three-parities"
  HypothesisAudit audit;
  std::map<IndexSet, gf2::Vector> face_parity;  // chosen parity per 2-face (by vertex set)
};

class DivisorLab {
 public:
  DivisorLab(const LatticePolytope& delta, const CentralTriangulation& t, bool strict_adjacency = false);

  const LatticePolytope& polytope() const { return *delta_; }
  const CentralTriangulation& triangulation() const { return *t_; }
  const Adjacency& adjacency() const { return adj_; }
  std::size_t n() const { return delta_->dim() - 1; }
  bool strict() const { return strict_; }

  /// Points of Sk_{n-1}: boundary points not interior to a facet.
  const IndexSet& skeleton() const { return skeleton_; }
  bool in_skeleton(std::size_t v) const { return is_skeleton_.at(v); }

  DivisorF2 principal(const gf2::Vector& m) const;
  DivisorF2 effective_support(const DivisorF2& l) const;

  /// Zero when some m makes L + principal(m) invisible. NonzeroCertified
  /// needs the surjectivity hypothesis and a kernel dimension match against
  /// `mirror_h11` (dims[1][1] of the mirror hypersurface).
  RestrictionReport restriction(const DivisorF2& l, std::optional<std::int64_t> mirror_h11) const;

  /// Whether r and w lie on a common face of dimension below n (at least two
  /// common tight facets). Edges of T through a facet interior fail this.
  bool visible(std::size_t r, std::size_t w) const;
  /// Adjacency used by the local cases: every edge of T in strict mode,
  /// visible edges otherwise.
  bool relevant_neighbor(std::size_t r, std::size_t w) const;
  /// L_r: support points relevant to r (r included when r is in L).
  IndexSet adjacent_L(const DivisorF2& l, std::size_t r) const;
  LocalVerdict check_case1(std::size_t r, const DivisorF2& l) const;
  LocalVerdict check_case2(std::size_t r, const DivisorF2& l) const;
  /// Evaluates every bullet of the given case for a proposed m.
  bool satisfies(std::size_t r, const DivisorF2& l, CaseStatus which, const gf2::Vector& m) const;
  AdmissibilityReport is_admissible(const DivisorF2& l, unsigned jobs = 1) const;

  VertexFrame vertex_frame(std::size_t polytope_vertex) const;
  /// Chosen parity of L on a 2-face, when L meets it in exactly one parity
  /// class (or misses it and exactly one parity of [F] has no points).
  std::optional<gf2::Vector> face_parity(const Face& f, const DivisorF2& l) const;
  ConfigClass classify_vertex(std::size_t polytope_vertex, const DivisorF2& l) const;
  ConfigClass classify_edge(const Face& edge, const DivisorF2& l) const;

  /// L with L cap F = points of F of parity p_F, for the given 2-faces.
  DivisorF2 from_face_parities(const std::vector<std::pair<Face, gf2::Vector>>& choices) const;

  HypothesisAudit audit() const { return audit_hypotheses(*delta_); }
  /// Throws HypothesisFailed when neither hypothesis holds or the per-face
  /// selection is inconsistent.
  GlobalConstruction construct_global(std::size_t v0) const;

 private:
  const LatticePolytope* delta_;
  const CentralTriangulation* t_;
  bool strict_;
  Adjacency adj_;
  IndexSet skeleton_;
  std::vector<bool> is_skeleton_;
  std::vector<gf2::Vector> parity_;
  std::vector<std::vector<std::size_t>> tight_;  // facet indices with <a, x> = 1
};

/// Degree-two classes of the cube model F_2[x_1..x_{n+1}]/(x_i^2), indexed
/// by 2-subsets in lexicographic order.
gf2::Vector cube_product(std::size_t n, const gf2::Vector& a, const gf2::Vector& b);
gf2::Vector cube_square(std::size_t n, const gf2::Vector& beta);
/// Matrix of beta -> beta^2 + beta * D.
gf2::Matrix cube_cup_matrix(std::size_t n, const gf2::Vector& d);
std::vector<gf2::Vector> cube_cup_kernel(std::size_t n, const gf2::Vector& d);

}  // namespace tropbetti
