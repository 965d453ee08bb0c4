#pragma once

// Primitive central triangulations of reflexive polytopes. Only the boundary
// simplices are stored; the full triangulation cones each one at the origin.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropbetti/lattice.hpp"

namespace tropbetti {

class PrimitivityFailed : public std::runtime_error {
 public:
  PrimitivityFailed(const std::string& what, std::vector<IntVec> witness)
      : std::runtime_error(what), witness(std::move(witness)) {}
  std::vector<IntVec> witness;
};

struct CentralTriangulation {
  std::vector<IntVec> points;               // sorted lexicographically
  std::vector<IndexSet> boundary_simplices;  // each sorted; list sorted

  std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
  /// Index of a point; throws ContractViolation if absent.
  std::size_t index_of(const IntVec& p) const;
  std::optional<std::size_t> find(const IntVec& p) const;
  std::vector<IntVec> coordinates(const IndexSet& simplex) const;

  /// All faces of boundary simplices of the given dimension (k+1 vertices),
  /// sorted. k = -1 yields the single empty face.
  std::vector<IndexSet> faces(int k) const;

  friend bool operator==(const CentralTriangulation&, const CentralTriangulation&) = default;
};

struct ValidationIssue {
  std::string kind;  // "shape", "primitivity", "centrality", "covering", "completeness"
  std::string message;
  IndexSet witness;
};

struct ValidationReport {
  bool primitive = true;
  bool central = true;
  bool covering = true;
  bool complete = true;
  std::int64_t volume_sum = 0;
  std::int64_t expected_volume = 0;
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
};

ValidationReport validate(const LatticePolytope& p, const CentralTriangulation& t);

enum class Strategy { Staircase, Pulling };
Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

/// Staircase: closed-form unimodular triangulations of facets that are
/// dilated unimodular simplices or lattice boxes. Pulling: per-facet pulling
/// refinement at all lattice points in a seed-shuffled global order.
/// Throws PrimitivityFailed if the result has a non-unimodular simplex, and
/// PolytopeError if staircase meets an unsupported facet.
CentralTriangulation generate(const LatticePolytope& p, Strategy strategy, std::uint64_t seed = 0);

/// Deterministic Fisher-Yates shuffle of {0..n-1} driven by mt19937_64.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

class Adjacency {
 public:
  explicit Adjacency(const CentralTriangulation& t);

  /// Distinct points sharing an edge with r, sorted.
  const IndexSet& neighbors(std::size_t r) const { return nbrs_.at(r); }
  /// r and v lie on a common edge; every point is adjacent to itself.
  bool adjacent(std::size_t r, std::size_t v) const;
  /// Boundary simplices containing r.
  const IndexSet& star(std::size_t r) const { return star_.at(r); }
  std::size_t size() const { return nbrs_.size(); }

 private:
  std::vector<IndexSet> nbrs_;
  std::vector<IndexSet> star_;
};

}  // namespace tropbetti
