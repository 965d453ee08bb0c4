#pragma once

// The graded poset P^1(T', T) of a tropical hypersurface inside the toric
// variety of a mirror triangulation, the multitangent sheaves F^p on it with
// GF(2) coefficients, and their cohomology.
//
// The first triangulation T' supplies the cones tau = conv(0, tau_inf); the
// second supplies the simplices sigma. For X_trop pass (T dual, T); for the
// mirror pass (T, T dual).

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropbetti/gf2.hpp"
#include "tropbetti/lattice.hpp"
#include "tropbetti/triangulation.hpp"

namespace tropbetti {

class AssemblyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Smallest face of `coarse` whose cone contains all generators (points of
/// the boundary of `coarse`). No generators gives the empty face, whose cone
/// is {0}; the result then has dim -1.
Face min_cone(const LatticePolytope& coarse, const std::vector<IntVec>& generators);

/// Face of `p` on which every generator (a point of the dual polytope)
/// evaluates to 1. No generators gives p itself.
Face dual_face(const LatticePolytope& p, const std::vector<IntVec>& generators);

struct PosetCell {
  IndexSet tau;        // tau_inf, indices into the cone-side triangulation
  IndexSet sigma;      // boundary vertices of sigma
  bool sigma_origin;   // sigma also contains the origin
  int dim;             // codim(tau) - dim(sigma)

  int sigma_dim() const { return static_cast<int>(sigma.size()) - 1 + (sigma_origin ? 1 : 0); }
  friend auto operator<=>(const PosetCell&, const PosetCell&) = default;
};

struct SheafFiber {
  std::size_t p = 0;
  std::size_t ambient_wedge_dim = 0;  // C(n+1, p)
  std::size_t numerator_dim = 0;      // dim of the p-th wedge of C(tau)^perp
  std::size_t denominator_dim = 0;
  gf2::Quotient quotient;

  std::size_t dim() const { return quotient.dim(); }
};

struct CohomologyTable {
  std::size_t n = 0;
  std::vector<std::vector<std::int64_t>> dims;          // dims[p][q]
  std::vector<std::vector<std::int64_t>> chain_dims;    // dim C^q(F^p)
  std::vector<std::vector<std::int64_t>> ranks;         // rank delta_q on F^p

  std::int64_t euler(std::size_t p) const;
};

class TropicalComplex {
 public:
  TropicalComplex(const CentralTriangulation& cone_side, const CentralTriangulation& simplex_side);

  /// Dimension n of the hypersurface (ambient rank minus one).
  std::size_t n() const { return n_; }
  const std::vector<PosetCell>& cells() const { return cells_; }
  /// Cell indices of a given dimension, in cell order.
  const std::vector<std::size_t>& cells_of_dim(int q) const;
  /// Indices of cells covering cell i (dimension one higher).
  const std::vector<std::size_t>& cofaces(std::size_t i) const { return cofaces_.at(i); }
  std::optional<std::size_t> find(const PosetCell& c) const;

  SheafFiber fiber(std::size_t p, std::size_t cell) const;
  /// delta_q : C^q(F^p) -> C^{q+1}(F^p). Blocks are inclusion of wedge
  /// spaces followed by the target quotient projection.
  gf2::SparseMatrix coboundary(std::size_t p, int q) const;

  /// Ranks and dimensions for F^p; checks delta^2 = 0 (AssemblyError).
  std::vector<std::int64_t> cohomology(std::size_t p, CohomologyTable* detail = nullptr) const;
  /// Full table, parallel over p with up to `jobs` threads.
  CohomologyTable cohomology_table(unsigned jobs = 1) const;

 private:
  struct TauData {
    std::vector<gf2::Vector> w_basis;  // C(tau)^perp mod 2
  };

  const TauData& tau_data(const IndexSet& tau) const;
  std::vector<gf2::Vector> sigma_directions(const PosetCell& c) const;

  std::size_t n_ = 0;
  const CentralTriangulation* cone_side_;
  const CentralTriangulation* simplex_side_;
  std::vector<PosetCell> cells_;
  std::map<PosetCell, std::size_t> index_;
  std::vector<std::vector<std::size_t>> by_dim_;
  std::vector<std::vector<std::size_t>> cofaces_;
  std::map<IndexSet, TauData> tau_cache_;
};

/// dims_a[p][q] == dims_b[n-p][q] for all p, q. When they differ and
/// `first_mismatch` is given, it receives (p, q).
bool mirror_check(const CohomologyTable& a, const CohomologyTable& b,
                  std::pair<std::size_t, std::size_t>* first_mismatch = nullptr);

}  // namespace tropbetti
