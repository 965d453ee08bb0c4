#pragma once

// First Betti number and connectedness of a patchworked real hypersurface
// from the GF(2) tropical cohomology of X_trop and a mod-2 divisor L on the
// points of T. Every value is gated by an audit of the hypotheses it needs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tropbetti/divisor.hpp"
#include "tropbetti/tropical.hpp"

namespace tropbetti {

enum class Connectivity { Connected, TwoComponents, Unknown };
std::string to_string(Connectivity c);

struct BettiOptions {
  /// Hodge-number substitution; unset means "on iff Delta or its dual is smooth".
  std::optional<bool> assume_lefschetz;
  /// Needed outside n in {3, 4}.
  bool assume_degeneration = false;
  bool strict_adjacency = false;
  unsigned jobs = 1;
};

struct BettiAudit {
  bool delta_smooth = false;
  bool dual_smooth = false;
  bool lefschetz = false;
  bool lefschetz_explicit = false;
  bool admissible = false;
  bool ambient_only = false;
  bool dimension_ok = false;  // n in {3, 4}
  bool degeneration_assumed = false;
  Restriction restriction = Restriction::Unknown;
  std::vector<std::string> unmet;

  bool green() const { return unmet.empty(); }
};

struct BettiReport {
  std::size_t n = 0;
  Connectivity connected = Connectivity::Unknown;
  std::optional<std::int64_t> b1;
  std::string formula_used = "none";
  std::optional<bool> maximal;
  /// n = 4 and two components: 2 h^{4,0} + h^{2,2} - 2 h^{0,0}.
  std::optional<std::int64_t> b2;
  /// Both branches when connectedness is undecided (audit otherwise green).
  std::optional<std::int64_t> b1_if_two_components;
  std::optional<std::int64_t> b1_if_connected;
  /// Dual-cube value resting on an unproved argument (n = 3, L != 0).
  std::optional<std::int64_t> conditional_b1;
  BettiAudit audit;
  CohomologyTable dims;  // X_trop side
  std::optional<std::int64_t> mirror_h11;
  AdmissibilityReport admissibility;
  RestrictionReport restriction;
  std::vector<std::string> notes;
};

/// True when p is the cross-polytope conv(+-e_i), i.e. the dual of [-1,1]^d.
bool is_cross_polytope(const LatticePolytope& p);

/// `t` triangulates delta (L lives on its points), `tdual` triangulates the dual.
BettiReport compute_betti(const LatticePolytope& delta, const CentralTriangulation& t,
                          const CentralTriangulation& tdual, const DivisorF2& l, const BettiOptions& opts);

nlohmann::json to_json(const BettiReport& r, const CentralTriangulation& t);

}  // namespace tropbetti
