#include "tropbetti/betti.hpp"

#include <algorithm>

#include "tropbetti/io.hpp"

namespace tropbetti {

std::string to_string(Connectivity c) {
  switch (c) {
    case Connectivity::Connected: return "connected";
    case Connectivity::TwoComponents: return "two-components";
    case Connectivity::Unknown: return "unknown";
  }
  return "unknown";
}

bool is_cross_polytope(const LatticePolytope& p) {
  return p.dim() > 0 && p.vertices() == polytopes::cross_polytope(p.dim()).vertices();
}

BettiReport compute_betti(const LatticePolytope& delta, const CentralTriangulation& t,
                          const CentralTriangulation& tdual, const DivisorF2& l, const BettiOptions& opts) {
  BettiReport rep;
  auto& a = rep.audit;
  const auto dual = delta.dual();
  a.delta_smooth = delta.is_smooth();
  a.dual_smooth = dual.is_smooth();
  a.lefschetz_explicit = opts.assume_lefschetz.has_value();
  a.lefschetz = opts.assume_lefschetz.value_or(a.delta_smooth || a.dual_smooth);
  a.degeneration_assumed = opts.assume_degeneration;

  const TropicalComplex x(tdual, t);
  rep.n = x.n();
  const auto n = rep.n;
  a.dimension_ok = n == 3 || n == 4;
  rep.dims = x.cohomology_table(opts.jobs);

  const TropicalComplex mirror(t, tdual);
  if (n >= 1) rep.mirror_h11 = mirror.cohomology(1).at(1);

  const DivisorLab lab(delta, t, opts.strict_adjacency);
  rep.admissibility = lab.is_admissible(l, opts.jobs);
  a.admissible = rep.admissibility.admissible;
  a.ambient_only = rep.admissibility.ambient_only;
  rep.restriction = lab.restriction(l, rep.mirror_h11);
  a.restriction = rep.restriction.verdict;

  switch (a.restriction) {
    case Restriction::Zero: rep.connected = Connectivity::TwoComponents; break;
    case Restriction::NonzeroCertified: rep.connected = Connectivity::Connected; break;
    case Restriction::Unknown: rep.connected = Connectivity::Unknown; break;
  }

  if (!a.delta_smooth && !a.dual_smooth) a.unmet.push_back("neither the polytope nor its dual is smooth");
  if (!a.lefschetz) a.unmet.push_back("Hodge-number substitution not enabled (--assume-lefschetz)");
  if (!a.admissible) {
    a.unmet.push_back("divisor not certified admissible (" + std::to_string(rep.admissibility.failures()) +
                      " skeleton points fail both cases)");
  } else if (a.ambient_only) {
    a.unmet.push_back("admissibility holds only in the ambient toric variety (n < 3)");
  }
  if (!a.dimension_ok && !a.degeneration_assumed)
    a.unmet.push_back("n = " + std::to_string(n) + " is outside {3, 4} and degeneration was not assumed");

  std::int64_t h11 = 0, hn11 = 0;
  if (n >= 2) {
    h11 = rep.dims.dims[1][1];
    hn11 = rep.dims.dims[n - 1][1];
  }
  const auto maximal_value = h11 + hn11;

  if (a.green() && n >= 2) {
    if (rep.connected == Connectivity::TwoComponents) {
      rep.b1 = maximal_value;
      rep.formula_used = "h^{n-1,1}+h^{1,1}";
      rep.maximal = true;
      if (n == 4) rep.b2 = 2 * rep.dims.dims[4][0] + rep.dims.dims[2][2] - 2 * rep.dims.dims[0][0];
    } else if (rep.connected == Connectivity::Connected) {
      rep.b1 = maximal_value - 1;
      rep.formula_used = "h^{n-1,1}+h^{1,1}-1";
      rep.maximal = false;
    } else {
      rep.b1_if_two_components = maximal_value;
      rep.b1_if_connected = maximal_value - 1;
      rep.notes.push_back("connectedness undecided: both branches reported, b1 withheld");
    }
  }

  if (!rep.b1 && n >= 2 && is_cross_polytope(delta) && a.restriction == Restriction::NonzeroCertified && a.lefschetz) {
    if (n > 4) {
      rep.b1 = h11;
      rep.formula_used = "h^{1,1}";
      rep.maximal = false;
      rep.notes.push_back("dual cube with nonzero divisor: b1 = h^{1,1} here, which is h^{n-1,1} of the cube hypersurface");
    } else if (n == 3) {
      rep.conditional_b1 = maximal_value - 1;
      rep.notes.push_back("dual cube, n = 3, nonzero divisor: value conditional on the unproved cup-product "
                          "vanishing for the cube (transverse intersection argument)");
    }
  }
  return rep;
}

nlohmann::json to_json(const BettiReport& r, const CentralTriangulation& t) {
  using nlohmann::json;
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); };
  const auto& a = r.audit;
  json audit{{"delta_smooth", a.delta_smooth},
             {"dual_smooth", a.dual_smooth},
             {"lefschetz", a.lefschetz},
             {"lefschetz_explicit", a.lefschetz_explicit},
             {"admissible", a.admissible},
             {"ambient_only", a.ambient_only},
             {"n_in_3_4", a.dimension_ok},
             {"degeneration_assumed", a.degeneration_assumed},
             {"restriction", to_string(a.restriction)},
             {"unmet", a.unmet},
             {"green", a.green()}};
  json j{{"n", r.n},
         {"connected", to_string(r.connected)},
         {"b1", opt(r.b1)},
         {"formula_used", r.formula_used},
         {"maximal", r.maximal ? json(*r.maximal) : json(nullptr)},
         {"b2", opt(r.b2)},
         {"b1_if_two_components", opt(r.b1_if_two_components)},
         {"b1_if_connected", opt(r.b1_if_connected)},
         {"conditional_b1", opt(r.conditional_b1)},
         {"mirror_h11", opt(r.mirror_h11)},
         {"audit", audit},
         {"cohomology", io::to_json(r.dims)},
         {"restriction", io::to_json(r.restriction)},
         {"admissibility", io::to_json(r.admissibility, t)},
         {"notes", r.notes}};
  return j;
}

}  // namespace tropbetti
