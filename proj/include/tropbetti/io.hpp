#pragma once

// JSON encodings of polytopes, triangulations, divisors and reports. Objects
// are nlohmann::json, whose keys serialize in sorted order, so dumps are
// byte-stable.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tropbetti/divisor.hpp"
#include "tropbetti/lattice.hpp"
#include "tropbetti/triangulation.hpp"
#include "tropbetti/tropical.hpp"

namespace tropbetti::io {

using nlohmann::json;

/// Malformed input. `key` is the JSON path of the offending entry.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key(key) {}
  std::string key;
};

json read_file(const std::filesystem::path& path);
/// Pretty dump with two-space indent and a trailing newline.
std::string dump(const json& j);
void write_file(const std::filesystem::path& path, const json& j);

json to_json(const IntVec& v);
json to_json(const IndexSet& s);
json to_json(const gf2::Vector& v);  // bit list
json to_json(const Face& f);

json to_json(const LatticePolytope& p);
/// { "dim", "vertices" [, "facet_normals"] }. Supplied normals must match
/// the computed facets of a reflexive polytope, in any order.
LatticePolytope polytope_from_json(const json& j);

json to_json(const CentralTriangulation& t);
CentralTriangulation triangulation_from_json(const json& j);

json to_json(const DivisorF2& d);
/// { "support": [indices] }; indices must be below `num_points`.
DivisorF2 divisor_from_json(const json& j, std::size_t num_points);

json to_json(const ValidationReport& r);
json to_json(const CohomologyTable& t);
json to_json(const LocalVerdict& v, const CentralTriangulation& t);
json to_json(const AdmissibilityReport& r, const CentralTriangulation& t);
json to_json(const RestrictionReport& r);
json to_json(const HypothesisAudit& a, const LatticePolytope& p);

}  // namespace tropbetti::io
