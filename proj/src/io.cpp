#include "tropbetti/io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace tropbetti::io {

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing required key");
  return *it;
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

IntVec int_vector(const json& j, const std::string& path, std::size_t expected_len) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of integers");
  if (expected_len && j.size() != expected_len)
    throw SchemaError(path, "expected length " + std::to_string(expected_len) + ", got " + std::to_string(j.size()));
  IntVec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<IntVec> int_matrix(const json& j, const std::string& path, std::size_t row_len) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of integer vectors");
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(int_vector(j[i], path + "/" + std::to_string(i), row_len));
    if (!row_len) row_len = out.back().size();
  }
  return out;
}

}  // namespace

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump(j);
}

json to_json(const IntVec& v) { return json(v); }
json to_json(const IndexSet& s) { return json(s); }

json to_json(const gf2::Vector& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v.get(i) ? 1 : 0);
  return out;
}

json to_json(const Face& f) { return {{"dim", f.dim}, {"vertices", f.vertices}, {"facets", f.facets}}; }

json to_json(const LatticePolytope& p) {
  json normals = json::array();
  for (const auto& f : p.facets()) normals.push_back(f.normal);
  json j{{"dim", p.dim()}, {"vertices", p.vertices()}};
  if (p.is_reflexive()) j["facet_normals"] = normals;
  return j;
}

LatticePolytope polytope_from_json(const json& j) {
  const auto dim = as_int(require(j, "dim", ""), "/dim");
  if (dim < 1 || dim > 8) throw SchemaError("/dim", "expected an integer in [1, 8]");
  auto verts = int_matrix(require(j, "vertices", ""), "/vertices", static_cast<std::size_t>(dim));
  if (verts.size() <= static_cast<std::size_t>(dim)) throw SchemaError("/vertices", "too few points for a full-dimensional polytope");
  LatticePolytope p;
  try {
    p = LatticePolytope(std::move(verts));
  } catch (const PolytopeError& e) {
    throw SchemaError("/vertices", e.what());
  }
  if (auto it = j.find("facet_normals"); it != j.end()) {
    auto given = int_matrix(*it, "/facet_normals", static_cast<std::size_t>(dim));
    if (!p.is_reflexive()) throw SchemaError("/facet_normals", "normals given for a non-reflexive polytope");
    std::vector<IntVec> computed;
    for (const auto& f : p.facets()) computed.push_back(f.normal);
    std::sort(given.begin(), given.end());
    std::sort(computed.begin(), computed.end());
    if (given != computed) throw SchemaError("/facet_normals", "do not match the facets of the vertex hull");
  }
  return p;
}

json to_json(const CentralTriangulation& t) {
  return {{"points", t.points}, {"boundary_simplices", t.boundary_simplices}};
}

CentralTriangulation triangulation_from_json(const json& j) {
  auto pts = int_matrix(require(j, "points", ""), "/points", 0);
  if (pts.empty()) throw SchemaError("/points", "empty point list");
  const auto& simp = require(j, "boundary_simplices", "");
  if (!simp.is_array()) throw SchemaError("/boundary_simplices", "expected an array of index lists");

  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  std::vector<std::size_t> new_index(pts.size());
  CentralTriangulation t;
  for (std::size_t k = 0; k < order.size(); ++k) {
    new_index[order[k]] = k;
    if (k && pts[order[k]] == pts[order[k - 1]]) throw SchemaError("/points", "duplicate point");
    t.points.push_back(pts[order[k]]);
  }
  for (std::size_t i = 0; i < simp.size(); ++i) {
    const std::string path = "/boundary_simplices/" + std::to_string(i);
    const auto raw = int_vector(simp[i], path, 0);
    IndexSet s;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      const auto v = raw[k];
      if (v < 0 || static_cast<std::size_t>(v) >= pts.size())
        throw SchemaError(path + "/" + std::to_string(k), "point index out of range");
      s.push_back(new_index[static_cast<std::size_t>(v)]);
    }
    std::sort(s.begin(), s.end());
    t.boundary_simplices.push_back(std::move(s));
  }
  std::sort(t.boundary_simplices.begin(), t.boundary_simplices.end());
  return t;
}

json to_json(const DivisorF2& d) { return {{"support", d.support}}; }

DivisorF2 divisor_from_json(const json& j, std::size_t num_points) {
  const auto raw = int_vector(require(j, "support", ""), "/support", 0);
  IndexSet s;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0 || static_cast<std::size_t>(raw[i]) >= num_points)
      throw SchemaError("/support/" + std::to_string(i), "point index out of range");
    s.push_back(static_cast<std::size_t>(raw[i]));
  }
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw SchemaError("/support", "repeated index");
  return DivisorF2::from(std::move(s));
}

json to_json(const ValidationReport& r) {
  json issues = json::array();
  for (const auto& i : r.issues) issues.push_back({{"kind", i.kind}, {"message", i.message}, {"witness", i.witness}});
  return {{"ok", r.ok()},
          {"primitive", r.primitive},
          {"central", r.central},
          {"covering", r.covering},
          {"complete", r.complete},
          {"volume_sum", r.volume_sum},
          {"expected_volume", r.expected_volume},
          {"issues", issues}};
}

json to_json(const CohomologyTable& t) {
  json euler = json::array();
  for (std::size_t p = 0; p < t.dims.size(); ++p) euler.push_back(t.euler(p));
  return {{"n", t.n}, {"dims", t.dims}, {"chain_dims", t.chain_dims}, {"ranks", t.ranks}, {"euler", euler}};
}

json to_json(const LocalVerdict& v, const CentralTriangulation& t) {
  json j{{"point", v.point},
         {"coordinates", t.points.at(v.point)},
         {"status", to_string(v.status)},
         {"constraints", v.constraint_count},
         {"local_support", v.local_support}};
  j["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
  return j;
}

json to_json(const AdmissibilityReport& r, const CentralTriangulation& t) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v, t));
  return {{"admissible", r.admissible},
          {"strict_adjacency", r.strict_adjacency},
          {"ambient_only", r.ambient_only},
          {"failures", r.failures()},
          {"skeleton_points", r.verdicts.size()},
          {"notes", r.notes},
          {"verdicts", verdicts}};
}

json to_json(const RestrictionReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"surjectivity_hypothesis", r.surjectivity_hypothesis},
         {"invisible_rank", r.invisible_rank},
         {"reason", r.reason}};
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  j["kernel_dim"] = r.kernel_dim ? json(*r.kernel_dim) : json(nullptr);
  return j;
}

json to_json(const HypothesisAudit& a, const LatticePolytope& p) {
  json j{{"smooth", a.smooth},
         {"four_dimensional", a.four_dimensional},
         {"even_edges", a.even_edges},
         {"three_parities", a.three_parities}};
  auto coords = [&](const Face& f) {
    json out = json::array();
    for (auto v : f.vertices) out.push_back(p.vertices()[v]);
    return out;
  };
  if (a.odd_edge) j["odd_edge"] = {{"vertices", coords(*a.odd_edge)}, {"length", p.edge_length(*a.odd_edge)}};
  if (a.bad_face) j["bad_face"] = {{"vertices", coords(*a.bad_face)}, {"boundary_parities", a.bad_face_parities}};
  return j;
}

}  // namespace tropbetti::io
