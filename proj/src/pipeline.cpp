#include "tropbetti/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tropbetti/io.hpp"

namespace tropbetti {

using nlohmann::json;

LatticePolytope resolve_polytope(const std::string& spec) {
  if (std::filesystem::exists(spec)) return io::polytope_from_json(io::read_file(spec));
  try {
    return polytopes::builtin(spec);
  } catch (const PolytopeError&) {
    throw io::SchemaError("polytope", "'" + spec + "' is neither a file nor a builtin name");
  }
}

LatticePolytope resolve_polytope(const json& j) {
  if (j.is_string()) return resolve_polytope(j.get<std::string>());
  if (j.is_object()) return io::polytope_from_json(j);
  throw io::SchemaError("/polytope", "expected a name, a path or a polytope object");
}

DivisorF2 resolve_divisor(const DivisorSource& src, const DivisorLab& lab,
                          std::optional<GlobalConstruction>* construction) {
  const auto npts = lab.triangulation().points.size();
  if (src.kind == "empty") return {};
  if (src.kind == "construct") {
    auto g = lab.construct_global(src.basepoint);
    auto d = g.divisor;
    if (construction) *construction = std::move(g);
    return d;
  }
  if (src.kind == "inline") return io::divisor_from_json(src.data, npts);
  if (src.kind == "file") return io::divisor_from_json(io::read_file(src.data.get<std::string>()), npts);
  throw io::SchemaError("/divisor", "unknown divisor source '" + src.kind + "'");
}

namespace {

template <class T>
T get_as(const json& j, const std::string& key, bool (json::*check)() const noexcept, const char* expected) {
  const auto& v = j.at(key);
  if (!(v.*check)()) throw io::SchemaError("/" + key, std::string("expected ") + expected);
  return v.get<T>();
}

// Integers built in code are signed even when non-negative; accept both.
template <class T>
T get_count(const json& j, const std::string& key, const char* expected) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw io::SchemaError("/" + key, std::string("expected ") + expected);
  return v.get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
  static const std::set<std::string> known{"polytope",  "strategy",         "dual_strategy",    "seed",
                                           "divisor",   "basepoint",        "strict_adjacency", "assume_lefschetz",
                                           "assume_degeneration", "jobs",   "output"};
  if (!j.is_object()) throw io::SchemaError("<root>", "expected an object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw io::SchemaError("/" + k, "unknown key");
  PipelineConfig c;
  if (!j.contains("polytope")) throw io::SchemaError("/polytope", "missing required key");
  c.polytope = j.at("polytope");
  if (j.contains("strategy")) c.strategy = get_as<std::string>(j, "strategy", &json::is_string, "a string");
  if (j.contains("dual_strategy"))
    c.dual_strategy = get_as<std::string>(j, "dual_strategy", &json::is_string, "a string");
  for (const auto* key : {"strategy", "dual_strategy"}) {
    const auto& s = std::string(key) == "strategy" ? c.strategy : c.dual_strategy;
    if (s != "staircase" && s != "pulling") throw io::SchemaError(std::string("/") + key, "expected staircase or pulling");
  }
  if (j.contains("seed")) c.seed = get_count<std::uint64_t>(j, "seed", "a non-negative integer");
  if (j.contains("divisor")) {
    const auto& d = j.at("divisor");
    if (d.is_string()) {
      const auto s = d.get<std::string>();
      if (s == "empty" || s == "construct") {
        c.divisor.kind = s;
      } else {
        c.divisor.kind = "file";
        c.divisor.data = s;
      }
    } else if (d.is_object()) {
      c.divisor.kind = "inline";
      c.divisor.data = d;
    } else {
      throw io::SchemaError("/divisor", "expected \"empty\", \"construct\", a path or an object");
    }
  }
  if (j.contains("basepoint"))
    c.divisor.basepoint = get_count<std::size_t>(j, "basepoint", "a vertex index");
  if (j.contains("strict_adjacency"))
    c.strict_adjacency = get_as<bool>(j, "strict_adjacency", &json::is_boolean, "a boolean");
  if (j.contains("assume_lefschetz") && !j.at("assume_lefschetz").is_null())
    c.assume_lefschetz = get_as<bool>(j, "assume_lefschetz", &json::is_boolean, "a boolean or null");
  if (j.contains("assume_degeneration"))
    c.assume_degeneration = get_as<bool>(j, "assume_degeneration", &json::is_boolean, "a boolean");
  if (j.contains("jobs")) c.jobs = get_count<unsigned>(j, "jobs", "a non-negative integer");
  if (j.contains("output")) c.output = get_as<std::string>(j, "output", &json::is_string, "a path");
  return c;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult res;
  res.directory = cfg.output;
  const auto delta = resolve_polytope(cfg.polytope);
  const auto dual = delta.dual();
  const auto t = generate(delta, parse_strategy(cfg.strategy), cfg.seed);
  const auto tdual = generate(dual, parse_strategy(cfg.dual_strategy), cfg.seed);
  const auto vt = validate(delta, t);
  const auto vd = validate(dual, tdual);
  if (!vt.ok()) throw PrimitivityFailed("triangulation of the polytope fails validation: " + vt.issues.front().message, {});
  if (!vd.ok()) throw PrimitivityFailed("triangulation of the dual fails validation: " + vd.issues.front().message, {});

  const DivisorLab lab(delta, t, cfg.strict_adjacency);
  std::optional<GlobalConstruction> construction;
  const auto l = resolve_divisor(cfg.divisor, lab, &construction);

  BettiOptions opts;
  opts.assume_lefschetz = cfg.assume_lefschetz;
  opts.assume_degeneration = cfg.assume_degeneration;
  opts.strict_adjacency = cfg.strict_adjacency;
  opts.jobs = cfg.jobs;
  res.report = compute_betti(delta, t, tdual, l, opts);
  const auto& r = res.report;

  // Everything is computed before the first write.
  std::vector<std::pair<std::string, json>> files;
  files.emplace_back("polytope.json", io::to_json(delta));
  files.emplace_back("dual_polytope.json", io::to_json(dual));
  json tj = io::to_json(t);
  tj["validation"] = io::to_json(vt);
  tj["strategy"] = cfg.strategy;
  tj["seed"] = cfg.seed;
  files.emplace_back("triangulation.json", tj);
  json tdj = io::to_json(tdual);
  tdj["validation"] = io::to_json(vd);
  tdj["strategy"] = cfg.dual_strategy;
  tdj["seed"] = cfg.seed;
  files.emplace_back("dual_triangulation.json", tdj);
  json dj = io::to_json(l);
  dj["source"] = cfg.divisor.kind;
  if (construction) {
    dj["bullet"] = construction->bullet;
    dj["basepoint"] = cfg.divisor.basepoint;
    dj["hypotheses"] = io::to_json(construction->audit, delta);
  }
  files.emplace_back("divisor.json", dj);
  files.emplace_back("cohomology.json", io::to_json(r.dims));
  files.emplace_back("betti.json", to_json(r, t));

  std::ostringstream s;
  s << "polytope: dim " << delta.dim() << ", " << delta.vertices().size() << " vertices, " << delta.facets().size()
    << " facets, " << delta.lattice_points().size() << " lattice points\n";
  s << "triangulation: " << cfg.strategy << ", " << t.boundary_simplices.size() << " boundary simplices, volume "
    << vt.volume_sum << "/" << vt.expected_volume << "\n";
  s << "dual triangulation: " << cfg.dual_strategy << ", " << tdual.boundary_simplices.size()
    << " boundary simplices\n";
  s << "divisor: " << cfg.divisor.kind << ", " << l.support.size() << " points";
  if (construction) s << " (" << construction->bullet << ")";
  s << "\n";
  s << "cohomology dims[p][q] (n = " << r.n << "):\n";
  for (std::size_t p = 0; p < r.dims.dims.size(); ++p) {
    s << "  p=" << p << ":";
    for (auto d : r.dims.dims[p]) s << " " << d;
    s << "\n";
  }
  s << "admissible: " << (r.audit.admissible ? "yes" : "no") << " (" << r.admissibility.failures() << " of "
    << r.admissibility.verdicts.size() << " skeleton points fail)\n";
  s << "restriction: " << to_string(r.restriction.verdict) << "\n";
  s << "connected: " << to_string(r.connected) << "\n";
  s << "b1: " << (r.b1 ? std::to_string(*r.b1) + " via " + r.formula_used : std::string("withheld")) << "\n";
  if (r.b2) s << "b2: " << *r.b2 << "\n";
  for (const auto& u : r.audit.unmet) s << "unmet: " << u << "\n";
  for (const auto& note : r.notes) s << "note: " << note << "\n";

  std::filesystem::create_directories(res.directory);
  for (const auto& [name, j] : files) {
    io::write_file(res.directory / name, j);
    res.files.push_back(name);
  }
  std::ofstream(res.directory / "summary.txt", std::ios::binary) << s.str();
  res.files.push_back("summary.txt");
  return res;
}

}  // namespace tropbetti
