// tropbetti: command-line front end. Every subcommand prints JSON to stdout
// (or --output). Exit codes: 0 ok, 2 invalid input or failed validation,
// 3 unmet hypothesis or negative verdict, 4 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tropbetti/betti.hpp"
#include "tropbetti/io.hpp"
#include "tropbetti/pipeline.hpp"

using namespace tropbetti;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kHypothesis = 3;
constexpr int kInternal = 4;

struct Common {
  std::string polytope;
  std::string triangulation;       // file; generated when empty
  std::string dual_triangulation;  // file; generated when empty
  std::string strategy = "staircase";
  std::string dual_strategy = "staircase";
  std::uint64_t seed = 0;
  std::string divisor = "empty";
  std::size_t basepoint = 0;
  bool strict = false;
  std::optional<bool> lefschetz;
  bool degeneration = false;
  unsigned jobs = 0;
  std::string output;
};

unsigned default_jobs() {
  if (const char* env = std::getenv("TROPBETTI_JOBS")) {
    try {
      const auto v = std::stoul(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void emit(const Common& c, const json& j) {
  if (c.output.empty()) {
    std::cout << io::dump(j);
  } else {
    io::write_file(c.output, j);
  }
}

CentralTriangulation load_or_generate(const LatticePolytope& p, const std::string& file, const std::string& strategy,
                                      std::uint64_t seed) {
  if (!file.empty()) return io::triangulation_from_json(io::read_file(file));
  return generate(p, parse_strategy(strategy), seed);
}

void require_valid(const LatticePolytope& p, const CentralTriangulation& t, const char* which) {
  const auto rep = validate(p, t);
  if (!rep.ok()) throw PrimitivityFailed(std::string(which) + " fails validation: " + rep.issues.front().message, {});
}

DivisorSource divisor_source(const Common& c) {
  DivisorSource src;
  src.basepoint = c.basepoint;
  if (c.divisor == "empty" || c.divisor == "construct") {
    src.kind = c.divisor;
  } else {
    src.kind = "file";
    src.data = c.divisor;
  }
  return src;
}

void add_polytope(CLI::App* sub, Common& c) {
  sub->add_option("-p,--polytope", c.polytope, "builtin name (quintic, cube:4, ...) or polytope JSON")->required();
}

void add_triangulations(CLI::App* sub, Common& c) {
  sub->add_option("-t,--triangulation", c.triangulation, "triangulation JSON of the polytope");
  sub->add_option("--dual-triangulation", c.dual_triangulation, "triangulation JSON of the dual");
  sub->add_option("--strategy", c.strategy, "staircase | pulling")->check(CLI::IsMember({"staircase", "pulling"}));
  sub->add_option("--dual-strategy", c.dual_strategy, "staircase | pulling")
      ->check(CLI::IsMember({"staircase", "pulling"}));
  sub->add_option("--seed", c.seed, "seed for the pulling order");
}

void add_divisor(CLI::App* sub, Common& c) {
  sub->add_option("-d,--divisor", c.divisor, "empty | construct | divisor JSON");
  sub->add_option("--basepoint", c.basepoint, "vertex index v0 for construct");
  sub->add_flag("--strict-adjacency", c.strict, "use every edge of T in the local cases");
}

json config_json(const ConfigClass& cc) {
  json j{{"kind", to_string(cc.kind)}, {"detail", cc.detail}};
  j["distinguished_edge"] = cc.distinguished_edge ? json(*cc.distinguished_edge) : json(nullptr);
  return j;
}

int run(CLI::App& app, Common& c) {
  if (c.jobs == 0) c.jobs = default_jobs();
  const auto* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();

  const auto delta = resolve_polytope(c.polytope);

  if (name == "dualize") {
    emit(c, io::to_json(delta.dual()));
    return kOk;
  }
  if (name == "validate") {
    json j{{"reflexive", delta.is_reflexive()},
           {"smooth", delta.is_smooth()},
           {"lattice_points", delta.lattice_points().size()},
           {"normalized_volume", delta.normalized_volume()}};
    json counts = json::array();
    for (std::size_t k = 0; k < delta.dim(); ++k) counts.push_back(delta.faces(static_cast<int>(k)).size());
    j["face_counts"] = counts;
    bool ok = true;
    if (!c.triangulation.empty()) {
      const auto t = io::triangulation_from_json(io::read_file(c.triangulation));
      const auto rep = validate(delta, t);
      j["triangulation"] = io::to_json(rep);
      ok = rep.ok();
    }
    emit(c, j);
    return ok ? kOk : kValidation;
  }
  if (name == "triangulate") {
    const auto t = generate(delta, parse_strategy(c.strategy), c.seed);
    json j = io::to_json(t);
    j["validation"] = io::to_json(validate(delta, t));
    emit(c, j);
    return kOk;
  }

  if (name == "construct-divisor") require_construction_hypotheses(delta);
  const auto dual = delta.dual();
  const auto t = load_or_generate(delta, c.triangulation, c.strategy, c.seed);
  require_valid(delta, t, "triangulation");

  if (name == "cohomology" || name == "mirror-check") {
    const auto tdual = load_or_generate(dual, c.dual_triangulation, c.dual_strategy, c.seed);
    require_valid(dual, tdual, "dual triangulation");
    const TropicalComplex x(tdual, t);
    const auto tx = x.cohomology_table(c.jobs);
    if (name == "cohomology") {
      json j = io::to_json(tx);
      j["cells"] = x.cells().size();
      emit(c, j);
      return kOk;
    }
    const TropicalComplex m(t, tdual);
    const auto tm = m.cohomology_table(c.jobs);
    std::pair<std::size_t, std::size_t> bad;
    const bool pass = mirror_check(tx, tm, &bad);
    json j{{"pass", pass}, {"x", tx.dims}, {"mirror", tm.dims}};
    j["first_mismatch"] = pass ? json(nullptr) : json{bad.first, bad.second};
    emit(c, j);
    return pass ? kOk : kValidation;
  }

  const DivisorLab lab(delta, t, c.strict);
  std::optional<GlobalConstruction> construction;
  const auto l = resolve_divisor(divisor_source(c), lab, &construction);

  if (name == "construct-divisor") {
    const auto rep = lab.is_admissible(l, c.jobs);
    json j = io::to_json(l);
    j["bullet"] = construction->bullet;
    j["basepoint"] = c.basepoint;
    j["hypotheses"] = io::to_json(construction->audit, delta);
    j["admissible"] = rep.admissible;
    j["failures"] = rep.failures();
    emit(c, j);
    return rep.admissible ? kOk : kHypothesis;
  }
  if (name == "admissible") {
    const auto rep = lab.is_admissible(l, c.jobs);
    emit(c, io::to_json(rep, t));
    return rep.admissible ? kOk : kHypothesis;
  }
  if (name == "classify") {
    json verts = json::array(), edges = json::array();
    for (std::size_t v = 0; v < delta.vertices().size(); ++v) {
      json e = config_json(lab.classify_vertex(v, l));
      e["vertex"] = delta.vertices()[v];
      verts.push_back(e);
    }
    for (const auto& edge : delta.faces(1)) {
      json e = config_json(lab.classify_edge(edge, l));
      e["edge"] = json{delta.vertices()[edge.vertices[0]], delta.vertices()[edge.vertices[1]]};
      edges.push_back(e);
    }
    emit(c, {{"vertices", verts}, {"edges", edges}});
    return kOk;
  }
  if (name == "betti") {
    const auto tdual = load_or_generate(dual, c.dual_triangulation, c.dual_strategy, c.seed);
    require_valid(dual, tdual, "dual triangulation");
    BettiOptions opts;
    opts.assume_lefschetz = c.lefschetz;
    opts.assume_degeneration = c.degeneration;
    opts.strict_adjacency = c.strict;
    opts.jobs = c.jobs;
    const auto rep = compute_betti(delta, t, tdual, l, opts);
    emit(c, to_json(rep, t));
    return rep.b1 ? kOk : kHypothesis;
  }
  throw InternalError("unhandled subcommand " + name);
}

int run_cube_cup(std::size_t n, const std::string& bits, const Common& c) {
  if (bits.size() != n + 1 || bits.find_first_not_of("01") != std::string::npos)
    throw io::SchemaError("--D", "expected " + std::to_string(n + 1) + " characters from {0,1}");
  gf2::Vector d(n + 1);
  for (std::size_t i = 0; i <= n; ++i) d.set(i, bits[i] == '1');
  json kernel = json::array();
  for (const auto& v : cube_cup_kernel(n, d)) kernel.push_back(io::to_json(v));
  bool squares_vanish = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n + 1)); ++mask) {
    gf2::Vector beta(n + 1);
    for (std::size_t i = 0; i <= n; ++i) beta.set(i, (mask >> i) & 1U);
    squares_vanish = squares_vanish && cube_square(n, beta).is_zero();
  }
  emit(c, {{"n", n},
           {"D", io::to_json(d)},
           {"kernel", kernel},
           {"rank", gf2::rank(cube_cup_matrix(n, d))},
           {"squares_vanish", squares_vanish}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GF(2) tropical cohomology and patchworking Betti numbers of reflexive pairs"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("-j,--jobs", c.jobs, "worker threads (default: TROPBETTI_JOBS or 1)");
  app.add_option("-o,--output", c.output, "write JSON here instead of stdout");

  auto* validate_cmd = app.add_subcommand("validate", "check a polytope and optionally a triangulation");
  add_polytope(validate_cmd, c);
  validate_cmd->add_option("-t,--triangulation", c.triangulation, "triangulation JSON");

  add_polytope(app.add_subcommand("dualize", "polar dual of a reflexive polytope"), c);

  auto* tri = app.add_subcommand("triangulate", "generate a primitive central triangulation");
  add_polytope(tri, c);
  tri->add_option("--strategy", c.strategy, "staircase | pulling")->check(CLI::IsMember({"staircase", "pulling"}));
  tri->add_option("--seed", c.seed, "seed for the pulling order");

  for (const char* n : {"cohomology", "mirror-check"}) {
    auto* sub = app.add_subcommand(n, std::string(n) == "cohomology" ? "tropical cohomology table of X_trop"
                                                                     : "compare X_trop with its mirror");
    add_polytope(sub, c);
    add_triangulations(sub, c);
  }
  for (const char* n : {"admissible", "classify"}) {
    auto* sub = app.add_subcommand(n, std::string(n) == "admissible" ? "Case 1 / Case 2 check at every skeleton point"
                                                                     : "vertex and edge configurations of a divisor");
    add_polytope(sub, c);
    add_triangulations(sub, c);
    add_divisor(sub, c);
  }
  auto* cons = app.add_subcommand("construct-divisor", "global construction for smooth 4-polytopes");
  add_polytope(cons, c);
  add_triangulations(cons, c);
  cons->add_option("--basepoint", c.basepoint, "vertex index v0");
  cons->add_flag("--strict-adjacency", c.strict, "use every edge of T in the local cases");

  auto* betti = app.add_subcommand("betti", "connectedness and first Betti number");
  add_polytope(betti, c);
  add_triangulations(betti, c);
  add_divisor(betti, c);
  betti->add_flag(
      "--assume-lefschetz,!--no-assume-lefschetz",
      [&](std::int64_t count) { c.lefschetz = count > 0; }, "substitute Hodge numbers (default: on iff smooth)");
  betti->add_flag("--assume-degeneration", c.degeneration, "assume degeneration at the second page (n outside 3,4)");

  std::size_t cube_n = 3;
  std::string cube_d;
  auto* cube = app.add_subcommand("cube-cup", "kernel of beta -> beta^2 + beta D in the cube model");
  cube->add_option("--n", cube_n, "hypersurface dimension")->required()->check(CLI::Range(1, 20));
  cube->add_option("--D", cube_d, "n+1 bits")->required();

  std::string config_path;
  std::string pipeline_out;
  auto* pipe = app.add_subcommand("pipeline", "end-to-end run from a JSON config");
  pipe->add_option("config", config_path, "config JSON")->required();
  pipe->add_option("--archive", pipeline_out, "archive directory (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "construct-divisor") c.divisor = "construct";
    if (name == "cube-cup") return run_cube_cup(cube_n, cube_d, c);
    if (name == "pipeline") {
      auto cfg = PipelineConfig::from_json(io::read_file(config_path));
      if (!pipeline_out.empty()) cfg.output = pipeline_out;
      if (c.jobs) cfg.jobs = c.jobs;
      const auto res = run_pipeline(cfg);
      json files = json::array();
      for (const auto& f : res.files) files.push_back(f);
      std::cout << io::dump({{"archive", res.directory.string()}, {"files", files}, {"b1", res.report.b1 ? json(*res.report.b1) : json(nullptr)}});
      return res.report.b1 ? kOk : kHypothesis;
    }
    return run(app, c);
  } catch (const io::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const PrimitivityFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& w : e.witness) std::cerr << "  witness " << json(w).dump() << "\n";
    return kValidation;
  } catch (const HypothesisFailed& e) {
    std::cerr << "hypothesis failed: " << e.what() << "\n";
    for (const auto& w : e.witness) std::cerr << "  witness " << json(w).dump() << "\n";
    return kHypothesis;
  } catch (const NotReflexive& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const PolytopeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
