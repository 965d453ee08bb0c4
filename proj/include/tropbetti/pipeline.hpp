#pragma once

// End-to-end runs from a JSON config: polytope, both triangulations, the
// divisor, cohomology and the Betti report, written as an archive directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tropbetti/betti.hpp"

namespace tropbetti {

/// A builtin name ("quintic", "cube:4", ...) or a path to a polytope JSON file.
LatticePolytope resolve_polytope(const std::string& spec);
/// A string as above or an inline polytope object.
LatticePolytope resolve_polytope(const nlohmann::json& j);

/// "empty", "construct", a path to a divisor file, or an inline object.
struct DivisorSource {
  std::string kind = "empty";  // empty | construct | inline
  nlohmann::json data;
  std::size_t basepoint = 0;
};

DivisorF2 resolve_divisor(const DivisorSource& src, const DivisorLab& lab,
                          std::optional<GlobalConstruction>* construction = nullptr);

struct PipelineConfig {
  nlohmann::json polytope;
  std::string strategy = "staircase";
  std::string dual_strategy = "staircase";
  std::uint64_t seed = 0;
  DivisorSource divisor;
  bool strict_adjacency = false;
  std::optional<bool> assume_lefschetz;
  bool assume_degeneration = false;
  unsigned jobs = 1;
  std::filesystem::path output = "tropbetti-out";

  /// Unknown keys and wrong types raise io::SchemaError naming the key.
  static PipelineConfig from_json(const nlohmann::json& j);
};

struct PipelineResult {
  std::filesystem::path directory;
  std::vector<std::string> files;  // written, in order
  BettiReport report;
};

PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace tropbetti
