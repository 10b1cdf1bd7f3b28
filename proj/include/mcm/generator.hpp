#pragma once

#include <functional>
#include <optional>

#include "mcm/engine.hpp"
#include "mcm/model.hpp"

namespace mcm {

struct GeneratorOptions {
  // Drop stores of the initial variable value from the operation space. Off
  // by default: storing the initial value is an ordinary store.
  bool values_exclude_initial = false;
  SearchOptions search;
};

// The full operation space of one core, in canonical order: loads by
// (register, variable), then stores by (variable, value).
std::vector<Operation> operation_space(const LitmusConfig& config,
                                       bool values_exclude_initial = false);

// Number of programs over the configuration: with S sequences per core
// (all lengths 1..max over the operation space), exactly S^cores.
uint64_t program_count(const LitmusConfig& config, bool values_exclude_initial = false);

// Random access into the canonical enumeration: core 0's sequence is the
// most significant position, per-core sequences are ordered shorter-first
// and lexicographically within one length.
Program program_at(const LitmusConfig& config, uint64_t rank,
                   bool values_exclude_initial = false);

// Streams every program in canonical order; the visitor returns false to
// stop. No candidate set is ever materialized.
void enumerate_programs(const LitmusConfig& config, const std::function<bool(const Program&)>& visit,
                        bool values_exclude_initial = false);

struct AcceptedTest {
  Program program;
  std::string name;
  Execution witness;
};

struct GenerationReport {
  uint64_t candidates = 0;
  std::vector<AcceptedTest> accepted;
};

// Exhaustive generation: every candidate program (the include set if
// non-empty, otherwise the whole enumeration) that is not excluded and has a
// valid execution reaching the final-state spec under the configured model.
// Accepted programs appear in candidate order with their witnesses.
GenerationReport generate(const GenerationConfig& config, const GeneratorOptions& options = {});

struct ComparisonEntry {
  Program program;
  std::string name;
  // For programs valid under both models the strict witness doubles as the
  // relaxed one (every strict-valid execution is relaxed-valid).
  std::optional<Execution> strict_witness;
  std::optional<Execution> relaxed_witness;
};

// Partition of the input set. `neither` holds programs with no matching
// execution under either model, so the three cells always cover the input.
struct ComparisonReport {
  std::vector<ComparisonEntry> both;
  std::vector<ComparisonEntry> relaxed_only;
  std::vector<ComparisonEntry> neither;
};

// Splits `programs` by whether the spec stays reachable under the stricter
// model. Requires preserved_superset(strict, relaxed); throws otherwise.
ComparisonReport compare_models(const LitmusConfig& config, const std::vector<Program>& programs,
                                const std::vector<std::string>& names, MemoryModel strict,
                                MemoryModel relaxed, const FinalStateSpec& final_spec,
                                const GeneratorOptions& options = {});

// Systematic display name for a generated program: "gen-" + 16 hex digits.
std::string systematic_name(const Program& program);

}  // namespace mcm
