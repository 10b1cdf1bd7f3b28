#pragma once

#include <functional>
#include <optional>

#include "mcm/model.hpp"
#include "mcm/ordering.hpp"
#include "mcm/semantics.hpp"

namespace mcm {

struct SearchOptions {
  // Worker count for the top-level search branches (and for nothing else);
  // results are merged canonically, so the thread count never changes any
  // result. 1 means fully sequential.
  int threads = 1;
  // Share search subtrees whose (frontier, machine state) key was already
  // explored. Purely an optimization; results are identical with it off.
  bool memoize = true;
};

// Walks every valid execution in lexicographic (core, index) order. The
// visitor returns false to stop early. Returns the number of executions
// visited.
uint64_t for_each_execution(const LitmusConfig& config, const Program& program, MemoryModel mcm,
                            const std::function<bool(const Execution&)>& visit);

// All valid executions, lexicographically ascending: exactly the linear
// extensions of the per-core partial orders induced by the model.
std::vector<Execution> enumerate_executions(const LitmusConfig& config, const Program& program,
                                            MemoryModel mcm);

// Brute-force reference: filters all permutations of events_of(program)
// through is_valid_execution. Refuses programs with more than 9 events.
// Intended for differential testing only.
std::vector<Execution> oracle_executions(const LitmusConfig& config, const Program& program,
                                         MemoryModel mcm);

struct Outcome {
  MachineState state;
  // First execution in lexicographic order that reaches the state.
  Execution witness;
};

// Distinct final states, sorted by the canonical cell order (all register
// cells, then all variable cells).
struct OutcomeSet {
  std::vector<Outcome> outcomes;
  uint64_t executions = 0;

  bool contains(const MachineState& state) const;
};

OutcomeSet reachable_final_states(const LitmusConfig& config, const Program& program,
                                  MemoryModel mcm, const SearchOptions& options = {});

// Some valid execution whose final state matches the spec, or nullopt. The
// returned witness is always the lexicographically first match, independent
// of search options.
std::optional<Execution> check_allowed(const LitmusConfig& config, const Program& program,
                                       MemoryModel mcm, const FinalStateSpec& spec,
                                       const SearchOptions& options = {});

struct CountStats {
  uint64_t executions = 0;
  uint64_t distinct_final_states = 0;
};

CountStats count_stats(const LitmusConfig& config, const Program& program, MemoryModel mcm,
                       const SearchOptions& options = {});

}  // namespace mcm
