#pragma once

#include "mcm/model.hpp"

namespace mcm {

// All machine states visited while replaying an execution. states[0] is the
// initial state and states[i+1] = apply(states[i], execution[i]), so there is
// always exactly one more state than there are events.
struct Trace {
  std::vector<MachineState> states;
  Execution execution;

  const MachineState& final_state() const { return states.back(); }
};

// Every register INITIAL, every variable at the configured initial value.
MachineState initial_state(const LitmusConfig& config);

// Effect of one operation issued by `core`. Loads copy the variable's current
// value into the named register of that core; stores overwrite the named
// variable. Every other cell is left untouched.
MachineState apply(const MachineState& state, CoreId core, const Operation& op);

// Deterministic replay of a full execution; `execution` must be a permutation
// of events_of(program), otherwise a ValidationError names the missing or
// duplicated event. Materializes every intermediate state.
Trace replay(const LitmusConfig& config, const Program& program, const Execution& execution);

// Same transition system, but folds to the final state without keeping the
// intermediate states.
MachineState replay_final(const LitmusConfig& config, const Program& program,
                          const Execution& execution);

// True iff every cell mentioned by the spec holds the specified content.
bool matches(const MachineState& state, const FinalStateSpec& spec);

}  // namespace mcm
