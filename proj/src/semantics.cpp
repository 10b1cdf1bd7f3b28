#include "mcm/semantics.hpp"

namespace mcm {

namespace {

std::string event_text(EventId e) {
  return "(" + std::to_string(e.core) + "," + std::to_string(e.index) + ")";
}

// Permutation check shared by replay and replay_final. Throws naming the
// first out-of-range, duplicated, or missing event.
void check_permutation(const Program& program, const Execution& execution) {
  std::vector<std::vector<bool>> seen(program.cores.size());
  for (size_t c = 0; c < program.cores.size(); ++c) seen[c].assign(program.cores[c].size(), false);

  for (EventId e : execution) {
    if (e.core < 0 || e.core >= static_cast<int>(program.cores.size()) || e.index < 1 ||
        e.index > static_cast<int>(program.cores[e.core].size()))
      throw ValidationError("execution names event " + event_text(e) +
                            " which does not exist in the program");
    if (seen[e.core][e.index - 1])
      throw ValidationError("execution is not a permutation: event " + event_text(e) +
                            " appears more than once");
    seen[e.core][e.index - 1] = true;
  }
  for (size_t c = 0; c < seen.size(); ++c)
    for (size_t i = 0; i < seen[c].size(); ++i)
      if (!seen[c][i])
        throw ValidationError("execution is not a permutation: event " +
                              event_text(EventId{static_cast<int>(c), static_cast<int>(i) + 1}) +
                              " is missing");
}

}  // namespace

MachineState initial_state(const LitmusConfig& config) {
  config.validate();
  MachineState state;
  state.registers_per_core = config.registers_per_core;
  state.registers.assign(static_cast<size_t>(config.cores) * config.registers_per_core,
                         RegisterContent::initial());
  state.variables.assign(config.variables, config.initial_variable_value);
  return state;
}

MachineState apply(const MachineState& state, CoreId core, const Operation& op) {
  MachineState next = state;
  if (is_load(op)) {
    const Load& load = as_load(op);
    next.set_reg(core, load.reg, RegisterContent::of(state.var(load.var)));
  } else {
    const Store& store = as_store(op);
    next.set_var(store.var, store.value);
  }
  return next;
}

Trace replay(const LitmusConfig& config, const Program& program, const Execution& execution) {
  config.validate(program);
  check_permutation(program, execution);

  Trace trace;
  trace.execution = execution;
  trace.states.reserve(execution.size() + 1);
  trace.states.push_back(initial_state(config));
  for (EventId e : execution)
    trace.states.push_back(apply(trace.states.back(), e.core, operation_at(program, e)));
  return trace;
}

MachineState replay_final(const LitmusConfig& config, const Program& program,
                          const Execution& execution) {
  config.validate(program);
  check_permutation(program, execution);

  MachineState state = initial_state(config);
  for (EventId e : execution) {
    const Operation& op = operation_at(program, e);
    if (is_load(op)) {
      const Load& load = as_load(op);
      state.set_reg(e.core, load.reg, RegisterContent::of(state.var(load.var)));
    } else {
      const Store& store = as_store(op);
      state.set_var(store.var, store.value);
    }
  }
  return state;
}

bool matches(const MachineState& state, const FinalStateSpec& spec) {
  for (const auto& [cell, content] : spec.registers)
    if (state.reg(cell.first, cell.second) != content) return false;
  for (const auto& [var, value] : spec.variables)
    if (state.var(var) != value) return false;
  return true;
}

}  // namespace mcm
