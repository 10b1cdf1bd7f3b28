#pragma once

#include <random>

#include "mcm/generator.hpp"
#include "mcm/model.hpp"
#include "mcm/semantics.hpp"

namespace mcm::test {

// The classic same-variable store-buffering test: both cores store to x,
// then load x. Inferred from its litmus text this has 1 register per core
// and 3 values (0, 1, 2).
inline LitmusConfig sb000a_config() {
  LitmusConfig config;
  config.cores = 2;
  config.registers_per_core = 1;
  config.variables = 1;
  config.values = 3;
  config.max_ops_per_core = 2;
  return config;
}

inline Program sb000a_program() {
  Program p;
  p.cores = {{Store{0, 1}, Load{0, 0}}, {Store{0, 2}, Load{0, 0}}};
  return p;
}

inline FinalStateSpec reg_spec(std::initializer_list<std::tuple<CoreId, RegisterId, RegisterContent>> regs,
                               std::initializer_list<std::pair<VariableId, Value>> vars = {}) {
  FinalStateSpec spec;
  for (const auto& [core, reg, content] : regs) spec.registers[{core, reg}] = content;
  for (const auto& [var, value] : vars) spec.variables[var] = value;
  return spec;
}

inline MachineState state_of(const LitmusConfig& config,
                             std::initializer_list<std::tuple<CoreId, RegisterId, RegisterContent>> regs,
                             std::initializer_list<std::pair<VariableId, Value>> vars) {
  MachineState state = initial_state(config);
  for (const auto& [core, reg, content] : regs) state.set_reg(core, reg, content);
  for (const auto& [var, value] : vars) state.set_var(var, value);
  return state;
}

// Uniform sample over the canonical program enumeration.
inline Program random_program(std::mt19937_64& rng, const LitmusConfig& config) {
  uint64_t count = program_count(config);
  std::uniform_int_distribution<uint64_t> pick(0, count - 1);
  return program_at(config, pick(rng));
}

// The sampling space used by the differential-testing suites: 2 cores, up to
// 3 operations per core, 2 registers per core, 2 variables, 2 values.
inline LitmusConfig sample_config(int max_ops = 3) {
  LitmusConfig config;
  config.cores = 2;
  config.registers_per_core = 2;
  config.variables = 2;
  config.values = 2;
  config.max_ops_per_core = max_ops;
  return config;
}

}  // namespace mcm::test
