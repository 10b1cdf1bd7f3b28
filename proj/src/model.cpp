#include "mcm/model.hpp"

#include <sstream>

namespace mcm {

namespace {

// Engine limits: masks hold one bit per operation of a core, memo keys encode
// cells as single bytes.
constexpr int kMaxCores = 64;
constexpr int kMaxRegistersPerCore = 64;
constexpr int kMaxVariables = 4096;
constexpr int kMaxValues = 255;
constexpr int kMaxOpsPerCore = 30;

}  // namespace

int Program::total_ops() const {
  int total = 0;
  for (const auto& ops : cores) total += static_cast<int>(ops.size());
  return total;
}

std::string_view name_of(MemoryModel mcm) {
  return mcm == MemoryModel::SC ? "SC" : "TSO";
}

MemoryModel memory_model_from(std::string_view name) {
  if (name == "SC") return MemoryModel::SC;
  if (name == "TSO") return MemoryModel::TSO;
  throw ValidationError("unknown memory model '" + std::string(name) + "' (expected SC or TSO)");
}

std::string_view name_of(Expectation e) {
  switch (e) {
    case Expectation::Allowed:
      return "Allowed";
    case Expectation::Forbidden:
      return "Forbidden";
    default:
      return "Unknown";
  }
}

void LitmusConfig::validate() const {
  auto check = [](int value, int max, const char* what) {
    if (value < 1) throw ValidationError(std::string(what) + " must be at least 1");
    if (value > max)
      throw ValidationError(std::string(what) + " exceeds the supported maximum of " + std::to_string(max));
  };
  check(cores, kMaxCores, "cores");
  check(registers_per_core, kMaxRegistersPerCore, "registers per core");
  check(variables, kMaxVariables, "variables");
  check(values, kMaxValues, "values");
  check(max_ops_per_core, kMaxOpsPerCore, "max operations per core");
  if (initial_variable_value < 0 || initial_variable_value >= values)
    throw ValidationError("initial variable value " + std::to_string(initial_variable_value) +
                          " is outside the value universe of size " + std::to_string(values));
}

void LitmusConfig::validate(const Program& program) const {
  validate();
  if (static_cast<int>(program.cores.size()) != cores)
    throw ValidationError("program has " + std::to_string(program.cores.size()) +
                          " cores, configuration declares " + std::to_string(cores));
  for (int c = 0; c < cores; ++c) {
    const auto& ops = program.cores[c];
    if (ops.empty()) throw ValidationError("core " + std::to_string(c) + " has no operations");
    if (static_cast<int>(ops.size()) > max_ops_per_core)
      throw ValidationError("core " + std::to_string(c) + " has " + std::to_string(ops.size()) +
                            " operations, configuration allows " + std::to_string(max_ops_per_core));
    for (const Operation& op : ops) {
      if (is_load(op)) {
        const Load& load = as_load(op);
        if (load.reg < 0 || load.reg >= registers_per_core)
          throw ValidationError("load register id out of range on core " + std::to_string(c));
        if (load.var < 0 || load.var >= variables)
          throw ValidationError("load variable id out of range on core " + std::to_string(c));
      } else {
        const Store& store = as_store(op);
        if (store.var < 0 || store.var >= variables)
          throw ValidationError("store variable id out of range on core " + std::to_string(c));
        if (store.value < 0 || store.value >= values)
          throw ValidationError("store value out of range on core " + std::to_string(c));
      }
    }
  }
}

RegisterContent MachineState::reg(CoreId core, RegisterId reg) const {
  int index = reg_index(core, reg);
  if (core < 0 || reg < 0 || reg >= registers_per_core || index >= static_cast<int>(registers.size()))
    throw ValidationError("register cell (" + std::to_string(core) + "," + std::to_string(reg) +
                          ") does not exist");
  return registers[index];
}

void MachineState::set_reg(CoreId core, RegisterId r, RegisterContent content) {
  int index = reg_index(core, r);
  if (core < 0 || r < 0 || r >= registers_per_core || index >= static_cast<int>(registers.size()))
    throw ValidationError("register cell (" + std::to_string(core) + "," + std::to_string(r) +
                          ") does not exist");
  registers[index] = content;
}

Value MachineState::var(VariableId v) const {
  if (v < 0 || v >= static_cast<int>(variables.size()))
    throw ValidationError("variable cell " + std::to_string(v) + " does not exist");
  return variables[v];
}

void MachineState::set_var(VariableId v, Value value) {
  if (v < 0 || v >= static_cast<int>(variables.size()))
    throw ValidationError("variable cell " + std::to_string(v) + " does not exist");
  variables[v] = value;
}

bool state_less(const MachineState& a, const MachineState& b) {
  if (a.registers != b.registers) return a.registers < b.registers;
  return a.variables < b.variables;
}

void FinalStateSpec::validate(const LitmusConfig& config) const {
  for (const auto& [cell, content] : registers) {
    auto [core, reg] = cell;
    if (core < 0 || core >= config.cores)
      throw ValidationError("final-state spec names core " + std::to_string(core) +
                            ", configuration declares " + std::to_string(config.cores));
    if (reg < 0 || reg >= config.registers_per_core)
      throw ValidationError("final-state spec names register " + std::to_string(reg) +
                            " on core " + std::to_string(core) + ", out of range");
    if (!content.is_initial() && content.value() >= config.values)
      throw ValidationError("final-state spec register value out of the declared value universe");
  }
  for (const auto& [var, value] : variables) {
    if (var < 0 || var >= config.variables)
      throw ValidationError("final-state spec names variable id " + std::to_string(var) +
                            ", out of range");
    if (value < 0 || value >= config.values)
      throw ValidationError("final-state spec variable value out of the declared value universe");
  }
}

std::string SymbolTable::default_variable_name(VariableId v) {
  static constexpr std::string_view kNames[] = {"x", "y", "z", "w", "u", "v", "t", "s"};
  if (v >= 0 && v < static_cast<int>(std::size(kNames))) return std::string(kNames[v]);
  return "var" + std::to_string(v);
}

std::string SymbolTable::variable_name(VariableId v) const {
  if (v >= 0 && v < static_cast<int>(variables.size()) && !variables[v].empty()) return variables[v];
  return default_variable_name(v);
}

SymbolTable SymbolTable::defaults(int n_variables) {
  SymbolTable table;
  table.variables.reserve(n_variables);
  for (int v = 0; v < n_variables; ++v) table.variables.push_back(default_variable_name(v));
  return table;
}

std::string_view register_name(RegisterId reg) {
  static constexpr std::string_view kNames[] = {"EAX", "EBX", "ECX", "EDX"};
  if (reg < 0 || reg >= kMaxNamedRegisters)
    throw ValidationError("register id " + std::to_string(reg) +
                          " has no x86 name (only EAX..EDX are representable)");
  return kNames[reg];
}

void GenerationConfig::validate() const {
  config.validate();
  final_spec.validate(config);
  for (const Program& p : include_programs) config.validate(p);
  for (const Program& p : exclude_programs) config.validate(p);
  if (!include_names.empty() && include_names.size() != include_programs.size())
    throw ValidationError("include program names must be empty or match the program count");
}

std::vector<EventId> events_of(const Program& program) {
  std::vector<EventId> events;
  events.reserve(program.total_ops());
  for (int c = 0; c < static_cast<int>(program.cores.size()); ++c)
    for (int i = 1; i <= static_cast<int>(program.cores[c].size()); ++i)
      events.push_back(EventId{c, i});
  return events;
}

const Operation& operation_at(const Program& program, EventId event) {
  if (event.core < 0 || event.core >= static_cast<int>(program.cores.size()))
    throw ValidationError("event names core " + std::to_string(event.core) +
                          ", program has " + std::to_string(program.cores.size()) + " cores");
  const auto& ops = program.cores[event.core];
  if (event.index < 1 || event.index > static_cast<int>(ops.size()))
    throw ValidationError("event index " + std::to_string(event.index) + " out of range on core " +
                          std::to_string(event.core));
  return ops[event.index - 1];
}

std::string encode_program(const Program& program) {
  std::ostringstream out;
  for (const auto& ops : program.cores) {
    for (const Operation& op : ops) {
      if (is_load(op)) {
        const Load& load = as_load(op);
        out << 'L' << load.reg << '.' << load.var << ';';
      } else {
        const Store& store = as_store(op);
        out << 'S' << store.var << '.' << store.value << ';';
      }
    }
    out << '|';
  }
  return out.str();
}

uint64_t program_hash(const Program& program) {
  uint64_t hash = 1469598103934665603ull;
  for (char ch : encode_program(program)) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace mcm
