#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mcm {

// Dense ids into the finite universes declared by a LitmusConfig.
using CoreId = int;
using RegisterId = int;
using VariableId = int;

// Index into the value universe; index 0 is the conventional initial value
// of every variable.
using Value = int;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Content of a register cell: either the INITIAL sentinel or a Value.
// The sentinel is not part of the value universe, so no load or store can
// ever reintroduce it once a register has been written.
class RegisterContent {
 public:
  constexpr RegisterContent() = default;  // INITIAL

  static constexpr RegisterContent initial() { return RegisterContent{}; }

  static RegisterContent of(Value v) {
    if (v < 0) throw ValidationError("value index must be non-negative");
    RegisterContent rc;
    rc.raw_ = v;
    return rc;
  }

  constexpr bool is_initial() const { return raw_ < 0; }

  Value value() const {
    if (is_initial()) throw std::logic_error("INITIAL register content has no value");
    return raw_;
  }

  // INITIAL orders before every value; values order by index. This is the
  // cell order used by the canonical state serialization.
  friend constexpr auto operator<=>(RegisterContent a, RegisterContent b) = default;

 private:
  int raw_ = -1;
};

struct Load {
  RegisterId reg = 0;
  VariableId var = 0;
  friend bool operator==(const Load&, const Load&) = default;
};

struct Store {
  VariableId var = 0;
  Value value = 0;
  friend bool operator==(const Store&, const Store&) = default;
};

using Operation = std::variant<Load, Store>;

inline bool is_load(const Operation& op) { return std::holds_alternative<Load>(op); }
inline bool is_store(const Operation& op) { return std::holds_alternative<Store>(op); }
inline const Load& as_load(const Operation& op) { return std::get<Load>(op); }
inline const Store& as_store(const Operation& op) { return std::get<Store>(op); }

// One sequence of operations per core, cores identified by position.
struct Program {
  std::vector<std::vector<Operation>> cores;

  int total_ops() const;

  friend bool operator==(const Program&, const Program&) = default;
};

// Identity of one event: the issuing core and the 1-based position within
// that core's sequence. Two syntactically equal operations at different
// positions are distinct events.
struct EventId {
  CoreId core = 0;
  int index = 1;

  friend constexpr auto operator<=>(const EventId&, const EventId&) = default;
};

// A memory order: some permutation of all events of a program.
using Execution = std::vector<EventId>;

enum class MemoryModel { SC, TSO };

std::string_view name_of(MemoryModel mcm);

// Returns SC/TSO for the exact upper-case names, throws otherwise.
MemoryModel memory_model_from(std::string_view name);

enum class Expectation { Allowed, Forbidden, Unknown };

std::string_view name_of(Expectation e);

struct LitmusConfig {
  int cores = 1;
  int registers_per_core = 1;
  int variables = 1;
  int values = 1;
  int max_ops_per_core = 1;
  Value initial_variable_value = 0;

  // Throws ValidationError unless every count is >= 1 and within the
  // documented engine limits.
  void validate() const;

  // Additionally checks that the program fits this configuration: exactly
  // `cores` sequences, each of length 1..max_ops_per_core, all ids in range.
  void validate(const Program& program) const;

  friend bool operator==(const LitmusConfig&, const LitmusConfig&) = default;
};

// Register file and variable store at one point of an execution. Register
// cells are stored core-major; both maps are total.
struct MachineState {
  int registers_per_core = 0;
  std::vector<RegisterContent> registers;
  std::vector<Value> variables;

  int reg_index(CoreId core, RegisterId reg) const { return core * registers_per_core + reg; }
  RegisterContent reg(CoreId core, RegisterId reg) const;
  void set_reg(CoreId core, RegisterId reg, RegisterContent content);
  Value var(VariableId v) const;
  void set_var(VariableId v, Value value);
  int core_count() const {
    return registers_per_core == 0 ? 0 : static_cast<int>(registers.size()) / registers_per_core;
  }

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

// Canonical order over states: all register cells first, then all variable
// cells. States compared under one configuration always have equal shapes.
bool state_less(const MachineState& a, const MachineState& b);

struct StateLess {
  bool operator()(const MachineState& a, const MachineState& b) const { return state_less(a, b); }
};

// Partial description of a final state; unmentioned cells are unconstrained.
// Register cells may name the INITIAL sentinel, variable cells may not.
struct FinalStateSpec {
  std::map<std::pair<CoreId, RegisterId>, RegisterContent> registers;
  std::map<VariableId, Value> variables;

  bool empty() const { return registers.empty() && variables.empty(); }

  // Throws ValidationError if any mentioned cell or value is outside config.
  void validate(const LitmusConfig& config) const;

  friend bool operator==(const FinalStateSpec&, const FinalStateSpec&) = default;
};

// Display names for variables (registers use the fixed x86 names, cores are
// P0, P1, ...). Purely cosmetic; ids are the identity.
struct SymbolTable {
  std::vector<std::string> variables;

  std::string variable_name(VariableId v) const;
  static std::string default_variable_name(VariableId v);
  static SymbolTable defaults(int n_variables);

  friend bool operator==(const SymbolTable&, const SymbolTable&) = default;
};

// Fixed register naming of the litmus grammar: ids 0..3 are EAX..EDX.
inline constexpr int kMaxNamedRegisters = 4;
std::string_view register_name(RegisterId reg);  // throws for reg > 3

struct LitmusTest {
  std::string name;
  LitmusConfig config;
  Program program;
  FinalStateSpec condition;
  Expectation expectation = Expectation::Unknown;
  SymbolTable symbols;

  friend bool operator==(const LitmusTest&, const LitmusTest&) = default;
};

struct GenerationConfig {
  LitmusConfig config;
  MemoryModel mcm = MemoryModel::SC;
  FinalStateSpec final_spec;
  std::vector<Program> include_programs;
  // Optional display names parallel to include_programs; missing or empty
  // entries fall back to systematic names.
  std::vector<std::string> include_names;
  std::vector<Program> exclude_programs;

  void validate() const;
};

// Every event of the program, ordered by (core, index); 1-based indices.
std::vector<EventId> events_of(const Program& program);

// The operation at one event; throws ValidationError for out-of-range ids.
const Operation& operation_at(const Program& program, EventId event);

// Compact canonical text encoding of a program, suitable as a set/hash key.
// Equal programs encode equally and vice versa.
std::string encode_program(const Program& program);

// FNV-1a over encode_program; used for systematic test names.
uint64_t program_hash(const Program& program);

}  // namespace mcm
