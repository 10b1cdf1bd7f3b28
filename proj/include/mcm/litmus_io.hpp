#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mcm/engine.hpp"
#include "mcm/model.hpp"

namespace mcm {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                          (column > 0 ? ":" + std::to_string(column) : "") + ": " +
                                          message
                                    : message),
        line(line),
        column(column) {}

  int line = 0;
  int column = 0;
};

// Syntactic layer of a litmus file: the document split into its parts,
// before any semantic assembly. Instruction cells are raw text; blank cells
// mark cores with fewer operations than the tallest column.
struct LitmusDocument {
  std::string arch;
  std::string name;
  std::vector<std::pair<std::string, int>> initial;  // variable = value pairs
  int cores = 0;
  std::vector<std::vector<std::string>> rows;  // instruction grid, row-major
  std::string condition;                       // the exists/~exists line
  int initial_line = 0;
  std::vector<int> row_lines;  // 1-based source line of each grid row
  int condition_line = 0;
};

// Splits text into a LitmusDocument: validates the header, skips diy7
// metadata lines, reads the initial-state block, the P0..Pn-1 processor
// header and the instruction grid (equal column counts), and captures the
// condition line.
LitmusDocument parse_document(std::string_view text);

// Litmus text format -- a strict subset of the diy7/herd7 x86 syntax:
//
//   X86 SB000a
//   { x=0; }
//    P0          | P1          ;
//    MOV [x],$1  | MOV [x],$2  ;
//    MOV EAX,[x] | MOV EAX,[x] ;
//   exists (x=2 /\ 0:EAX=1 /\ 1:EAX=2)
//
// Instructions: `MOV [loc],$imm` stores, `MOV reg,[loc]` loads; registers are
// EAX..EDX with the fixed ids 0..3; the `$` is optional. Condition atoms are
// `loc=imm`, `proc:reg=imm` and `proc:reg=INITIAL`, joined by `/\` inside
// `exists (...)` or `~exists (...)`. Fences and any other instruction are
// rejected. Quoted metadata lines and `Key=value` lines between the header
// and the initial state block are skipped, so diy7-generated load/store
// tests parse unchanged.
LitmusTest parse_litmus(std::string_view text);
LitmusTest parse_litmus_file(const std::filesystem::path& path);

// Canonical serialization; parse_litmus(emit_litmus(t)) is structurally equal
// to t for every parsed test, and emitting is idempotent. Tests whose
// expectation is Unknown, or with more than 4 registers per core, cannot be
// serialized.
std::string emit_litmus(const LitmusTest& test);

// Parameter file: a single JSON document declaring the universes, the model,
// the final-state spec and the include/exclude program sets. See the README
// for the schema.
struct ParamFile {
  std::string name;
  LitmusConfig config;
  MemoryModel mcm = MemoryModel::SC;
  FinalStateSpec final_spec;
  std::vector<Program> include_programs;
  std::vector<std::string> include_names;
  std::vector<Program> exclude_programs;

  GenerationConfig generation_config() const;
};

ParamFile parse_param(std::string_view text);
ParamFile parse_param_file(const std::filesystem::path& path);

enum class ReportFormat { Human, Structured };

// Rendering helpers shared by the report emitters.
std::string render_instruction(const Operation& op, const SymbolTable& symbols);
std::string render_register_cell(CoreId core, RegisterId reg);
std::string render_content(RegisterContent content);
// Full state in the canonical cell order: registers, then variables.
std::string render_state(const MachineState& state, const SymbolTable& symbols);
// Partial spec in condition order: variables, then registers.
std::string render_spec(const FinalStateSpec& spec, const SymbolTable& symbols);
std::string render_condition(Expectation expectation, const FinalStateSpec& spec,
                             const SymbolTable& symbols);
// One instruction line per event, a rule, then the final state.
std::string render_witness_block(const LitmusConfig& config, const Program& program,
                                 const SymbolTable& symbols, const Execution& execution,
                                 std::string_view indent = "  ");

bool expectation_confirmed(Expectation expectation, bool reachable);

struct CheckReport {
  LitmusTest test;
  MemoryModel mcm = MemoryModel::SC;
  std::optional<Execution> witness;
  bool show_witness = false;
};

struct OutcomesReport {
  LitmusTest test;
  MemoryModel mcm = MemoryModel::SC;
  OutcomeSet outcomes;
  bool count_only = false;
  bool respect_condition = false;
};

struct GenerationSummary {
  std::string param_name;
  MemoryModel mcm = MemoryModel::SC;
  bool values_exclude_initial = false;
  uint64_t candidates = 0;
  std::vector<std::string> test_names;
};

struct ComparisonSummary {
  std::string param_name;
  MemoryModel strict = MemoryModel::SC;
  MemoryModel relaxed = MemoryModel::TSO;
  bool values_exclude_initial = false;
  uint64_t candidates = 0;
  std::vector<std::string> both;
  std::vector<std::string> relaxed_only;
  std::vector<std::string> neither;
};

// All report text is deterministic and newline-terminated; the structured
// variant is JSON with a fixed key order.
std::string emit_report(const CheckReport& report, ReportFormat format);
std::string emit_report(const OutcomesReport& report, ReportFormat format);
std::string emit_report(const GenerationSummary& report, ReportFormat format);
std::string emit_report(const ComparisonSummary& report, ReportFormat format);

}  // namespace mcm
