#include "mcm/litmus_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "mcm/semantics.hpp"

namespace mcm {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  for (;;) {
    size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, end - start));
    start = end + sep.size();
  }
}

bool valid_location_name(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

std::optional<RegisterId> register_id_from(std::string_view name) {
  for (RegisterId r = 0; r < kMaxNamedRegisters; ++r)
    if (name == register_name(r)) return r;
  return std::nullopt;
}

// Character-level scanner over one instruction cell or condition atom.
struct CellScanner {
  std::string_view text;
  size_t pos = 0;
  int line;

  explicit CellScanner(std::string_view text_, int line_) : text(text_), line(line_) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& context) {
    if (!eat(c))
      throw ParseError("expected '" + std::string(1, c) + "' " + context + " in '" +
                           std::string(trim(text)) + "'",
                       line);
  }

  std::string_view ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start)
      throw ParseError("expected an identifier in '" + std::string(trim(text)) + "'", line);
    return text.substr(start, pos - start);
  }

  int integer(const std::string& what) {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start)
      throw ParseError("expected a non-negative " + what + " in '" + std::string(trim(text)) + "'",
                       line);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
    if (ec != std::errc())
      throw ParseError(what + " out of range in '" + std::string(trim(text)) + "'", line);
    (void)ptr;
    return value;
  }

  void expect_end() {
    skip_ws();
    if (pos < text.size())
      throw ParseError("trailing characters after '" + std::string(text.substr(0, pos)) + "'",
                       line);
  }
};

// Maps variable names to dense ids. Interning order is first use: initial
// state block, then the instruction body in reading order, then the
// condition (which may not introduce new names).
struct VariableInterner {
  std::vector<std::string> names;

  VariableId intern(std::string_view name, bool allow_new, int line) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<VariableId>(i);
    if (!allow_new) {
      std::string declared;
      for (const auto& n : names) declared += (declared.empty() ? "" : ", ") + n;
      throw ParseError("undeclared variable '" + std::string(name) + "' in condition (declared: " +
                           (declared.empty() ? "none" : declared) + ")",
                       line);
    }
    names.emplace_back(name);
    return static_cast<VariableId>(names.size() - 1);
  }
};

// `MOV [loc],$imm` or `MOV reg,[loc]`; anything else is rejected.
Operation parse_instruction(std::string_view cell, int line,
                            const std::function<VariableId(std::string_view)>& intern_var) {
  CellScanner scan(cell, line);
  std::string_view mnemonic = scan.ident();
  if (mnemonic != "MOV")
    throw ParseError("unsupported instruction '" + std::string(mnemonic) +
                         "' (only MOV loads and stores are supported)",
                     line);
  if (scan.peek() == '[') {
    scan.expect('[', "before the variable");
    std::string_view loc = scan.ident();
    if (!valid_location_name(loc))
      throw ParseError("invalid variable name '" + std::string(loc) + "'", line);
    scan.expect(']', "after the variable");
    scan.expect(',', "between operands");
    scan.eat('$');
    int value = scan.integer("store value");
    scan.expect_end();
    return Store{intern_var(loc), value};
  }
  std::string_view reg = scan.ident();
  auto reg_id = register_id_from(reg);
  if (!reg_id)
    throw ParseError("unknown register '" + std::string(reg) + "' (expected EAX, EBX, ECX or EDX)",
                     line);
  scan.expect(',', "between operands");
  scan.expect('[', "before the variable");
  std::string_view loc = scan.ident();
  if (!valid_location_name(loc))
    throw ParseError("invalid variable name '" + std::string(loc) + "'", line);
  scan.expect(']', "after the variable");
  scan.expect_end();
  return Load{*reg_id, intern_var(loc)};
}

struct ConditionAtom {
  bool is_register = false;
  CoreId core = 0;
  RegisterId reg = 0;
  VariableId var = 0;
  RegisterContent content;  // register atoms may be INITIAL
};

ConditionAtom parse_condition_atom(std::string_view atom, int line,
                                   const std::function<VariableId(std::string_view)>& lookup_var) {
  CellScanner scan(atom, line);
  ConditionAtom result;
  if (std::isdigit(static_cast<unsigned char>(scan.peek()))) {
    result.is_register = true;
    result.core = scan.integer("processor id");
    scan.expect(':', "after the processor id");
    std::string_view reg = scan.ident();
    auto reg_id = register_id_from(reg);
    if (!reg_id)
      throw ParseError("unknown register '" + std::string(reg) + "' in condition", line);
    result.reg = *reg_id;
    scan.expect('=', "in the condition atom");
    scan.skip_ws();
    if (!scan.at_end() && !std::isdigit(static_cast<unsigned char>(scan.peek()))) {
      std::string_view word = scan.ident();
      if (word != "INITIAL")
        throw ParseError("expected a value or INITIAL, found '" + std::string(word) + "'", line);
      result.content = RegisterContent::initial();
    } else {
      result.content = RegisterContent::of(scan.integer("value"));
    }
    scan.expect_end();
    return result;
  }
  std::string_view loc = scan.ident();
  if (!valid_location_name(loc))
    throw ParseError("invalid variable name '" + std::string(loc) + "' in condition", line);
  scan.expect('=', "in the condition atom");
  scan.skip_ws();
  if (!scan.at_end() && !std::isdigit(static_cast<unsigned char>(scan.peek()))) {
    std::string_view word = scan.ident();
    if (word == "INITIAL")
      throw ParseError("variables cannot be compared against INITIAL (only registers can)", line);
    throw ParseError("expected a value, found '" + std::string(word) + "'", line);
  }
  result.var = lookup_var(loc);
  result.content = RegisterContent::of(scan.integer("value"));
  scan.expect_end();
  return result;
}

bool looks_like_metadata(std::string_view line) {
  std::string_view t = trim(line);
  if (t.empty()) return false;
  if (t.front() == '"') return true;
  size_t eq = t.find('=');
  if (eq == std::string_view::npos || eq == 0) return false;
  // Key=value lines such as Generator=diy7; instruction rows never match
  // because they contain spaces, brackets or column separators first.
  return std::all_of(t.begin(), t.begin() + eq, [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
  });
}

}  // namespace

LitmusDocument parse_document(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text);
  size_t li = 0;
  auto skip_blank = [&] {
    while (li < lines.size() && is_blank(lines[li])) ++li;
  };

  LitmusDocument doc;

  // Header: arch tag and test name.
  skip_blank();
  if (li >= lines.size()) throw ParseError("empty litmus file");
  {
    std::string_view header = trim(lines[li]);
    size_t space = header.find_first_of(" \t");
    std::string_view arch = space == std::string_view::npos ? header : header.substr(0, space);
    if (arch != "X86")
      throw ParseError("unsupported architecture '" + std::string(arch) + "' (expected X86)",
                       static_cast<int>(li + 1));
    if (space == std::string_view::npos || trim(header.substr(space)).empty())
      throw ParseError("missing test name in the header line", static_cast<int>(li + 1));
    doc.arch = std::string(arch);
    doc.name = std::string(trim(header.substr(space)));
    ++li;
  }

  // diy7 metadata between header and initial state block.
  skip_blank();
  while (li < lines.size() && looks_like_metadata(lines[li])) {
    ++li;
    skip_blank();
  }

  // Initial state block.
  if (li >= lines.size() || trim(lines[li]).front() != '{')
    throw ParseError("expected the initial state block '{ ... }'",
                     static_cast<int>(li < lines.size() ? li + 1 : lines.size()));
  doc.initial_line = static_cast<int>(li + 1);
  std::string init_text;
  {
    bool closed = false;
    while (li < lines.size()) {
      std::string_view line = lines[li];
      ++li;
      size_t close = line.find('}');
      if (close != std::string_view::npos) {
        init_text += std::string(line.substr(0, close));
        if (!is_blank(line.substr(close + 1)))
          throw ParseError("unexpected text after '}'", static_cast<int>(li));
        closed = true;
        break;
      }
      init_text += std::string(line);
      init_text += ' ';
    }
    if (!closed) throw ParseError("unterminated initial state block", doc.initial_line);
    init_text.erase(0, init_text.find('{') + 1);
  }
  for (std::string_view pair : split_on(init_text, ";")) {
    pair = trim(pair);
    if (pair.empty()) continue;
    if (pair.find(':') != std::string_view::npos)
      throw ParseError("register initialisation is not supported", doc.initial_line);
    CellScanner scan(pair, doc.initial_line);
    std::string_view loc = scan.ident();
    if (!valid_location_name(loc))
      throw ParseError("invalid variable name '" + std::string(loc) + "' in the initial state",
                       doc.initial_line);
    scan.expect('=', "in the initial state pair");
    int value = scan.integer("initial value");
    scan.expect_end();
    doc.initial.emplace_back(std::string(loc), value);
  }

  // Instruction grid: processor header row, then instruction rows.
  auto is_condition_start = [](std::string_view line) {
    std::string_view t = trim(line);
    return t.starts_with("exists") || t.starts_with("~exists") || t.starts_with("forall") ||
           t.starts_with("locations");
  };

  skip_blank();
  bool saw_header_row = false;
  while (li < lines.size() && !is_condition_start(lines[li])) {
    std::string_view line = trim(lines[li]);
    if (line.empty()) {
      ++li;
      continue;
    }
    if (line.back() != ';')
      throw ParseError("expected an instruction row ending in ';' or the condition",
                       static_cast<int>(li + 1));
    line.remove_suffix(1);
    std::vector<std::string> cells;
    for (std::string_view cell : split_on(line, "|")) cells.emplace_back(trim(cell));

    if (!saw_header_row) {
      // Row 0 names the processors P0..Pn-1 in order.
      for (size_t c = 0; c < cells.size(); ++c) {
        std::string expected = "P" + std::to_string(c);
        if (cells[c] != expected)
          throw ParseError("expected processor header cell '" + expected + "', found '" +
                               cells[c] + "'",
                           static_cast<int>(li + 1));
      }
      doc.cores = static_cast<int>(cells.size());
      saw_header_row = true;
    } else {
      if (static_cast<int>(cells.size()) != doc.cores)
        throw ParseError("row has " + std::to_string(cells.size()) + " columns, test has " +
                             std::to_string(doc.cores) + " processors",
                         static_cast<int>(li + 1));
      doc.rows.push_back(std::move(cells));
      doc.row_lines.push_back(static_cast<int>(li + 1));
    }
    ++li;
  }
  if (!saw_header_row) throw ParseError("missing instruction rows");

  // Condition.
  skip_blank();
  if (li >= lines.size()) throw ParseError("missing condition line (exists or ~exists)");
  doc.condition_line = static_cast<int>(li + 1);
  doc.condition = std::string(trim(lines[li]));
  ++li;
  skip_blank();
  if (li < lines.size())
    throw ParseError("unexpected text after the condition", static_cast<int>(li + 1));
  return doc;
}

LitmusTest parse_litmus(std::string_view text) {
  LitmusDocument doc = parse_document(text);

  VariableInterner vars;
  std::optional<Value> initial_value;
  for (const auto& [name, value] : doc.initial) {
    vars.intern(name, true, doc.initial_line);
    if (initial_value && *initial_value != value)
      throw ParseError("differing initial values are not supported (all variables share one)",
                       doc.initial_line);
    initial_value = value;
  }

  Program program;
  program.cores.resize(doc.cores);
  int max_reg_used = -1;
  int max_value_used = -1;
  for (size_t r = 0; r < doc.rows.size(); ++r) {
    for (int c = 0; c < doc.cores; ++c) {
      const std::string& cell = doc.rows[r][c];
      if (cell.empty()) continue;
      if (program.cores[c].size() != r)
        throw ParseError("gap in the instruction column of P" + std::to_string(c),
                         doc.row_lines[r]);
      Operation op = parse_instruction(cell, doc.row_lines[r], [&](std::string_view loc) {
        return vars.intern(loc, true, doc.row_lines[r]);
      });
      if (is_load(op)) max_reg_used = std::max(max_reg_used, as_load(op).reg);
      if (is_store(op)) max_value_used = std::max(max_value_used, as_store(op).value);
      program.cores[c].push_back(op);
    }
  }
  for (int c = 0; c < doc.cores; ++c)
    if (program.cores[c].empty())
      throw ParseError("P" + std::to_string(c) + " has no instructions",
                       doc.row_lines.empty() ? doc.initial_line : doc.row_lines.front());

  std::string_view cond = doc.condition;
  Expectation expectation = Expectation::Allowed;
  if (cond.starts_with("~exists")) {
    expectation = Expectation::Forbidden;
    cond.remove_prefix(7);
  } else if (cond.starts_with("exists")) {
    cond.remove_prefix(6);
  } else {
    throw ParseError("unsupported condition '" + std::string(cond.substr(0, cond.find(' '))) +
                         "' (expected exists or ~exists)",
                     doc.condition_line);
  }
  cond = trim(cond);
  if (cond.empty() || cond.front() != '(' || cond.back() != ')')
    throw ParseError("condition must be parenthesised", doc.condition_line);
  cond = cond.substr(1, cond.size() - 2);
  if (cond.find("\\/") != std::string_view::npos)
    throw ParseError("disjunction is not supported in conditions", doc.condition_line);

  FinalStateSpec spec;
  if (!is_blank(cond)) {
    for (std::string_view atom_text : split_on(cond, "/\\")) {
      ConditionAtom atom =
          parse_condition_atom(trim(atom_text), doc.condition_line, [&](std::string_view loc) {
            return vars.intern(loc, false, doc.condition_line);
          });
      if (atom.is_register) {
        if (atom.core < 0 || atom.core >= doc.cores)
          throw ParseError("condition names processor " + std::to_string(atom.core) +
                               ", test has " + std::to_string(doc.cores),
                           doc.condition_line);
        auto [it, inserted] =
            spec.registers.emplace(std::make_pair(atom.core, atom.reg), atom.content);
        if (!inserted && it->second != atom.content)
          throw ParseError("contradictory condition on " +
                               render_register_cell(atom.core, atom.reg),
                           doc.condition_line);
        max_reg_used = std::max(max_reg_used, atom.reg);
        if (!atom.content.is_initial())
          max_value_used = std::max(max_value_used, atom.content.value());
      } else {
        auto [it, inserted] = spec.variables.emplace(atom.var, atom.content.value());
        if (!inserted && it->second != atom.content.value())
          throw ParseError("contradictory condition on variable", doc.condition_line);
        max_value_used = std::max(max_value_used, atom.content.value());
      }
    }
  }

  LitmusTest test;
  test.name = doc.name;
  test.config.cores = doc.cores;
  test.config.registers_per_core = std::max(1, max_reg_used + 1);
  test.config.variables = static_cast<int>(vars.names.size());
  test.config.initial_variable_value = initial_value.value_or(0);
  test.config.values =
      std::max(test.config.initial_variable_value, std::max(0, max_value_used)) + 1;
  int max_ops = 0;
  for (const auto& ops : program.cores) max_ops = std::max(max_ops, static_cast<int>(ops.size()));
  test.config.max_ops_per_core = max_ops;
  test.program = std::move(program);
  test.condition = std::move(spec);
  test.expectation = expectation;
  test.symbols.variables = std::move(vars.names);

  test.config.validate(test.program);
  test.condition.validate(test.config);
  return test;
}
LitmusTest parse_litmus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open litmus file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_litmus(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

std::string emit_litmus(const LitmusTest& test) {
  test.config.validate(test.program);
  test.condition.validate(test.config);
  if (test.expectation == Expectation::Unknown)
    throw ValidationError("tests with an Unknown expectation cannot be serialized");
  if (test.name.empty() || test.name.find('\n') != std::string::npos)
    throw ValidationError("test name must be a non-empty single line");

  std::ostringstream out;
  out << "X86 " << test.name << "\n";

  out << "{";
  for (VariableId v = 0; v < test.config.variables; ++v) {
    std::string vname = test.symbols.variable_name(v);
    if (!valid_location_name(vname))
      throw ValidationError("variable name '" + vname + "' is not serializable");
    out << " " << vname << "=" << test.config.initial_variable_value << ";";
  }
  out << " }\n";

  // Columnar body, cells padded to the widest entry of each column.
  int cores = test.config.cores;
  std::vector<std::vector<std::string>> columns(cores);
  size_t body_rows = 0;
  for (int c = 0; c < cores; ++c) {
    columns[c].push_back("P" + std::to_string(c));
    for (const Operation& op : test.program.cores[c])
      columns[c].push_back(render_instruction(op, test.symbols));
    body_rows = std::max(body_rows, columns[c].size());
  }
  std::vector<size_t> width(cores, 0);
  for (int c = 0; c < cores; ++c)
    for (const auto& cell : columns[c]) width[c] = std::max(width[c], cell.size());
  for (size_t r = 0; r < body_rows; ++r) {
    for (int c = 0; c < cores; ++c) {
      std::string cell = r < columns[c].size() ? columns[c][r] : "";
      cell.resize(width[c], ' ');
      out << " " << cell << (c + 1 < cores ? " |" : " ;");
    }
    out << "\n";
  }

  out << render_condition(test.expectation, test.condition, test.symbols) << "\n";
  return out.str();
}

GenerationConfig ParamFile::generation_config() const {
  GenerationConfig gc;
  gc.config = config;
  gc.mcm = mcm;
  gc.final_spec = final_spec;
  gc.include_programs = include_programs;
  gc.include_names = include_names;
  gc.exclude_programs = exclude_programs;
  return gc;
}

namespace {

const ordered_json& require_key(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing mandatory key '") + key + "'");
  return *it;
}

int require_int(const ordered_json& j, const char* key) {
  const ordered_json& v = require_key(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

// Variable names available in a param file: the default names of the
// declared universe.
VariableId param_variable_id(const std::string& name, const LitmusConfig& config) {
  for (VariableId v = 0; v < config.variables; ++v)
    if (SymbolTable::default_variable_name(v) == name) return v;
  std::string declared;
  for (VariableId v = 0; v < config.variables; ++v)
    declared += (v ? ", " : "") + SymbolTable::default_variable_name(v);
  throw ParseError("undeclared variable '" + name + "' (declared: " + declared + ")");
}

Program parse_param_program(const ordered_json& j, const LitmusConfig& config) {
  const ordered_json& cores = require_key(j, "cores");
  if (!cores.is_array() || static_cast<int>(cores.size()) != config.cores)
    throw ParseError("program must list exactly " + std::to_string(config.cores) +
                     " core instruction arrays");
  Program program;
  for (const auto& core : cores) {
    if (!core.is_array() || core.empty())
      throw ParseError("each core needs a non-empty array of instructions");
    std::vector<Operation> ops;
    for (const auto& instr : core) {
      if (!instr.is_string()) throw ParseError("instructions must be strings");
      Operation op = parse_instruction(instr.get<std::string>(), 0, [&](std::string_view loc) {
        return param_variable_id(std::string(loc), config);
      });
      if (is_load(op) && as_load(op).reg >= config.registers_per_core)
        throw ParseError("register " + std::string(register_name(as_load(op).reg)) +
                         " is outside the declared " + std::to_string(config.registers_per_core) +
                         " registers per core");
      if (is_store(op) && as_store(op).value >= config.values)
        throw ParseError("store value " + std::to_string(as_store(op).value) +
                         " is outside the declared value universe of size " +
                         std::to_string(config.values));
      ops.push_back(op);
    }
    program.cores.push_back(std::move(ops));
  }
  return program;
}

RegisterContent parse_param_content(const ordered_json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "INITIAL") return RegisterContent::initial();
    throw ParseError("register content must be an integer or \"INITIAL\"");
  }
  if (!v.is_number_integer() || v.get<int>() < 0)
    throw ParseError("register content must be a non-negative integer or \"INITIAL\"");
  return RegisterContent::of(v.get<int>());
}

}  // namespace

ParamFile parse_param(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("parameter file must be a JSON object");

  ParamFile param;
  try {
    if (j.contains("name")) param.name = require_key(j, "name").get<std::string>();
    param.config.cores = require_int(j, "cores");
    param.config.registers_per_core = require_int(j, "registers_per_core");
    param.config.variables = require_int(j, "variables");
    param.config.values = require_int(j, "values");
    param.config.max_ops_per_core = require_int(j, "max_ops_per_core");
    if (j.contains("initial_variable_value"))
      param.config.initial_variable_value = require_int(j, "initial_variable_value");
    param.config.validate();

    param.mcm = memory_model_from(require_key(j, "mcm").get<std::string>());

    if (j.contains("final")) {
      const ordered_json& final_spec = require_key(j, "final");
      if (final_spec.contains("registers")) {
        for (const auto& [key, value] : final_spec["registers"].items()) {
          ConditionAtom atom = parse_condition_atom(key + "=0", 0, [](std::string_view) { return 0; });
          if (!atom.is_register)
            throw ParseError("final register keys must look like '0:EAX', got '" + key + "'");
          auto [it, inserted] = param.final_spec.registers.emplace(
              std::make_pair(atom.core, atom.reg), parse_param_content(value));
          if (!inserted) throw ParseError("duplicate final register cell '" + key + "'");
        }
      }
      if (final_spec.contains("variables")) {
        for (const auto& [key, value] : final_spec["variables"].items()) {
          if (!value.is_number_integer() || value.get<int>() < 0)
            throw ParseError("final variable values must be non-negative integers");
          param.final_spec.variables[param_variable_id(key, param.config)] = value.get<int>();
        }
      }
      param.final_spec.validate(param.config);
    }

    std::unordered_map<std::string, bool> seen_includes;
    if (j.contains("include_programs")) {
      for (const auto& entry : j["include_programs"]) {
        Program program = parse_param_program(entry, param.config);
        std::string key = encode_program(program);
        if (seen_includes.count(key)) continue;  // a set: duplicates collapse
        seen_includes.emplace(key, true);
        param.include_names.push_back(entry.contains("name") ? entry["name"].get<std::string>()
                                                             : std::string());
        param.include_programs.push_back(std::move(program));
      }
    }
    if (j.contains("exclude_programs")) {
      for (const auto& entry : j["exclude_programs"])
        param.exclude_programs.push_back(parse_param_program(entry, param.config));
    }
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid parameter file: ") + e.what());
  }
  return param;
}

ParamFile parse_param_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open parameter file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_param(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

std::string render_instruction(const Operation& op, const SymbolTable& symbols) {
  std::ostringstream out;
  if (is_load(op)) {
    const Load& load = as_load(op);
    out << "MOV " << register_name(load.reg) << ",[" << symbols.variable_name(load.var) << "]";
  } else {
    const Store& store = as_store(op);
    out << "MOV [" << symbols.variable_name(store.var) << "],$" << store.value;
  }
  return out.str();
}

std::string render_register_cell(CoreId core, RegisterId reg) {
  return std::to_string(core) + ":" + std::string(register_name(reg));
}

std::string render_content(RegisterContent content) {
  return content.is_initial() ? "INITIAL" : std::to_string(content.value());
}

std::string render_state(const MachineState& state, const SymbolTable& symbols) {
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << " /\\ ";
    first = false;
  };
  for (int c = 0; c < state.core_count(); ++c)
    for (int r = 0; r < state.registers_per_core; ++r) {
      sep();
      out << render_register_cell(c, r) << "=" << render_content(state.reg(c, r));
    }
  for (size_t v = 0; v < state.variables.size(); ++v) {
    sep();
    out << symbols.variable_name(static_cast<VariableId>(v)) << "=" << state.variables[v];
  }
  return out.str();
}

std::string render_spec(const FinalStateSpec& spec, const SymbolTable& symbols) {
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << " /\\ ";
    first = false;
  };
  for (const auto& [var, value] : spec.variables) {
    sep();
    out << symbols.variable_name(var) << "=" << value;
  }
  for (const auto& [cell, content] : spec.registers) {
    sep();
    out << render_register_cell(cell.first, cell.second) << "=" << render_content(content);
  }
  return out.str();
}

std::string render_condition(Expectation expectation, const FinalStateSpec& spec,
                             const SymbolTable& symbols) {
  std::string body = render_spec(spec, symbols);
  std::string prefix = expectation == Expectation::Forbidden ? "~exists" : "exists";
  return prefix + " (" + body + ")";
}

std::string render_witness_block(const LitmusConfig& config, const Program& program,
                                 const SymbolTable& symbols, const Execution& execution,
                                 std::string_view indent) {
  MachineState final = replay_final(config, program, execution);
  std::ostringstream out;
  for (EventId e : execution)
    out << indent << "P" << e.core << "  " << render_instruction(operation_at(program, e), symbols)
        << "\n";
  out << indent << std::string(32, '-') << "\n";
  out << indent << render_state(final, symbols) << "\n";
  return out.str();
}

bool expectation_confirmed(Expectation expectation, bool reachable) {
  switch (expectation) {
    case Expectation::Allowed:
      return reachable;
    case Expectation::Forbidden:
      return !reachable;
    default:
      return true;
  }
}

namespace {

ordered_json witness_json(const Program& program, const SymbolTable& symbols,
                          const Execution& execution) {
  ordered_json events = ordered_json::array();
  for (EventId e : execution) {
    ordered_json event;
    event["core"] = e.core;
    event["index"] = e.index;
    event["instruction"] = render_instruction(operation_at(program, e), symbols);
    events.push_back(std::move(event));
  }
  return events;
}

ordered_json state_json(const MachineState& state, const SymbolTable& symbols) {
  ordered_json registers = ordered_json::object();
  for (int c = 0; c < state.core_count(); ++c)
    for (int r = 0; r < state.registers_per_core; ++r) {
      RegisterContent content = state.reg(c, r);
      if (content.is_initial())
        registers[render_register_cell(c, r)] = "INITIAL";
      else
        registers[render_register_cell(c, r)] = content.value();
    }
  ordered_json variables = ordered_json::object();
  for (size_t v = 0; v < state.variables.size(); ++v)
    variables[symbols.variable_name(static_cast<VariableId>(v))] = state.variables[v];
  ordered_json state_obj;
  state_obj["registers"] = std::move(registers);
  state_obj["variables"] = std::move(variables);
  return state_obj;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string emit_report(const CheckReport& report, ReportFormat format) {
  bool reachable = report.witness.has_value();
  bool confirmed = expectation_confirmed(report.test.expectation, reachable);
  std::string condition =
      render_condition(report.test.expectation, report.test.condition, report.test.symbols);

  if (format == ReportFormat::Structured) {
    ordered_json j;
    j["command"] = "check";
    j["test"] = report.test.name;
    j["mcm"] = std::string(name_of(report.mcm));
    j["condition"] = condition;
    j["reachable"] = reachable;
    j["expectation"] = std::string(name_of(report.test.expectation));
    j["confirmed"] = confirmed;
    if (report.show_witness && reachable)
      j["witness"] = witness_json(report.test.program, report.test.symbols, *report.witness);
    return dump(j);
  }

  std::ostringstream out;
  out << "test:        " << report.test.name << "\n";
  out << "mcm:         " << name_of(report.mcm) << "\n";
  out << "condition:   " << condition << "\n";
  out << "result:      "
      << (reachable ? "reachable (witness found)" : "unreachable (no valid execution matches)")
      << "\n";
  if (report.test.expectation == Expectation::Unknown)
    out << "expectation: Unknown\n";
  else
    out << "expectation: " << name_of(report.test.expectation) << " -> "
        << (confirmed ? "confirmed" : "violated") << "\n";
  if (report.show_witness && reachable)
    out << "witness:\n"
        << render_witness_block(report.test.config, report.test.program, report.test.symbols,
                                *report.witness);
  return out.str();
}

std::string emit_report(const OutcomesReport& report, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    ordered_json j;
    j["command"] = "outcomes";
    j["test"] = report.test.name;
    j["mcm"] = std::string(name_of(report.mcm));
    j["respect_condition"] = report.respect_condition;
    j["executions"] = report.outcomes.executions;
    j["distinct_final_states"] = report.outcomes.outcomes.size();
    if (!report.count_only) {
      ordered_json outcomes = ordered_json::array();
      for (const Outcome& outcome : report.outcomes.outcomes) {
        ordered_json entry;
        entry["state"] = state_json(outcome.state, report.test.symbols);
        entry["witness"] = witness_json(report.test.program, report.test.symbols, outcome.witness);
        outcomes.push_back(std::move(entry));
      }
      j["outcomes"] = std::move(outcomes);
    }
    return dump(j);
  }

  std::ostringstream out;
  out << "test:        " << report.test.name << "\n";
  out << "mcm:         " << name_of(report.mcm) << "\n";
  if (report.respect_condition)
    out << "condition:   "
        << render_condition(report.test.expectation, report.test.condition, report.test.symbols)
        << " (outcomes restricted)\n";
  out << "executions:  " << report.outcomes.executions << "\n";
  out << "distinct final states: " << report.outcomes.outcomes.size() << "\n";
  if (!report.count_only) {
    if (report.outcomes.outcomes.empty())
      out << "  (no valid execution)\n";
    else
      for (const Outcome& outcome : report.outcomes.outcomes)
        out << "  " << render_state(outcome.state, report.test.symbols) << "\n";
  }
  return out.str();
}

std::string emit_report(const GenerationSummary& report, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    ordered_json j;
    j["command"] = "generate";
    j["param"] = report.param_name;
    j["mcm"] = std::string(name_of(report.mcm));
    j["values_exclude_initial"] = report.values_exclude_initial;
    j["candidates"] = report.candidates;
    j["accepted"] = report.test_names.size();
    j["tests"] = report.test_names;
    return dump(j);
  }

  std::ostringstream out;
  out << "param:       " << report.param_name << "\n";
  out << "mcm:         " << name_of(report.mcm) << "\n";
  out << "store value space: "
      << (report.values_exclude_initial ? "excludes the initial value" : "full") << "\n";
  out << "candidates:  " << report.candidates << "\n";
  out << "accepted:    " << report.test_names.size() << "\n";
  return out.str();
}

std::string emit_report(const ComparisonSummary& report, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    ordered_json j;
    j["command"] = "compare";
    j["param"] = report.param_name;
    j["strict"] = std::string(name_of(report.strict));
    j["relaxed"] = std::string(name_of(report.relaxed));
    j["values_exclude_initial"] = report.values_exclude_initial;
    j["candidates"] = report.candidates;
    j["relaxed_accepted"] = report.both.size() + report.relaxed_only.size();
    j["both"] = report.both.size();
    j["relaxed_only"] = report.relaxed_only.size();
    j["neither"] = report.neither.size();
    j["both_tests"] = report.both;
    j["relaxed_only_tests"] = report.relaxed_only;
    return dump(j);
  }

  std::ostringstream out;
  out << "param:       " << report.param_name << "\n";
  out << "strict:      " << name_of(report.strict) << "\n";
  out << "relaxed:     " << name_of(report.relaxed) << "\n";
  out << "store value space: "
      << (report.values_exclude_initial ? "excludes the initial value" : "full") << "\n";
  out << "candidates:  " << report.candidates << "\n";
  out << "accepted under " << name_of(report.relaxed) << ":  "
      << report.both.size() + report.relaxed_only.size() << "\n";
  out << "valid under both:      " << report.both.size() << "\n";
  out << "valid only under " << name_of(report.relaxed) << ": " << report.relaxed_only.size()
      << "\n";
  out << "valid under neither:   " << report.neither.size() << "\n";
  return out.str();
}

}  // namespace mcm
