#include "mcm/engine.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"

namespace mcm {

namespace {

constexpr int kMaxSearchEvents = 20;  // keeps execution counts inside uint64_t
constexpr int kMaxOracleEvents = 9;   // factorial blow-up guard

// Validated search input: the per-core partial orders of the chosen model
// plus flat lookup tables for the hot loop.
struct Prepared {
  const LitmusConfig* config = nullptr;
  const Program* program = nullptr;
  int cores = 0;
  int total_ops = 0;
  std::vector<int> core_len;
  std::vector<std::vector<uint32_t>> pred;  // per core, per 0-based index
};

Prepared prepare(const LitmusConfig& config, const Program& program, MemoryModel mcm) {
  config.validate(program);
  Prepared prep;
  prep.config = &config;
  prep.program = &program;
  prep.cores = static_cast<int>(program.cores.size());
  prep.total_ops = program.total_ops();
  if (prep.total_ops > kMaxSearchEvents)
    throw ValidationError("programs beyond " + std::to_string(kMaxSearchEvents) +
                          " events are not supported by the search");
  prep.core_len.resize(prep.cores);
  prep.pred.resize(prep.cores);
  for (int c = 0; c < prep.cores; ++c) {
    prep.core_len[c] = static_cast<int>(program.cores[c].size());
    prep.pred[c] = core_partial_order(mcm, program.cores[c]).pred_mask;
  }
  return prep;
}

// Final-state spec flattened onto vector indices for cheap leaf checks.
struct CompiledSpec {
  std::vector<std::pair<int, RegisterContent>> regs;
  std::vector<std::pair<int, Value>> vars;

  CompiledSpec(const FinalStateSpec& spec, const MachineState& shape) {
    for (const auto& [cell, content] : spec.registers)
      regs.emplace_back(shape.reg_index(cell.first, cell.second), content);
    for (const auto& [var, value] : spec.variables) vars.emplace_back(var, value);
  }

  bool matches(const MachineState& state) const {
    for (const auto& [index, content] : regs)
      if (state.registers[index] != content) return false;
    for (const auto& [index, value] : vars)
      if (state.variables[index] != value) return false;
    return true;
  }
};

struct Undo {
  bool is_reg = false;
  int index = 0;
  RegisterContent old_reg;
  Value old_var = 0;
};

Undo apply_in_place(MachineState& state, EventId e, const Operation& op) {
  Undo undo;
  if (is_load(op)) {
    const Load& load = as_load(op);
    undo.is_reg = true;
    undo.index = state.reg_index(e.core, load.reg);
    undo.old_reg = state.registers[undo.index];
    state.registers[undo.index] = RegisterContent::of(state.variables[load.var]);
  } else {
    const Store& store = as_store(op);
    undo.index = store.var;
    undo.old_var = state.variables[undo.index];
    state.variables[undo.index] = store.value;
  }
  return undo;
}

void revert(MachineState& state, const Undo& undo) {
  if (undo.is_reg)
    state.registers[undo.index] = undo.old_reg;
  else
    state.variables[undo.index] = undo.old_var;
}

// Downward-closed set of already-emitted operation indices, one bitmask per
// core. An index is extendable once all of its partial-order predecessors
// are emitted, so extending only ever grows linear-extension prefixes.
struct Frontier {
  std::vector<uint32_t> emitted;

  explicit Frontier(int cores) : emitted(cores, 0) {}

  bool extendable(const Prepared& prep, int core, int i) const {
    uint32_t mask = emitted[core];
    return (mask >> i & 1u) == 0 && (mask & prep.pred[core][i]) == prep.pred[core][i];
  }

  void add(EventId e) { emitted[e.core] |= 1u << (e.index - 1); }
  void remove(EventId e) { emitted[e.core] &= ~(1u << (e.index - 1)); }
};

// Search position: the frontier plus the machine state it produced. Two
// positions with equal keys root identical subtrees, which is what makes
// memoization sound.
struct SearchNode {
  const Prepared& prep;
  Frontier frontier;
  MachineState state;
  Execution path;
  int remaining;

  explicit SearchNode(const Prepared& prep_)
      : prep(prep_),
        frontier(prep_.cores),
        state(initial_state(*prep_.config)),
        remaining(prep_.total_ops) {
    path.reserve(prep_.total_ops);
  }

  bool extendable(int core, int i) const { return frontier.extendable(prep, core, i); }

  void step(EventId e) {
    frontier.add(e);
    path.push_back(e);
    --remaining;
  }

  void unstep(EventId e) {
    frontier.remove(e);
    path.pop_back();
    ++remaining;
  }

  std::string key() const {
    std::string out;
    out.reserve(frontier.emitted.size() * 4 + state.registers.size() + state.variables.size());
    for (uint32_t mask : frontier.emitted)
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>(mask >> (8 * b) & 0xFF));
    for (RegisterContent rc : state.registers)
      out.push_back(rc.is_initial() ? static_cast<char>(0xFF)
                                    : static_cast<char>(rc.value() & 0xFF));
    for (Value v : state.variables) out.push_back(static_cast<char>(v & 0xFF));
    return out;
  }
};

using OutcomeMap = std::map<MachineState, Execution, StateLess>;

// Counts executions and records each distinct final state with the first
// path that reaches it. With memoization, a subtree whose key was already
// explored contributes its cached count and no new outcomes.
struct OutcomeWalker {
  SearchNode node;
  bool memoize;
  std::unordered_map<std::string, uint64_t> memo;
  OutcomeMap found;

  OutcomeWalker(const Prepared& prep, bool memoize_) : node(prep), memoize(memoize_) {}

  uint64_t walk() {
    if (node.remaining == 0) {
      found.emplace(node.state, node.path);
      return 1;
    }
    std::string key;
    if (memoize) {
      key = node.key();
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    uint64_t count = 0;
    const Prepared& prep = node.prep;
    for (int c = 0; c < prep.cores; ++c)
      for (int i = 0; i < prep.core_len[c]; ++i) {
        if (!node.extendable(c, i)) continue;
        EventId e{c, i + 1};
        const Operation& op = prep.program->cores[c][i];
        node.step(e);
        Undo undo = apply_in_place(node.state, e, op);
        count += walk();
        revert(node.state, undo);
        node.unstep(e);
      }
    if (memoize) memo.emplace(std::move(key), count);
    return count;
  }
};

std::vector<EventId> root_branches(const Prepared& prep) {
  std::vector<EventId> branches;
  SearchNode probe(prep);
  for (int c = 0; c < prep.cores; ++c)
    for (int i = 0; i < prep.core_len[c]; ++i)
      if (probe.extendable(c, i)) branches.push_back(EventId{c, i + 1});
  return branches;
}

// Existence search with a memo of positions known not to reach the spec.
struct WitnessWalker {
  SearchNode node;
  const CompiledSpec& spec;
  bool memoize;
  std::unordered_set<std::string> dead;

  WitnessWalker(const Prepared& prep, const CompiledSpec& spec_, bool memoize_)
      : node(prep), spec(spec_), memoize(memoize_) {}

  bool walk() {
    if (node.remaining == 0) return spec.matches(node.state);
    std::string key;
    if (memoize) {
      key = node.key();
      if (dead.count(key)) return false;
    }
    const Prepared& prep = node.prep;
    for (int c = 0; c < prep.cores; ++c)
      for (int i = 0; i < prep.core_len[c]; ++i) {
        if (!node.extendable(c, i)) continue;
        EventId e{c, i + 1};
        const Operation& op = prep.program->cores[c][i];
        node.step(e);
        Undo undo = apply_in_place(node.state, e, op);
        if (walk()) return true;
        revert(node.state, undo);
        node.unstep(e);
      }
    if (memoize) dead.insert(std::move(key));
    return false;
  }
};

}  // namespace

uint64_t for_each_execution(const LitmusConfig& config, const Program& program, MemoryModel mcm,
                            const std::function<bool(const Execution&)>& visit) {
  Prepared prep = prepare(config, program, mcm);
  SearchNode node(prep);
  uint64_t visited = 0;
  bool stop = false;

  auto dfs = [&](auto&& self) -> void {
    if (stop) return;
    if (node.remaining == 0) {
      ++visited;
      if (!visit(node.path)) stop = true;
      return;
    }
    for (int c = 0; c < prep.cores && !stop; ++c)
      for (int i = 0; i < prep.core_len[c] && !stop; ++i) {
        if (!node.extendable(c, i)) continue;
        EventId e{c, i + 1};
        node.step(e);
        self(self);
        node.unstep(e);
      }
  };
  dfs(dfs);
  return visited;
}

std::vector<Execution> enumerate_executions(const LitmusConfig& config, const Program& program,
                                            MemoryModel mcm) {
  std::vector<Execution> all;
  for_each_execution(config, program, mcm, [&](const Execution& e) {
    all.push_back(e);
    return true;
  });
  return all;
}

std::vector<Execution> oracle_executions(const LitmusConfig& config, const Program& program,
                                         MemoryModel mcm) {
  config.validate(program);
  int total = program.total_ops();
  if (total > kMaxOracleEvents)
    throw ValidationError("oracle refuses programs beyond " + std::to_string(kMaxOracleEvents) +
                          " events (" + std::to_string(total) + " requested)");

  std::vector<CorePartialOrder> orders;
  orders.reserve(program.cores.size());
  for (const auto& ops : program.cores) orders.push_back(core_partial_order(mcm, ops));

  std::vector<EventId> permutation = events_of(program);  // already sorted ascending
  std::vector<std::vector<int>> position(program.cores.size());
  for (size_t c = 0; c < program.cores.size(); ++c) position[c].assign(program.cores[c].size(), 0);

  std::vector<Execution> valid;
  do {
    for (int k = 0; k < total; ++k) position[permutation[k].core][permutation[k].index - 1] = k;
    bool ok = true;
    for (size_t c = 0; c < orders.size() && ok; ++c)
      for (auto [i, j] : orders[c].pairs)
        if (position[c][i - 1] > position[c][j - 1]) {
          ok = false;
          break;
        }
    if (ok) valid.push_back(permutation);
  } while (std::next_permutation(permutation.begin(), permutation.end()));
  return valid;
}

bool OutcomeSet::contains(const MachineState& state) const {
  auto it = std::lower_bound(outcomes.begin(), outcomes.end(), state,
                             [](const Outcome& o, const MachineState& s) { return state_less(o.state, s); });
  return it != outcomes.end() && it->state == state;
}

OutcomeSet reachable_final_states(const LitmusConfig& config, const Program& program,
                                  MemoryModel mcm, const SearchOptions& options) {
  Prepared prep = prepare(config, program, mcm);

  OutcomeMap merged;
  uint64_t executions = 0;

  std::vector<EventId> branches = root_branches(prep);
  if (options.threads <= 1 || branches.size() <= 1) {
    OutcomeWalker walker(prep, options.memoize);
    executions = walker.walk();
    merged = std::move(walker.found);
  } else {
    // One independent walker per first event; merging in branch order keeps
    // the witness-per-state identical to the sequential walk.
    std::vector<OutcomeMap> branch_found(branches.size());
    std::vector<uint64_t> branch_count(branches.size(), 0);
    detail::parallel_for_blocks(branches.size(), options.threads, [&](uint64_t b) {
      OutcomeWalker walker(prep, options.memoize);
      EventId e = branches[b];
      const Operation& op = prep.program->cores[e.core][e.index - 1];
      walker.node.step(e);
      apply_in_place(walker.node.state, e, op);
      branch_count[b] = walker.walk();
      branch_found[b] = std::move(walker.found);
    });
    for (size_t b = 0; b < branches.size(); ++b) {
      executions += branch_count[b];
      for (auto& [state, witness] : branch_found[b]) merged.emplace(state, std::move(witness));
    }
  }

  OutcomeSet result;
  result.executions = executions;
  result.outcomes.reserve(merged.size());
  for (auto& [state, witness] : merged)
    result.outcomes.push_back(Outcome{state, std::move(witness)});
  return result;
}

std::optional<Execution> check_allowed(const LitmusConfig& config, const Program& program,
                                       MemoryModel mcm, const FinalStateSpec& spec,
                                       const SearchOptions& options) {
  Prepared prep = prepare(config, program, mcm);
  spec.validate(config);

  CompiledSpec compiled(spec, initial_state(config));
  WitnessWalker walker(prep, compiled, options.memoize);
  if (walker.walk()) return walker.node.path;
  return std::nullopt;
}

CountStats count_stats(const LitmusConfig& config, const Program& program, MemoryModel mcm,
                       const SearchOptions& options) {
  OutcomeSet set = reachable_final_states(config, program, mcm, options);
  return CountStats{set.executions, set.outcomes.size()};
}

}  // namespace mcm
