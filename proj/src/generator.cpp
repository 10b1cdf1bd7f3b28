#include "mcm/generator.hpp"

#include <algorithm>
#include <unordered_set>

#include "mcm/ordering.hpp"
#include "mcm/semantics.hpp"
#include "parallel.hpp"

namespace mcm {

namespace {

constexpr uint64_t kMaxEnumeration = 1'000'000'000ull;  // candidate count guard
constexpr uint64_t kBlock = 256;                        // programs per work unit

// Sequence counts per core: number of operation sequences of each length
// 1..max, plus the running totals used for rank decoding.
struct SequenceSpace {
  std::vector<Operation> ops;
  uint64_t sequences = 0;  // sum over lengths of |ops|^len

  explicit SequenceSpace(const LitmusConfig& config, bool exclude_initial)
      : ops(operation_space(config, exclude_initial)) {
    uint64_t block = 1;
    for (int len = 1; len <= config.max_ops_per_core; ++len) {
      if (block > kMaxEnumeration / ops.size())
        throw ValidationError("program space too large to enumerate");
      block *= ops.size();
      if (sequences > kMaxEnumeration - block)
        throw ValidationError("program space too large to enumerate");
      sequences += block;
    }
  }

  // Shorter sequences first; within a length, lexicographic by operation
  // index, most significant first.
  std::vector<Operation> sequence_at(uint64_t rank) const {
    uint64_t m = ops.size();
    uint64_t block = m;
    int len = 1;
    while (rank >= block) {
      rank -= block;
      block *= m;
      ++len;
    }
    std::vector<Operation> seq(len);
    for (int k = len - 1; k >= 0; --k) {
      seq[k] = ops[rank % m];
      rank /= m;
    }
    return seq;
  }
};

std::string hex16(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

struct Candidates {
  uint64_t count = 0;
  std::function<Program(uint64_t)> at;
  std::function<std::string(uint64_t, const Program&)> name_of;
};

Candidates candidate_source(const GenerationConfig& config, bool exclude_initial) {
  Candidates c;
  if (!config.include_programs.empty()) {
    c.count = config.include_programs.size();
    c.at = [&config](uint64_t i) { return config.include_programs[i]; };
    c.name_of = [&config](uint64_t i, const Program& p) {
      if (i < config.include_names.size() && !config.include_names[i].empty())
        return config.include_names[i];
      return systematic_name(p);
    };
  } else {
    c.count = program_count(config.config, exclude_initial);
    c.at = [&config, exclude_initial](uint64_t rank) {
      return program_at(config.config, rank, exclude_initial);
    };
    c.name_of = [](uint64_t, const Program& p) { return systematic_name(p); };
  }
  return c;
}

}  // namespace

std::vector<Operation> operation_space(const LitmusConfig& config, bool values_exclude_initial) {
  config.validate();
  std::vector<Operation> ops;
  for (RegisterId r = 0; r < config.registers_per_core; ++r)
    for (VariableId v = 0; v < config.variables; ++v) ops.push_back(Load{r, v});
  for (VariableId v = 0; v < config.variables; ++v)
    for (Value val = 0; val < config.values; ++val) {
      if (values_exclude_initial && val == config.initial_variable_value) continue;
      ops.push_back(Store{v, val});
    }
  return ops;
}

uint64_t program_count(const LitmusConfig& config, bool values_exclude_initial) {
  SequenceSpace space(config, values_exclude_initial);
  uint64_t count = 1;
  for (int c = 0; c < config.cores; ++c) {
    if (count > kMaxEnumeration / space.sequences)
      throw ValidationError("program space too large to enumerate");
    count *= space.sequences;
  }
  return count;
}

Program program_at(const LitmusConfig& config, uint64_t rank, bool values_exclude_initial) {
  SequenceSpace space(config, values_exclude_initial);
  uint64_t total = program_count(config, values_exclude_initial);
  if (rank >= total)
    throw ValidationError("program rank " + std::to_string(rank) + " out of range (" +
                          std::to_string(total) + " programs)");

  // Core 0 is the most significant digit.
  std::vector<uint64_t> digit(config.cores);
  for (int c = config.cores - 1; c >= 0; --c) {
    digit[c] = rank % space.sequences;
    rank /= space.sequences;
  }
  Program program;
  program.cores.reserve(config.cores);
  for (int c = 0; c < config.cores; ++c) program.cores.push_back(space.sequence_at(digit[c]));
  return program;
}

void enumerate_programs(const LitmusConfig& config,
                        const std::function<bool(const Program&)>& visit,
                        bool values_exclude_initial) {
  uint64_t total = program_count(config, values_exclude_initial);
  for (uint64_t rank = 0; rank < total; ++rank)
    if (!visit(program_at(config, rank, values_exclude_initial))) return;
}

std::string systematic_name(const Program& program) {
  return "gen-" + hex16(program_hash(program));
}

GenerationReport generate(const GenerationConfig& config, const GeneratorOptions& options) {
  config.validate();

  std::unordered_set<std::string> excluded;
  for (const Program& p : config.exclude_programs) excluded.insert(encode_program(p));

  Candidates candidates = candidate_source(config, options.values_exclude_initial);

  SearchOptions search;  // candidate-level parallelism only; keep each check sequential
  search.memoize = options.search.memoize;

  uint64_t blocks = (candidates.count + kBlock - 1) / kBlock;
  std::vector<std::vector<AcceptedTest>> block_accepted(blocks);

  detail::parallel_for_blocks(blocks, options.search.threads, [&](uint64_t b) {
    uint64_t begin = b * kBlock;
    uint64_t end = std::min(candidates.count, begin + kBlock);
    for (uint64_t i = begin; i < end; ++i) {
      Program program = candidates.at(i);
      if (!excluded.empty() && excluded.count(encode_program(program))) continue;
      auto witness = check_allowed(config.config, program, config.mcm, config.final_spec, search);
      if (!witness) continue;
      std::string name = candidates.name_of(i, program);
      block_accepted[b].push_back(
          AcceptedTest{std::move(program), std::move(name), std::move(*witness)});
    }
  });

  GenerationReport report;
  report.candidates = candidates.count;
  for (auto& block : block_accepted)
    for (auto& accepted : block) report.accepted.push_back(std::move(accepted));
  return report;
}

ComparisonReport compare_models(const LitmusConfig& config, const std::vector<Program>& programs,
                                const std::vector<std::string>& names, MemoryModel strict,
                                MemoryModel relaxed, const FinalStateSpec& final_spec,
                                const GeneratorOptions& options) {
  if (!preserved_superset(strict, relaxed))
    throw ValidationError(std::string(name_of(strict)) + " is not a restriction of " +
                          std::string(name_of(relaxed)) + "; cannot compare in this direction");
  config.validate();
  final_spec.validate(config);
  if (!names.empty() && names.size() != programs.size())
    throw ValidationError("program names must be empty or match the program count");

  SearchOptions search;
  search.memoize = options.search.memoize;

  enum class Cell { Both, RelaxedOnly, Neither };
  std::vector<ComparisonEntry> entries(programs.size());
  std::vector<Cell> cell(programs.size());

  uint64_t blocks = (programs.size() + kBlock - 1) / kBlock;
  detail::parallel_for_blocks(blocks, options.search.threads, [&](uint64_t b) {
    uint64_t begin = b * kBlock;
    uint64_t end = std::min<uint64_t>(programs.size(), begin + kBlock);
    for (uint64_t i = begin; i < end; ++i) {
      const Program& program = programs[i];
      config.validate(program);
      ComparisonEntry entry;
      entry.program = program;
      entry.name = !names.empty() && !names[i].empty() ? names[i] : systematic_name(program);
      entry.strict_witness = check_allowed(config, program, strict, final_spec, search);
      if (entry.strict_witness) {
        if (!is_valid_execution(relaxed, program, *entry.strict_witness))
          throw std::logic_error("strict witness rejected by the relaxed model");
        entry.relaxed_witness = entry.strict_witness;
        cell[i] = Cell::Both;
      } else {
        entry.relaxed_witness = check_allowed(config, program, relaxed, final_spec, search);
        cell[i] = entry.relaxed_witness ? Cell::RelaxedOnly : Cell::Neither;
      }
      entries[i] = std::move(entry);
    }
  });

  ComparisonReport report;
  for (size_t i = 0; i < entries.size(); ++i) {
    switch (cell[i]) {
      case Cell::Both:
        report.both.push_back(std::move(entries[i]));
        break;
      case Cell::RelaxedOnly:
        report.relaxed_only.push_back(std::move(entries[i]));
        break;
      case Cell::Neither:
        report.neither.push_back(std::move(entries[i]));
        break;
    }
  }
  return report;
}

}  // namespace mcm
