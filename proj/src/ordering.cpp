#include "mcm/ordering.hpp"

namespace mcm {

namespace {

class ScPolicy final : public OrderingPolicy {
 public:
  std::string_view name() const override { return "SC"; }
  bool preserved(const Operation&, const Operation&) const override { return true; }
};

class TsoPolicy final : public OrderingPolicy {
 public:
  std::string_view name() const override { return "TSO"; }
  bool preserved(const Operation& first, const Operation& second) const override {
    return !(is_store(first) && is_load(second));
  }
};

const ScPolicy kSc;
const TsoPolicy kTso;

}  // namespace

const OrderingPolicy& policy_for(MemoryModel mcm) {
  return mcm == MemoryModel::SC ? static_cast<const OrderingPolicy&>(kSc)
                                : static_cast<const OrderingPolicy&>(kTso);
}

bool preserved(MemoryModel mcm, const Operation& first, const Operation& second) {
  return policy_for(mcm).preserved(first, second);
}

bool preserved_superset(MemoryModel strict, MemoryModel relaxed) {
  const Operation shapes[] = {Operation{Load{0, 0}}, Operation{Store{0, 0}}};
  for (const Operation& a : shapes)
    for (const Operation& b : shapes)
      if (preserved(relaxed, a, b) && !preserved(strict, a, b)) return false;
  return true;
}

CorePartialOrder core_partial_order(MemoryModel mcm, const std::vector<Operation>& ops) {
  int n = static_cast<int>(ops.size());
  if (n < 1) throw ValidationError("partial order requires a non-empty operation sequence");
  if (n > 30) throw ValidationError("operation sequences beyond 30 operations are not supported");

  const OrderingPolicy& policy = policy_for(mcm);
  CorePartialOrder order;
  order.length = n;
  order.pred_mask.assign(n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (policy.preserved(ops[i], ops[j])) {
        order.pairs.emplace_back(i + 1, j + 1);
        order.pred_mask[j] |= 1u << i;
      }

  // The pairwise set must already be its own transitive closure; the search
  // relies on pred_mask listing every required predecessor.
  std::vector<uint32_t> closure = order.pred_mask;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (closure[j] >> i & 1u) closure[j] |= closure[i];
  if (closure != order.pred_mask)
    throw std::logic_error(std::string("ordering policy ") + std::string(policy.name()) +
                           " produced a partial order that is not transitively closed");

  // Keep the pair list sorted for reproducible iteration.
  std::sort(order.pairs.begin(), order.pairs.end());
  return order;
}

bool is_valid_execution(MemoryModel mcm, const Program& program, const Execution& execution) {
  return is_valid_execution(mcm, program, execution, nullptr);
}

bool is_valid_execution(MemoryModel mcm, const Program& program, const Execution& execution,
                        std::string* diagnostic) {
  auto fail = [&](const std::string& why) {
    if (diagnostic) *diagnostic = why;
    return false;
  };

  int total = program.total_ops();
  if (static_cast<int>(execution.size()) != total)
    return fail("execution has " + std::to_string(execution.size()) + " events, program has " +
                std::to_string(total));

  // Position of each event in the execution; -1 marks "not seen yet".
  std::vector<std::vector<int>> position(program.cores.size());
  for (size_t c = 0; c < program.cores.size(); ++c) position[c].assign(program.cores[c].size(), -1);
  for (int k = 0; k < total; ++k) {
    EventId e = execution[k];
    if (e.core < 0 || e.core >= static_cast<int>(program.cores.size()) || e.index < 1 ||
        e.index > static_cast<int>(program.cores[e.core].size()))
      return fail("execution names event (" + std::to_string(e.core) + "," +
                  std::to_string(e.index) + ") which does not exist in the program");
    if (position[e.core][e.index - 1] != -1)
      return fail("event (" + std::to_string(e.core) + "," + std::to_string(e.index) +
                  ") appears more than once");
    position[e.core][e.index - 1] = k;
  }

  for (int c = 0; c < static_cast<int>(program.cores.size()); ++c) {
    CorePartialOrder order = core_partial_order(mcm, program.cores[c]);
    for (auto [i, j] : order.pairs)
      if (position[c][i - 1] > position[c][j - 1])
        return fail("P" + std::to_string(c) + ": operations " + std::to_string(i) + " and " +
                    std::to_string(j) + " are inverted, but " + std::string(name_of(mcm)) +
                    " preserves their program order");
  }
  return true;
}

}  // namespace mcm
