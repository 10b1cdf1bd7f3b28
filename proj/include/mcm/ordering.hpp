#pragma once

#include <cstdint>
#include <utility>

#include "mcm/model.hpp"

namespace mcm {

// Per-model ordering policy over same-core program-order pairs. `first`
// precedes `second` in program order; preserved() decides whether that order
// must survive into the memory order. The decision may only depend on the two
// operations themselves, never on execution state. New models plug in by
// supplying another preserved function.
class OrderingPolicy {
 public:
  virtual ~OrderingPolicy() = default;
  virtual std::string_view name() const = 0;
  virtual bool preserved(const Operation& first, const Operation& second) const = 0;
};

const OrderingPolicy& policy_for(MemoryModel mcm);

// SC preserves every pair; TSO preserves every pair except Store -> Load.
bool preserved(MemoryModel mcm, const Operation& first, const Operation& second);

// True iff `strict` preserves every pair `relaxed` preserves, over all four
// load/store shapes. SC/TSO satisfy preserved_superset(SC, TSO).
bool preserved_superset(MemoryModel strict, MemoryModel relaxed);

// The must-be-ordered index pairs of one core's sequence. Indices are
// 1-based; pairs (i, j) always have i < j. pred_mask holds, per 0-based
// operation index, the bitmask of 0-based indices required to come earlier.
struct CorePartialOrder {
  int length = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<uint32_t> pred_mask;

  bool ordered(int i, int j) const {  // 1-based, requires i < j
    return j >= 1 && j <= length && i >= 1 && (pred_mask[j - 1] >> (i - 1) & 1u) != 0;
  }
};

// Pairwise application of preserved(). The result is verified to be
// transitively closed (it is, for SC and TSO) and a std::logic_error is
// raised if a policy ever breaks that.
CorePartialOrder core_partial_order(MemoryModel mcm, const std::vector<Operation>& ops);

// True iff execution is a permutation of events_of(program) and every
// preserved same-core pair appears in program order. The diagnostic overload
// names the first violation.
bool is_valid_execution(MemoryModel mcm, const Program& program, const Execution& execution);
bool is_valid_execution(MemoryModel mcm, const Program& program, const Execution& execution,
                        std::string* diagnostic);

}  // namespace mcm
