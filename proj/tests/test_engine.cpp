#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mcm/engine.hpp"
#include "support.hpp"

using namespace mcm;

namespace {

uint64_t factorial(int n) {
  uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

uint64_t multinomial(const Program& p) {
  uint64_t result = factorial(p.total_ops());
  for (const auto& ops : p.cores) result /= factorial(static_cast<int>(ops.size()));
  return result;
}

std::set<MachineState, StateLess> state_set(const OutcomeSet& outcomes) {
  std::set<MachineState, StateLess> states;
  for (const Outcome& o : outcomes.outcomes) states.insert(o.state);
  return states;
}

// Canonical IRIW: two writer cores, two reader cores reading the variables
// in opposite orders.
Program iriw_program() {
  Program p;
  p.cores = {{Store{0, 1}}, {Store{1, 1}}, {Load{0, 0}, Load{1, 1}}, {Load{0, 1}, Load{1, 0}}};
  return p;
}

LitmusConfig iriw_config() {
  LitmusConfig config;
  config.cores = 4;
  config.registers_per_core = 2;
  config.variables = 2;
  config.values = 2;
  config.max_ops_per_core = 2;
  return config;
}

// Canonical 3.SB: three cores, each storing to its own variable and loading
// the next one around the ring.
Program three_sb_program() {
  Program p;
  p.cores = {{Store{0, 1}, Load{0, 1}}, {Store{1, 1}, Load{0, 2}}, {Store{2, 1}, Load{0, 0}}};
  return p;
}

LitmusConfig three_sb_config() {
  LitmusConfig config;
  config.cores = 3;
  config.registers_per_core = 1;
  config.variables = 3;
  config.values = 2;
  config.max_ops_per_core = 2;
  return config;
}

}  // namespace

TEST_CASE("SB000a execution counts: 6 under SC, 24 under TSO") {
  LitmusConfig config = test::sb000a_config();
  Program sb = test::sb000a_program();

  std::vector<Execution> sc = enumerate_executions(config, sb, MemoryModel::SC);
  CHECK(sc.size() == 6);
  CHECK(std::is_sorted(sc.begin(), sc.end()));
  // Lexicographically first: plain program order.
  CHECK(sc.front() == Execution{{0, 1}, {0, 2}, {1, 1}, {1, 2}});

  std::vector<Execution> tso = enumerate_executions(config, sb, MemoryModel::TSO);
  CHECK(tso.size() == 24);  // both cores unordered: every permutation

  Program single;
  single.cores = {{Store{0, 1}, Load{0, 0}}};
  LitmusConfig single_config = config;
  single_config.cores = 1;
  CHECK(enumerate_executions(single_config, single, MemoryModel::SC).size() == 1);
}

TEST_CASE("oracle agrees with the frontier search on SB000a") {
  LitmusConfig config = test::sb000a_config();
  Program sb = test::sb000a_program();
  for (MemoryModel mcm : {MemoryModel::SC, MemoryModel::TSO})
    CHECK(oracle_executions(config, sb, mcm) == enumerate_executions(config, sb, mcm));

  Program tiny;
  tiny.cores = {{Load{0, 0}}};
  LitmusConfig tiny_config = config;
  tiny_config.cores = 1;
  CHECK(oracle_executions(tiny_config, tiny, MemoryModel::SC) ==
        std::vector<Execution>{Execution{{0, 1}}});
}

TEST_CASE("oracle refuses factorial blow-ups") {
  LitmusConfig config = test::sample_config();
  config.cores = 4;
  config.max_ops_per_core = 3;
  Program big;
  big.cores = {{Store{0, 1}, Store{0, 1}, Store{0, 1}},
               {Store{0, 1}, Store{0, 1}, Store{0, 1}},
               {Store{0, 1}, Store{0, 1}, Store{0, 1}},
               {Load{0, 0}}};
  CHECK(big.total_ops() == 10);
  CHECK_THROWS_AS(oracle_executions(config, big, MemoryModel::SC), ValidationError);
}

TEST_CASE("oracle equivalence on sampled programs") {
  std::mt19937_64 rng(17);
  LitmusConfig config = test::sample_config();
  for (int trial = 0; trial < 150; ++trial) {
    Program p = test::random_program(rng, config);
    for (MemoryModel mcm : {MemoryModel::SC, MemoryModel::TSO})
      CHECK(oracle_executions(config, p, mcm) == enumerate_executions(config, p, mcm));
  }
}

TEST_CASE("SB000a reachable final states under SC: exactly four states") {
  LitmusConfig config = test::sb000a_config();
  Program sb = test::sb000a_program();
  OutcomeSet sc = reachable_final_states(config, sb, MemoryModel::SC);
  CHECK(sc.executions == 6);

  auto v = [](Value value) { return RegisterContent::of(value); };
  std::set<MachineState, StateLess> expected;
  expected.insert(test::state_of(config, {{0, 0, v(1)}, {1, 0, v(2)}}, {{0, 2}}));
  expected.insert(test::state_of(config, {{0, 0, v(2)}, {1, 0, v(2)}}, {{0, 2}}));
  expected.insert(test::state_of(config, {{0, 0, v(1)}, {1, 0, v(2)}}, {{0, 1}}));
  expected.insert(test::state_of(config, {{0, 0, v(1)}, {1, 0, v(1)}}, {{0, 1}}));
  CHECK(state_set(sc) == expected);

  // Independent route: replay every oracle execution and deduplicate.
  std::set<MachineState, StateLess> via_oracle;
  for (const Execution& e : oracle_executions(config, sb, MemoryModel::SC))
    via_oracle.insert(replay_final(config, sb, e));
  CHECK(via_oracle == expected);

  // Witnesses replay to their states and are valid executions.
  for (const Outcome& outcome : sc.outcomes) {
    CHECK(is_valid_execution(MemoryModel::SC, sb, outcome.witness));
    CHECK(replay_final(config, sb, outcome.witness) == outcome.state);
  }
}

TEST_CASE("SB000a under TSO reaches a strict superset, including the stale read") {
  LitmusConfig config = test::sb000a_config();
  Program sb = test::sb000a_program();
  OutcomeSet sc = reachable_final_states(config, sb, MemoryModel::SC);
  OutcomeSet tso = reachable_final_states(config, sb, MemoryModel::TSO);

  CHECK(tso.executions == 24);
  for (const Outcome& outcome : sc.outcomes) CHECK(tso.contains(outcome.state));

  MachineState stale_read = test::state_of(
      config, {{0, 0, RegisterContent::of(1)}, {1, 0, RegisterContent::of(1)}}, {{0, 2}});
  CHECK_FALSE(sc.contains(stale_read));
  CHECK(tso.contains(stale_read));
  CHECK(tso.outcomes.size() >= 5);

  // Frozen from the oracle: replaying all 24 permutations yields 18 states.
  std::set<MachineState, StateLess> via_oracle;
  for (const Execution& e : oracle_executions(config, sb, MemoryModel::TSO))
    via_oracle.insert(replay_final(config, sb, e));
  CHECK(via_oracle.size() == 18);
  CHECK(state_set(tso) == via_oracle);
}

TEST_CASE("canonical 3.SB has exactly 7 distinct SC final states") {
  LitmusConfig config = three_sb_config();
  Program p = three_sb_program();
  CountStats sc = count_stats(config, p, MemoryModel::SC);
  CHECK(sc.distinct_final_states == 7);
  CHECK(sc.executions == 90);  // 6!/(2!2!2!)

  // Under TSO the all-zero read becomes reachable as well: all 8 register
  // combinations (variables always end at 1).
  CountStats tso = count_stats(config, p, MemoryModel::TSO);
  CHECK(tso.distinct_final_states == 8);
  CHECK(tso.executions == 720);
}

TEST_CASE("IRIW: SC and TSO agree exactly") {
  LitmusConfig config = iriw_config();
  Program p = iriw_program();
  OutcomeSet sc = reachable_final_states(config, p, MemoryModel::SC);
  OutcomeSet tso = reachable_final_states(config, p, MemoryModel::TSO);
  CHECK(sc.executions == tso.executions);
  CHECK(state_set(sc) == state_set(tso));

  CountStats sc_stats = count_stats(config, p, MemoryModel::SC);
  CountStats tso_stats = count_stats(config, p, MemoryModel::TSO);
  CHECK(sc_stats.executions == tso_stats.executions);
  CHECK(sc_stats.distinct_final_states == tso_stats.distinct_final_states);
}

TEST_CASE("check_allowed on the textbook SB000a conditions") {
  LitmusConfig config = test::sb000a_config();
  Program sb = test::sb000a_program();
  auto v = [](Value value) { return RegisterContent::of(value); };

  FinalStateSpec split_reads = test::reg_spec({{0, 0, v(1)}, {1, 0, v(2)}}, {{0, 2}});
  auto witness = check_allowed(config, sb, MemoryModel::SC, split_reads);
  REQUIRE(witness.has_value());
  CHECK(is_valid_execution(MemoryModel::SC, sb, *witness));
  CHECK(matches(replay_final(config, sb, *witness), split_reads));

  FinalStateSpec stale_read = test::reg_spec({{0, 0, v(1)}, {1, 0, v(1)}}, {{0, 2}});
  CHECK_FALSE(check_allowed(config, sb, MemoryModel::SC, stale_read).has_value());
  auto tso_witness = check_allowed(config, sb, MemoryModel::TSO, stale_read);
  REQUIRE(tso_witness.has_value());
  CHECK(is_valid_execution(MemoryModel::TSO, sb, *tso_witness));
  CHECK(matches(replay_final(config, sb, *tso_witness), stale_read));

  // Both loads first: reachable only with both Store->Load pairs relaxed.
  FinalStateSpec both_zero = test::reg_spec({{0, 0, v(0)}, {1, 0, v(0)}});
  CHECK_FALSE(check_allowed(config, sb, MemoryModel::SC, both_zero).has_value());
  CHECK(check_allowed(config, sb, MemoryModel::TSO, both_zero).has_value());
}

TEST_CASE("count_stats matches enumeration and the SC multinomial law") {
  std::mt19937_64 rng(23);
  LitmusConfig config = test::sample_config();
  for (int trial = 0; trial < 40; ++trial) {
    Program p = test::random_program(rng, config);
    for (MemoryModel mcm : {MemoryModel::SC, MemoryModel::TSO}) {
      CountStats stats = count_stats(config, p, mcm);
      OutcomeSet outcomes = reachable_final_states(config, p, mcm);
      CHECK(stats.executions == enumerate_executions(config, p, mcm).size());
      CHECK(stats.distinct_final_states == outcomes.outcomes.size());
      CHECK(stats.executions == outcomes.executions);
    }
    CHECK(count_stats(config, p, MemoryModel::SC).executions == multinomial(p));
  }
}

TEST_CASE("containment: SC executions and outcomes within TSO's") {
  std::mt19937_64 rng(29);
  LitmusConfig config = test::sample_config();
  for (int trial = 0; trial < 40; ++trial) {
    Program p = test::random_program(rng, config);
    std::vector<Execution> sc = enumerate_executions(config, p, MemoryModel::SC);
    std::vector<Execution> tso = enumerate_executions(config, p, MemoryModel::TSO);
    CHECK(std::includes(tso.begin(), tso.end(), sc.begin(), sc.end()));

    OutcomeSet sc_out = reachable_final_states(config, p, MemoryModel::SC);
    OutcomeSet tso_out = reachable_final_states(config, p, MemoryModel::TSO);
    for (const Outcome& outcome : sc_out.outcomes) CHECK(tso_out.contains(outcome.state));
  }
}

TEST_CASE("memoization and threading never change any result") {
  std::mt19937_64 rng(31);
  LitmusConfig config = test::sample_config();

  auto equal_outcomes = [](const OutcomeSet& a, const OutcomeSet& b) {
    if (a.executions != b.executions || a.outcomes.size() != b.outcomes.size()) return false;
    for (size_t i = 0; i < a.outcomes.size(); ++i)
      if (a.outcomes[i].state != b.outcomes[i].state ||
          a.outcomes[i].witness != b.outcomes[i].witness)
        return false;
    return true;
  };

  for (int trial = 0; trial < 25; ++trial) {
    Program p = test::random_program(rng, config);
    for (MemoryModel mcm : {MemoryModel::SC, MemoryModel::TSO}) {
      SearchOptions plain;
      plain.memoize = false;
      SearchOptions memo;
      SearchOptions threaded;
      threaded.threads = 4;
      SearchOptions threaded_plain;
      threaded_plain.threads = 4;
      threaded_plain.memoize = false;

      OutcomeSet reference = reachable_final_states(config, p, mcm, plain);
      CHECK(equal_outcomes(reference, reachable_final_states(config, p, mcm, memo)));
      CHECK(equal_outcomes(reference, reachable_final_states(config, p, mcm, threaded)));
      CHECK(equal_outcomes(reference, reachable_final_states(config, p, mcm, threaded_plain)));

      FinalStateSpec spec = test::reg_spec({{1, 0, RegisterContent::of(1)}});
      CHECK(check_allowed(config, p, mcm, spec, plain) == check_allowed(config, p, mcm, spec, memo));
    }
  }
}

TEST_CASE("memoized counting survives a deeper state space") {
  // 3 cores x 3 ops = 9 events; the memo table prunes heavily here while the
  // plain walk still visits every execution.
  LitmusConfig config;
  config.cores = 3;
  config.registers_per_core = 2;
  config.variables = 2;
  config.values = 2;
  config.max_ops_per_core = 3;

  Program p;
  p.cores = {{Store{0, 1}, Load{0, 0}, Load{1, 1}},
             {Store{1, 1}, Store{0, 0}, Load{0, 1}},
             {Load{0, 0}, Load{1, 1}, Store{1, 0}}};

  for (MemoryModel mcm : {MemoryModel::SC, MemoryModel::TSO}) {
    SearchOptions plain;
    plain.memoize = false;
    SearchOptions threaded;
    threaded.threads = 8;

    OutcomeSet reference = reachable_final_states(config, p, mcm, plain);
    OutcomeSet memoized = reachable_final_states(config, p, mcm);
    OutcomeSet parallel = reachable_final_states(config, p, mcm, threaded);

    CHECK(reference.executions == memoized.executions);
    CHECK(reference.executions == parallel.executions);
    REQUIRE(reference.outcomes.size() == memoized.outcomes.size());
    REQUIRE(reference.outcomes.size() == parallel.outcomes.size());
    for (size_t i = 0; i < reference.outcomes.size(); ++i) {
      CHECK(reference.outcomes[i].state == memoized.outcomes[i].state);
      CHECK(reference.outcomes[i].witness == memoized.outcomes[i].witness);
      CHECK(reference.outcomes[i].witness == parallel.outcomes[i].witness);
    }
    CHECK(reference.executions == enumerate_executions(config, p, mcm).size());
  }
  CHECK(count_stats(config, p, MemoryModel::SC).executions == multinomial(p));
}

TEST_CASE("witness of every outcome is the lexicographically first execution") {
  LitmusConfig config = test::sb000a_config();
  Program sb = test::sb000a_program();
  for (MemoryModel mcm : {MemoryModel::SC, MemoryModel::TSO}) {
    OutcomeSet outcomes = reachable_final_states(config, sb, mcm);
    std::map<MachineState, Execution, StateLess> first;
    for (const Execution& e : enumerate_executions(config, sb, mcm))
      first.emplace(replay_final(config, sb, e), e);
    for (const Outcome& outcome : outcomes.outcomes)
      CHECK(outcome.witness == first.at(outcome.state));
  }
}
