#include <doctest.h>

#include <set>

#include "mcm/model.hpp"
#include "support.hpp"

using namespace mcm;

TEST_CASE("events_of lists every (core, index) pair in order") {
  Program sb = test::sb000a_program();
  std::vector<EventId> events = events_of(sb);
  std::vector<EventId> expected = {{0, 1}, {0, 2}, {1, 1}, {1, 2}};
  CHECK(events == expected);

  Program single;
  single.cores = {{Load{0, 0}}};
  CHECK(events_of(single) == std::vector<EventId>{{0, 1}});

  Program three;
  three.cores = {{Load{0, 0}, Load{0, 0}}, {Store{0, 0}, Load{0, 0}}, {Store{0, 0}, Store{0, 0}}};
  CHECK(events_of(three).size() == 6);
}

TEST_CASE("events_of is injective and exhaustive") {
  std::mt19937_64 rng(7);
  LitmusConfig config = test::sample_config();
  for (int trial = 0; trial < 50; ++trial) {
    Program p = test::random_program(rng, config);
    std::vector<EventId> events = events_of(p);
    std::set<EventId> unique(events.begin(), events.end());
    CHECK(static_cast<int>(events.size()) == p.total_ops());
    CHECK(unique.size() == events.size());
  }
}

TEST_CASE("operation_at returns the event's operation") {
  Program sb = test::sb000a_program();
  CHECK(operation_at(sb, {0, 1}) == Operation{Store{0, 1}});
  CHECK(operation_at(sb, {1, 2}) == Operation{Load{0, 0}});
  CHECK_THROWS_AS(operation_at(sb, {5, 1}), ValidationError);
  CHECK_THROWS_AS(operation_at(sb, {0, 3}), ValidationError);
  CHECK_THROWS_AS(operation_at(sb, {0, 0}), ValidationError);
}

TEST_CASE("program equality is structural") {
  Program a = test::sb000a_program();
  Program b = test::sb000a_program();
  CHECK(a == b);
  b.cores[1][0] = Store{0, 1};
  CHECK(a != b);

  // Two loads of the same shape are equal operations; the programs still
  // differ from a single-load program.
  Program two_loads;
  two_loads.cores = {{Load{0, 0}, Load{0, 0}}};
  Program one_load;
  one_load.cores = {{Load{0, 0}}};
  CHECK(two_loads != one_load);
  CHECK(encode_program(two_loads) != encode_program(one_load));
}

TEST_CASE("encode_program separates core boundaries") {
  Program split;
  split.cores = {{Load{0, 0}}, {Load{0, 0}}};
  Program joined;
  joined.cores = {{Load{0, 0}, Load{0, 0}}, {Load{0, 0}}};
  // Same multiset of operations arranged differently must encode differently.
  CHECK(encode_program(split) != encode_program(joined).substr(0, encode_program(split).size()));
  CHECK(encode_program(split) != encode_program(joined));
}

TEST_CASE("config validation rejects degenerate universes") {
  LitmusConfig config = test::sample_config();
  CHECK_NOTHROW(config.validate());

  LitmusConfig bad = config;
  bad.cores = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  bad = config;
  bad.max_ops_per_core = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  bad = config;
  bad.initial_variable_value = 2;  // universe is {0, 1}
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("config validation checks program bounds") {
  LitmusConfig config = test::sb000a_config();
  CHECK_NOTHROW(config.validate(test::sb000a_program()));

  Program empty_core;
  empty_core.cores = {{Store{0, 1}, Load{0, 0}}, {}};
  CHECK_THROWS_AS(config.validate(empty_core), ValidationError);

  Program too_long;
  too_long.cores = {{Store{0, 1}, Load{0, 0}, Load{0, 0}}, {Load{0, 0}}};
  CHECK_THROWS_AS(config.validate(too_long), ValidationError);

  Program bad_register;
  bad_register.cores = {{Load{1, 0}}, {Load{0, 0}}};  // only 1 register per core
  CHECK_THROWS_AS(config.validate(bad_register), ValidationError);

  Program bad_value;
  bad_value.cores = {{Store{0, 3}}, {Load{0, 0}}};  // values are 0..2
  CHECK_THROWS_AS(config.validate(bad_value), ValidationError);
}

TEST_CASE("register content keeps the sentinel distinct from every value") {
  RegisterContent initial = RegisterContent::initial();
  CHECK(initial.is_initial());
  CHECK_THROWS_AS(initial.value(), std::logic_error);

  RegisterContent zero = RegisterContent::of(0);
  CHECK_FALSE(zero.is_initial());
  CHECK(zero.value() == 0);
  CHECK(initial != zero);
  CHECK(initial < zero);  // canonical cell order puts INITIAL first
  CHECK_THROWS_AS(RegisterContent::of(-1), ValidationError);
}
