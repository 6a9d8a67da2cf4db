#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wtc/generate.hpp"
#include "wtc/pes.hpp"

using namespace wtc;
using wtc::test::config_of;

namespace {

// brute-force oracle: all subsets filtered by downward closure + consistency
std::vector<Configuration> brute_force_configurations(const PrimeEventStructure& pes) {
  std::vector<Configuration> out;
  const std::size_t n = pes.event_count();
  REQUIRE(n <= 12);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    Configuration c = EventSet::from_bits(m);
    if (pes.is_configuration(c)) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// reachability over the stored order, ignoring the precomputed cause sets
EventSet reachability_causes(const PrimeEventStructure& pes, EventId e) {
  EventSet out = EventSet::single(e);
  bool changed = true;
  while (changed) {
    changed = false;
    for (EventId f : pes.events()) {
      if (out.contains(f)) continue;
      for (EventId g : out) {
        if (pes.leq(f, g)) {
          out.insert(f);
          changed = true;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("validate accepts the a.tau.b chain with transitive causality") {
  RawPes raw;
  raw.labels = {Label::visible("a"), Label::tau(), Label::visible("b")};
  raw.causes = {{0, 1}, {1, 2}};
  PrimeEventStructure pes = validate_pes(raw);
  CHECK(pes.leq(0, 2));  // by transitivity
  CHECK(pes.leq(0, 0));
  CHECK_FALSE(pes.leq(2, 0));
  CHECK(pes.visible_events() == config_of({0, 2}));
}

TEST_CASE("validate accepts the empty structure") {
  PrimeEventStructure pes = validate_pes(RawPes{});
  CHECK(pes.event_count() == 0);
  CHECK(enumerate_configurations(pes).size() == 1);
}

TEST_CASE("validate rejects a pair both ordered and conflicting") {
  RawPes raw;
  raw.labels = {Label::visible("a"), Label::visible("b")};
  raw.causes = {{0, 1}};
  raw.conflicts = {{0, 1}};
  CHECK_THROWS_WITH_AS(validate_pes(raw), doctest::Contains("ordered and in conflict"), Error);
  try {
    validate_pes(raw);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::causal_conflict_overlap);
  }
}

TEST_CASE("validate error taxonomy") {
  RawPes cyclic;
  cyclic.labels = {Label::visible("a"), Label::visible("b")};
  cyclic.causes = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(validate_pes(cyclic), Error);
  try {
    validate_pes(cyclic);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cyclic_causality);
  }

  RawPes selfc;
  selfc.labels = {Label::visible("a")};
  selfc.conflicts = {{0, 0}};
  try {
    validate_pes(selfc);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::self_conflict);
  }

  RawPes dangling;
  dangling.labels = {Label::visible("a")};
  dangling.causes = {{0, 7}};
  try {
    validate_pes(dangling);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dangling_event);
  }

  RawPes big;
  big.labels.assign(65, Label::visible("a"));
  try {
    validate_pes(big);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_many_events);
  }
}

TEST_CASE("cause sets") {
  PrimeEventStructure fig1 = test::a_tau_b();
  CHECK(fig1.causes(2) == config_of({0, 1, 2}));
  CHECK(fig1.causes(0) == config_of({0}));

  RawPes chain3;
  chain3.labels = {Label::visible("a"), Label::visible("b"), Label::visible("c")};
  chain3.causes = {{0, 1}, {1, 2}};
  PrimeEventStructure pes = validate_pes(chain3);
  // derived by reachability over the stored order
  CHECK(pes.causes(1) == reachability_causes(pes, 1));
  CHECK(pes.causes(1) == config_of({0, 1}));

  CHECK_THROWS_AS(pes.causes(9), Error);
}

TEST_CASE("consistency and concurrency") {
  PrimeEventStructure ab = test::a_plus_b();
  CHECK(ab.is_consistent(EventSet{}));
  CHECK_FALSE(ab.is_consistent(config_of({0, 1})));
  PrimeEventStructure fig1 = test::a_tau_b();
  CHECK(fig1.is_consistent(config_of({0, 1, 2})));

  PrimeEventStructure par = test::a_par_b();
  CHECK(par.concurrent(0, 1));
  CHECK_FALSE(par.concurrent(0, 0));  // e <= e
  CHECK_FALSE(fig1.concurrent(0, 2)); // ordered
}

TEST_CASE("configuration enumeration matches the brute-force filter") {
  PrimeEventStructure fig1 = test::a_tau_b();
  std::vector<Configuration> got = enumerate_configurations(fig1);
  std::vector<Configuration> expect = {config_of({}), config_of({0}), config_of({0, 1}),
                                       config_of({0, 1, 2})};
  CHECK(got == expect);
  CHECK(got == brute_force_configurations(fig1));

  CHECK(enumerate_configurations(test::a_plus_b()).size() == 3);

  std::mt19937 rng(7);
  PesGenOptions gen;
  gen.max_events = 6;
  for (int i = 0; i < 60; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    CHECK(enumerate_configurations(pes) == brute_force_configurations(pes));
  }
}

TEST_CASE("visible part") {
  PrimeEventStructure fig1 = test::a_tau_b();
  CHECK(fig1.visible_part(config_of({0, 1, 2})) == config_of({0, 2}));
  CHECK(fig1.visible_part(config_of({1})) == EventSet{});
  PrimeEventStructure par = test::a_par_b();
  CHECK(par.visible_part(config_of({0, 1})) == config_of({0, 1}));

  // idempotent and monotone
  std::mt19937 rng(11);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    std::uniform_int_distribution<std::uint64_t> d(0, (1u << pes.event_count()) - 1);
    EventSet x = EventSet::from_bits(pes.event_count() ? d(rng) : 0);
    EventSet y = x & EventSet::from_bits(pes.event_count() ? d(rng) : 0);
    CHECK(pes.visible_part(pes.visible_part(x)) == pes.visible_part(x));
    CHECK(pes.visible_part(y).subset_of(pes.visible_part(x)));
  }
}

TEST_CASE("residual") {
  PrimeEventStructure fig1 = test::a_tau_b();
  CHECK(fig1.residual(Configuration{}) == config_of({0, 2}));
  CHECK(fig1.residual(config_of({0, 1, 2})) == EventSet{});
  PrimeEventStructure ab = test::a_plus_b();
  CHECK(ab.residual(config_of({0})) == EventSet{});
}

TEST_CASE("saturation is idempotent") {
  std::mt19937 rng(23);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    RawPes raw;
    raw.name = pes.name();
    for (EventId e : pes.events()) raw.labels.push_back(pes.label(e));
    raw.causes = pes.causality_pairs();
    raw.conflicts = pes.conflict_pairs();
    CHECK(validate_pes(raw) == pes);
  }
}

TEST_CASE("conflict heredity holds pointwise") {
  std::mt19937 rng(31);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (EventId e : pes.events())
      for (EventId f : pes.events())
        for (EventId g : pes.events())
          if (pes.in_conflict(e, f) && pes.leq(f, g)) CHECK(pes.in_conflict(e, g));
  }
}

TEST_CASE("cause sets are downward closed and contain the event") {
  std::mt19937 rng(37);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (EventId e : pes.events()) {
      EventSet cs = pes.causes(e);
      CHECK(cs.contains(e));
      CHECK(pes.is_downward_closed(cs));
    }
  }
}
