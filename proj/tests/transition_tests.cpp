#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wtc/generate.hpp"
#include "wtc/transitions.hpp"

using namespace wtc;
using wtc::test::config_of;

TEST_CASE("strong successors") {
  PrimeEventStructure fig1 = test::a_tau_b();
  auto succ = strong_successors(fig1, Configuration{});
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].first == EventId{0});
  CHECK(succ[0].second == config_of({0}));

  CHECK(strong_successors(fig1, config_of({0, 1, 2})).empty());

  auto par = strong_successors(test::a_par_b(), Configuration{});
  CHECK(par.size() == 2);
}

TEST_CASE("tau closure") {
  PrimeEventStructure fig1 = test::a_tau_b();
  std::vector<Configuration> cl = tau_closure(fig1, config_of({0}));
  CHECK(cl == std::vector<Configuration>{config_of({0}), config_of({0, 1})});

  PrimeEventStructure right = test::a_b();
  CHECK(tau_closure(right, config_of({0})) == std::vector<Configuration>{config_of({0})});

  PrimeEventStructure tautau = compile_term(parse_term("tau.tau"), "tt");
  CHECK(tau_closure(tautau, Configuration{}).size() == 3);
}

TEST_CASE("tau closure is monotone and idempotent") {
  std::mt19937 rng(3);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (Configuration c : enumerate_configurations(pes)) {
      auto once = tau_closure(pes, c);
      std::vector<Configuration> twice;
      for (Configuration d : once)
        for (Configuration e : tau_closure(pes, d)) twice.push_back(e);
      std::sort(twice.begin(), twice.end());
      twice.erase(std::unique(twice.begin(), twice.end()), twice.end());
      CHECK(once == twice);
    }
  }
}

TEST_CASE("weak event successors") {
  PrimeEventStructure fig1 = test::a_tau_b();
  CHECK(weak_event_successors(fig1, Configuration{}, 0) ==
        std::vector<Configuration>{config_of({0}), config_of({0, 1})});
  CHECK(weak_event_successors(fig1, Configuration{}, 2).empty());

  PrimeEventStructure right = test::a_b();
  CHECK(weak_event_successors(right, Configuration{}, 0) ==
        std::vector<Configuration>{config_of({0})});

  CHECK_THROWS_AS(weak_event_successors(fig1, Configuration{}, 1), Error);  // tau argument
}

TEST_CASE("weak pomset successors on the worked structures") {
  PrimeEventStructure fig1 = test::a_tau_b();
  auto succ = weak_pomset_successors(fig1, Configuration{});
  REQUIRE(succ.size() == 3);
  // ({a}, {e1}), ({a}, {e1,e2}) and the a<=b chain to the full configuration
  CHECK(succ[0].target == config_of({0}));
  CHECK(succ[0].pomset.size() == 1);
  CHECK(succ[1].target == config_of({0, 1}));
  CHECK(succ[2].target == config_of({0, 1, 2}));
  CHECK(succ[2].pomset.size() == 2);
  CHECK(succ[2].pomset.less(0, 1));

  CHECK(weak_pomset_successors(fig1, config_of({0, 1, 2})).empty());

  auto par = weak_pomset_successors(test::a_par_b(), Configuration{});
  bool has_antichain = false;
  for (const PomsetStep& s : par)
    if (s.pomset.size() == 2 && s.pomset.order_pair_count() == 0) has_antichain = true;
  CHECK(has_antichain);
}

TEST_CASE("weak steps filter the pomset transitions") {
  auto par_steps = weak_step_successors(test::a_par_b(), Configuration{});
  bool has_two_step = false;
  for (const PomsetStep& s : par_steps)
    if (s.pomset.size() == 2) has_two_step = true;
  CHECK(has_two_step);

  // a.b has singleton steps only
  for (const PomsetStep& s : weak_step_successors(test::a_b(), Configuration{}))
    CHECK(s.pomset.size() == 1);

  std::mt19937 rng(17);
  PesGenOptions gen;
  for (int i = 0; i < 30; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (Configuration c : enumerate_configurations(pes)) {
      auto steps = weak_step_successors(pes, c);
      auto pomsets = weak_pomset_successors(pes, c);
      for (const PomsetStep& s : steps)
        CHECK(std::find(pomsets.begin(), pomsets.end(), s) != pomsets.end());
    }
  }
}

TEST_CASE("strong visible moves embed into weak ones") {
  std::mt19937 rng(19);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (Configuration c : enumerate_configurations(pes)) {
      for (const auto& [e, cx] : strong_successors(pes, c)) {
        if (pes.label(e).is_tau()) continue;
        auto weak = weak_event_successors(pes, c, e);
        CHECK(std::find(weak.begin(), weak.end(), cx) != weak.end());
      }
    }
  }
}

TEST_CASE("weak transitions keep tau silent") {
  std::mt19937 rng(29);
  PesGenOptions gen;
  for (int i = 0; i < 40; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (Configuration c : enumerate_configurations(pes)) {
      for (const PomsetStep& s : weak_pomset_successors(pes, c)) {
        EventSet carrier;
        for (EventId e : s.pomset.carrier) carrier.insert(e);
        CHECK(pes.visible_part(s.target) == (pes.visible_part(c) | carrier));
        CHECK_FALSE(c.intersects(carrier));
      }
    }
  }
}

TEST_CASE("the two weak-successor routes agree") {
  std::mt19937 rng(41);
  PesGenOptions gen;
  gen.max_events = 6;
  for (int i = 0; i < 120; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    for (Configuration c : enumerate_configurations(pes))
      CHECK(weak_pomset_successors(pes, c) == weak_pomset_successors_by_search(pes, c));
  }
}

TEST_CASE("configuration graphs") {
  ConfigurationGraph g = build_configuration_graph(test::a_tau_b());
  CHECK(g.nodes.size() == 4);
  CHECK(g.strong_edges.size() == 3);

  ConfigurationGraph empty = build_configuration_graph(validate_pes(RawPes{}));
  CHECK(empty.nodes.size() == 1);
  CHECK(empty.strong_edges.empty());
  CHECK(empty.weak_pomset_edges.empty());

  ConfigurationGraph ab = build_configuration_graph(test::a_plus_b());
  CHECK(ab.nodes.size() == 3);
  CHECK(ab.strong_edges.size() == 2);

  for (const auto& e : g.weak_step_edges) {
    bool found = false;
    for (const auto& p : g.weak_pomset_edges)
      if (p.from == e.from && p.to == e.to && p.pomset == e.pomset) found = true;
    CHECK(found);
  }
}
