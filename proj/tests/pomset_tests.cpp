#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "wtc/generate.hpp"
#include "wtc/pomset.hpp"

using namespace wtc;
using wtc::test::config_of;

namespace {

// oracle: try every bijection explicitly
bool brute_force_iso(const Pomset& p, const Pomset& q) {
  if (p.size() != q.size()) return false;
  std::vector<std::size_t> perm(p.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end());
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) {
      if (!(p.labels[i] == q.labels[perm[i]])) ok = false;
      for (std::size_t j = 0; j < p.size() && ok; ++j)
        if (p.less(i, j) != q.less(perm[i], perm[j])) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return p.size() == 0;
}

Pomset random_visible_pomset(std::mt19937& rng, const PrimeEventStructure& pes) {
  std::uniform_int_distribution<std::uint64_t> d(0, (1u << pes.event_count()) - 1);
  for (int attempt = 0; attempt < 100; ++attempt) {
    EventSet x = pes.visible_part(EventSet::from_bits(pes.event_count() ? d(rng) : 0));
    if (!pes.is_consistent(x)) continue;
    return induced_pomset(pes, x);
  }
  return induced_pomset(pes, EventSet{});
}

}  // namespace

TEST_CASE("induced pomsets") {
  PrimeEventStructure fig1 = test::a_tau_b();
  Pomset chain = induced_pomset(fig1, config_of({0, 2}));
  CHECK(chain.size() == 2);
  CHECK(chain.labels[0] == Label::visible("a"));
  CHECK(chain.labels[1] == Label::visible("b"));
  CHECK(chain.less(0, 1));
  CHECK_FALSE(chain.less(1, 0));

  CHECK(induced_pomset(fig1, EventSet{}).size() == 0);

  PrimeEventStructure par = test::a_par_b();
  Pomset anti = induced_pomset(par, config_of({0, 1}));
  CHECK(anti.order_pair_count() == 0);

  CHECK_THROWS_AS(induced_pomset(fig1, config_of({1})), Error);  // tau in carrier
  PrimeEventStructure ab = test::a_plus_b();
  CHECK_THROWS_AS(induced_pomset(ab, config_of({0, 1})), Error);  // inconsistent
}

TEST_CASE("pomset isomorphism witnesses") {
  PrimeEventStructure fig1 = test::a_tau_b();
  PrimeEventStructure fig1r = test::a_b();
  Pomset p = induced_pomset(fig1, config_of({0, 2}));
  Pomset q = induced_pomset(fig1r, config_of({0, 1}));
  auto iso = pomset_isomorphic(p, q);
  REQUIRE(iso);
  CHECK(iso->image(0) == EventId{0});
  CHECK(iso->image(2) == EventId{1});

  PrimeEventStructure par = test::a_par_b();
  RawPes two;
  two.labels = {Label::visible("a"), Label::visible("b")};
  two.causes = {{0, 1}};
  Pomset chain_ab = induced_pomset(validate_pes(two), config_of({0, 1}));
  Pomset anti_ab = induced_pomset(par, config_of({0, 1}));
  CHECK_FALSE(pomset_isomorphic(chain_ab, anti_ab));  // order cardinality differs

  CHECK(pomset_isomorphic(Pomset{}, Pomset{}));
}

TEST_CASE("isomorphism agrees with brute force and is an equivalence") {
  std::mt19937 rng(5);
  PesGenOptions gen;
  gen.max_events = 6;
  for (int i = 0; i < 120; ++i) {
    PrimeEventStructure pa = random_pes(rng, gen);
    PrimeEventStructure pb = random_pes(rng, gen);
    Pomset p = random_visible_pomset(rng, pa);
    Pomset q = random_visible_pomset(rng, pb);
    auto witness = pomset_isomorphic(p, q);
    CHECK(witness.has_value() == brute_force_iso(p, q));

    // reflexive
    auto self = pomset_isomorphic(p, p);
    REQUIRE(self);
    // symmetric: the inverse relates q to p
    if (witness) {
      auto back = pomset_isomorphic(q, p);
      CHECK(back.has_value());
    }
  }
}

TEST_CASE("isomorphism witnesses compose transitively") {
  std::mt19937 rng(9);
  PesGenOptions gen;
  gen.max_events = 5;
  for (int i = 0; i < 60; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    Pomset p = random_visible_pomset(rng, pes);
    auto a = pomset_isomorphic(p, p);
    REQUIRE(a);
    // composing the identity-ish witness with itself stays a witness
    Bijection composed;
    for (const auto& [x, y] : a->pairs()) {
      auto z = a->image(y);
      REQUIRE(z);
      composed.insert(x, *z);
    }
    CHECK(composed.domain() == a->domain());
  }
}

TEST_CASE("extend_iso") {
  PrimeEventStructure fig1 = test::a_tau_b();
  PrimeEventStructure fig1r = test::a_b();
  Bijection f = extend_iso(fig1, fig1r, Bijection{}, 0, 0);
  CHECK(f.size() == 1);
  Bijection g = extend_iso(fig1, fig1r, f, 2, 1);
  CHECK(g.size() == 2);
  CHECK(g.image(2) == EventId{1});

  CHECK_THROWS_AS(extend_iso(fig1, fig1r, f, 0, 1), Error);  // domain clash
  try {
    extend_iso(fig1, fig1r, f, 0, 1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_clash);
  }
  try {
    extend_iso(fig1, fig1r, f, 2, 0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::range_clash);
  }
  try {
    extend_iso(fig1, fig1r, Bijection{}, 1, 0);  // tau event on the left
  } catch (const Error& e) {
    CHECK(e.code() == Errc::tau_argument);
  }
}

TEST_CASE("posetal triples") {
  PrimeEventStructure fig1 = test::a_tau_b();
  PrimeEventStructure fig1r = test::a_b();
  CHECK(is_posetal_triple(fig1, fig1r, Configuration{}, Bijection{}, Configuration{}));

  Bijection f;
  f.insert(0, 0);
  CHECK(is_posetal_triple(fig1, fig1r, config_of({0, 1}), f, config_of({0})));

  Bijection bad;
  bad.insert(0, 1);  // a mapped to b
  CHECK_FALSE(is_posetal_triple(fig1, fig1r, config_of({0}), bad, config_of({0, 1})));
}

TEST_CASE("pointwise prefixes") {
  PrimeEventStructure par = test::a_par_b();
  Bijection f;
  f.insert(0, 0);
  PosetalTriple single{config_of({0}), f, config_of({0})};
  auto prefixes = pointwise_prefixes(par, par, single);
  CHECK(prefixes.size() == 2);  // itself and the empty triple

  PosetalTriple empty{Configuration{}, Bijection{}, Configuration{}};
  CHECK(pointwise_prefixes(par, par, empty).size() == 1);

  RawPes two;
  two.labels = {Label::visible("a"), Label::visible("b")};
  two.causes = {{0, 1}};
  PrimeEventStructure chain = validate_pes(two);
  Bijection g;
  g.insert(0, 0);
  g.insert(1, 1);
  auto full = pointwise_prefixes(chain, chain, PosetalTriple{config_of({0, 1}), g, config_of({0, 1})});
  CHECK(full.size() == 3);  // empty, first event, full

  for (const PosetalTriple& t : full)
    CHECK(is_posetal_triple(chain, chain, t.left, t.iso, t.right));
}
