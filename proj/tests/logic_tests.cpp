#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wtc/generate.hpp"
#include "wtc/logic.hpp"
#include "wtc/parser.hpp"

using namespace wtc;
using wtc::test::config_of;

namespace {

BindSpec spec(std::vector<Var> causes, std::vector<Var> indep, const std::string& label, Var z) {
  BindSpec s;
  s.causes = std::move(causes);
  s.independent = std::move(indep);
  s.label = Label::visible(label);
  s.target = std::move(z);
  return s;
}

Formula diamond(const std::string& label, Var z, Formula body) {
  return Formula::bind_exec(spec({}, {}, label, z), std::move(body));
}

}  // namespace

TEST_CASE("legal pairs") {
  PrimeEventStructure fig1 = test::a_tau_b();
  CHECK(is_legal_pair(fig1, Configuration{}, Environment{}, Formula::truth()));

  PrimeEventStructure ab = test::a_plus_b();
  Environment eta = Environment{}.bound("x", 1);
  Formula phi = Formula::exec("x", Formula::truth());
  CHECK_FALSE(is_legal_pair(ab, config_of({0}), eta, phi));

  Environment eta2 = Environment{}.bound("x", 2);
  CHECK(is_legal_pair(fig1, config_of({0, 1}), eta2, phi));

  CHECK_THROWS_AS(is_legal_pair(ab, config_of({0}), Environment{}, phi), Error);  // unbound x
}

TEST_CASE("the denotation of truth is every configuration") {
  PrimeEventStructure fig1 = test::a_tau_b();
  Denotation den = denotation(fig1, Formula::truth());
  CHECK(den.size() == enumerate_configurations(fig1).size());
  for (Configuration c : enumerate_configurations(fig1)) CHECK(den.contains(c, Environment{}));
}

TEST_CASE("weak diamonds reach through tau: the worked a then b example") {
  Formula phi = diamond("a", "x", Formula::bind_exec(spec({"x"}, {}, "b", "y"), Formula::truth()));
  CHECK(satisfies(test::a_tau_b(), Configuration{}, Environment{}, phi));
  CHECK(satisfies(test::a_b(), Configuration{}, Environment{}, phi));
}

TEST_CASE("binding conflicting events is blocked when both variables stay free") {
  PrimeEventStructure ab = test::a_plus_b();
  // (a x)(b y)<<x>><<y>>T: the y-bind must be consistent with x, which conflicts
  Formula body = Formula::exec("x", Formula::exec("y", Formula::truth()));
  Formula phi = Formula::bind(spec({}, {}, "a", "x"), Formula::bind(spec({}, {}, "b", "y"), body));
  CHECK_FALSE(satisfies(ab, Configuration{}, Environment{}, phi));

  // with body T neither variable stays free below its bind, so the two binds
  // never constrain each other and the formula holds
  Formula vacuous =
      Formula::bind(spec({}, {}, "a", "x"), Formula::bind(spec({}, {}, "b", "y"), Formula::truth()));
  CHECK(satisfies(ab, Configuration{}, Environment{}, vacuous));
}

TEST_CASE("negation coherence on closed formulas") {
  std::mt19937 rng(43);
  PesGenOptions pgen;
  FormulaGenOptions fgen;
  for (int i = 0; i < 150; ++i) {
    PrimeEventStructure pes = random_pes(rng, pgen);
    Formula phi = random_formula(rng, fgen);
    auto configs = enumerate_configurations(pes);
    std::uniform_int_distribution<std::size_t> pick(0, configs.size() - 1);
    Configuration c = configs[pick(rng)];
    CHECK(satisfies(pes, c, Environment{}, phi) !=
          satisfies(pes, c, Environment{}, Formula::neg(phi)));
  }
}

TEST_CASE("denotations consist of legal pairs") {
  std::mt19937 rng(47);
  PesGenOptions pgen;
  FormulaGenOptions fgen;
  fgen.free_pool = {"u1", "u2"};
  for (int i = 0; i < 150; ++i) {
    PrimeEventStructure pes = random_pes(rng, pgen);
    Formula phi = desugar(random_formula(rng, fgen));
    for (const LegalPair& lp : denotation(pes, phi).pairs)
      CHECK(is_legal_pair(pes, lp.config, lp.env, phi));
  }
}

TEST_CASE("conjunction never enlarges a denotation") {
  std::mt19937 rng(53);
  PesGenOptions pgen;
  FormulaGenOptions fgen;
  for (int i = 0; i < 80; ++i) {
    PrimeEventStructure pes = random_pes(rng, pgen);
    Formula a = desugar(random_formula(rng, fgen));
    Formula b = desugar(random_formula(rng, fgen));
    Denotation da = denotation(pes, a);
    Denotation dc = denotation(pes, Formula::conj(a, b));
    for (const LegalPair& lp : dc.pairs) CHECK(da.pairs.count(lp));
  }
}

TEST_CASE("the strict independence reading coincides under hereditary saturation") {
  std::mt19937 rng(59);
  PesGenOptions pgen;
  FormulaGenOptions fgen;
  fgen.free_pool = {"u1"};
  EvalOptions strict;
  strict.strict_tau_independence = true;
  for (int i = 0; i < 100; ++i) {
    PrimeEventStructure pes = random_pes(rng, pgen);
    Formula phi = desugar(random_formula(rng, fgen));
    CHECK(denotation(pes, phi).pairs == denotation(pes, phi, strict).pairs);
  }
}

TEST_CASE("fragment classification") {
  Formula hm = diamond("a", "x", Formula::truth());
  Fragments f1 = fragment_of(hm);
  CHECK(f1.hm);
  CHECK(f1.step);
  CHECK(f1.pomset);
  CHECK(f1.hp);

  Formula prod = Formula::step_product({spec({}, {}, "a", "x"), spec({}, {}, "b", "y")}, true,
                                       Formula::truth());
  Fragments f2 = fragment_of(prod);
  CHECK_FALSE(f2.hm);
  CHECK(f2.step);
  CHECK_FALSE(f2.pomset);
  CHECK_FALSE(f2.hp);

  // open operand under negation: hp but not pomset
  Formula open_neg = Formula::bind_exec(
      spec({"x"}, {}, "b", "y"),
      Formula::neg(Formula::bind_exec(spec({"y"}, {}, "c", "w"), Formula::truth())));
  Fragments f3 = fragment_of(open_neg);
  CHECK(f3.hp);
  CHECK_FALSE(f3.pomset);
  CHECK_FALSE(f3.hm);

  // the desugared core of an hm diamond still classifies as hm
  CHECK(fragment_of(desugar(hm)).hm);
  CHECK(fragment_of(desugar(prod)).step);

  // plain binds without execution live only in the full logic
  Formula bare = Formula::bind(spec({}, {}, "a", "x"), Formula::truth());
  Fragments f4 = fragment_of(bare);
  CHECK_FALSE(f4.hm);
  CHECK_FALSE(f4.step);
  CHECK_FALSE(f4.pomset);
  CHECK_FALSE(f4.hp);
}

TEST_CASE("pomset formulas") {
  PrimeEventStructure chain = test::a_b();
  Pomset p = induced_pomset(chain, config_of({0, 1}));
  Formula phi = pomset_formula(p);
  Formula expect = Formula::bind_exec(
      spec({}, {}, "a", "z1"), Formula::bind_exec(spec({"z1"}, {}, "b", "z2"), Formula::truth()));
  CHECK(phi == expect);

  CHECK(pomset_formula(Pomset{}, Formula::truth()) == Formula::truth());

  PrimeEventStructure par = test::a_par_b();
  Pomset anti = induced_pomset(par, config_of({0, 1}));
  Formula phi2 = pomset_formula(anti);
  REQUIRE(phi2.op() == Formula::Op::bind_exec);
  bool some_independence =
      !phi2.spec().independent.empty() || !phi2.child(0).spec().independent.empty();
  CHECK(some_independence);

  // the pomset formula of an executed pomset holds at its source
  CHECK(satisfies(par, Configuration{}, Environment{}, phi2));
  CHECK_FALSE(satisfies(chain, Configuration{}, Environment{}, phi2));
}

TEST_CASE("pomset class membership") {
  PrimeEventStructure chain = test::a_b();
  Pomset p = induced_pomset(chain, config_of({0, 1}));
  std::vector<BindSpec> chain_spec{spec({}, {}, "a", "z1"), spec({"z1"}, {}, "b", "z2")};
  CHECK(pomset_class_member(p, chain_spec));

  PrimeEventStructure par = test::a_par_b();
  Pomset anti = induced_pomset(par, config_of({0, 1}));
  CHECK_FALSE(pomset_class_member(anti, chain_spec));  // x-listed variable unordered

  CHECK(pomset_class_member(Pomset{}, {}));

  CHECK_THROWS_AS(pomset_class_member(p, {}), Error);  // arity mismatch
}

TEST_CASE("bounded logical equivalence") {
  PrimeEventStructure l = test::a_tau_b();
  PrimeEventStructure r = test::a_b();
  CHECK_FALSE(bounded_logical_equiv(l, r, FragmentTag::hm, 3).separated);

  PrimeEventStructure a = compile_term(parse_term("a"), "a");
  PrimeEventStructure b = compile_term(parse_term("b"), "b");
  SeparationResult sep = bounded_logical_equiv(a, b, FragmentTag::hm, 1);
  REQUIRE(sep.separated);
  CHECK(*sep.separator == diamond("a", "z1", Formula::truth()));
  CHECK(sep.holds_on_left);

  CHECK_FALSE(bounded_logical_equiv(l, l, FragmentTag::pomset, 3).separated);

  // a|b vs a.b+b.a: found by step and pomset enumeration, not by hm
  PrimeEventStructure par = test::a_par_b();
  PrimeEventStructure dia = test::diamond_choice();
  CHECK_FALSE(bounded_logical_equiv(par, dia, FragmentTag::hm, 3).separated);
  CHECK(bounded_logical_equiv(par, dia, FragmentTag::step, 3).separated);
  CHECK(bounded_logical_equiv(par, dia, FragmentTag::pomset, 3).separated);
}
