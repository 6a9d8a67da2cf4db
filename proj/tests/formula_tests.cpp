#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wtc/formula.hpp"
#include "wtc/generate.hpp"

using namespace wtc;

namespace {

BindSpec spec(std::vector<Var> causes, std::vector<Var> indep, const std::string& label, Var z) {
  BindSpec s;
  s.causes = std::move(causes);
  s.independent = std::move(indep);
  s.label = Label::visible(label);
  s.target = std::move(z);
  return s;
}

}  // namespace

TEST_CASE("free variables") {
  CHECK(free_vars(Formula::truth()).empty());
  Formula closed = Formula::bind(spec({}, {}, "a", "z"), Formula::exec("z", Formula::truth()));
  CHECK(free_vars(closed).empty());
  Formula open = Formula::exec("z", Formula::truth());
  CHECK(free_vars(open) == std::set<Var>{"z"});

  Formula bind_open = Formula::bind(spec({"x"}, {"y"}, "a", "z"), Formula::exec("z", Formula::truth()));
  CHECK(free_vars(bind_open) == std::set<Var>{"x", "y"});
}

TEST_CASE("desugaring of the derived operators") {
  Formula dual = Formula::dual_exec("z", Formula::truth());
  Formula expected = Formula::neg(Formula::exec("z", Formula::neg(Formula::truth())));
  CHECK(desugar(dual) == expected);

  Formula be = Formula::bind_exec(spec({}, {}, "a", "x"), Formula::truth());
  CHECK(desugar(be) == Formula::bind(spec({}, {}, "a", "x"), Formula::exec("x", Formula::truth())));

  Formula db = Formula::dual_bind(spec({}, {}, "a", "x"), Formula::truth());
  CHECK(desugar(db) ==
        Formula::neg(Formula::bind(spec({}, {}, "a", "x"), Formula::neg(Formula::truth()))));

  // products extend the later independence lists with the earlier targets
  Formula prod = Formula::step_product({spec({}, {}, "a", "z"), spec({}, {}, "b", "w")}, true,
                                       Formula::truth());
  Formula expanded = desugar(prod);
  CHECK(expanded == Formula::bind(spec({}, {}, "a", "z"),
                                  Formula::bind(spec({}, {"z"}, "b", "w"),
                                                Formula::exec("z", Formula::exec("w", Formula::truth())))));
}

TEST_CASE("desugar is idempotent") {
  std::mt19937 rng(13);
  FormulaGenOptions gen;
  gen.free_pool = {"u"};
  for (int i = 0; i < 200; ++i) {
    Formula phi = random_formula(rng, gen);
    Formula once = desugar(phi);
    CHECK(is_core(once));
    CHECK(desugar(once) == once);
    CHECK(free_vars(once) == free_vars(phi));
  }
}

TEST_CASE("pomset diamonds expand by peeling maximal elements") {
  VarPomset chain;
  chain.vars = {"z1", "z2"};
  chain.labels = {Label::visible("a"), Label::visible("b")};
  chain.strict = {0b10, 0b00};  // z1 < z2
  Formula got = expand_pomset_diamond(chain, Formula::truth());
  Formula expect = Formula::bind_exec(
      spec({}, {}, "a", "z1"), Formula::bind_exec(spec({"z1"}, {}, "b", "z2"), Formula::truth()));
  CHECK(got == expect);

  VarPomset anti;
  anti.vars = {"z1", "z2"};
  anti.labels = {Label::visible("a"), Label::visible("b")};
  anti.strict = {0, 0};
  Formula got2 = expand_pomset_diamond(anti, Formula::truth());
  Formula expect2 = Formula::bind_exec(
      spec({}, {}, "a", "z1"), Formula::bind_exec(spec({}, {"z1"}, "b", "z2"), Formula::truth()));
  CHECK(got2 == expect2);

  CHECK(expand_pomset_diamond(VarPomset{}, Formula::truth()) == Formula::truth());
}

TEST_CASE("greatest fixpoints rewrite to least ones") {
  Formula body = Formula::bind_exec(spec({}, {}, "a", "w"), Formula::prop_apply("X", {}));
  Formula nu = Formula::nu("X", {}, body);
  Formula rewritten = gfp_desugar(nu);
  REQUIRE(rewritten.op() == Formula::Op::neg);
  REQUIRE(rewritten.child(0).op() == Formula::Op::mu);
  // X occurrences negated inside the negated body
  Formula mu_body = rewritten.child(0).child(0);
  REQUIRE(mu_body.op() == Formula::Op::neg);

  // no X occurrence: nu collapses to !mu!body
  Formula vac = Formula::nu("X", {}, Formula::truth());
  CHECK(gfp_desugar(vac) == Formula::neg(Formula::mu("X", {}, Formula::neg(Formula::truth()))));

  // idempotent on mu-only formulas
  Formula mu = Formula::mu("X", {}, body);
  CHECK(gfp_desugar(mu) == mu);
  CHECK(gfp_desugar(gfp_desugar(nu)) == gfp_desugar(nu));
}

TEST_CASE("formula construction rejects malformed binds") {
  CHECK_THROWS_AS(Formula::bind(spec({"z"}, {}, "a", "z"), Formula::truth()), Error);
  CHECK_THROWS_AS(Formula::bind(spec({"x"}, {"x"}, "a", "z"), Formula::truth()), Error);
  BindSpec tau_spec;
  tau_spec.label = Label::tau();
  tau_spec.target = "z";
  CHECK_THROWS_AS(Formula::bind(tau_spec, Formula::truth()), Error);
}
