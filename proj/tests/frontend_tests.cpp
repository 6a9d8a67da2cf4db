#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "../tools/cli.hpp"
#include "helpers.hpp"
#include "wtc/equivalence.hpp"
#include "wtc/generate.hpp"
#include "wtc/parser.hpp"
#include "wtc/sweep.hpp"
#include "wtc/term.hpp"

using namespace wtc;

namespace {

const char* kFig1Left = R"(pes fig1-left
# a then b with a silent step in between
event e1 a
event e2 tau
event e3 b
cause e1 e2
cause e2 e3
)";

const char* kFig1Right = R"(pes fig1-right
event f1 a
event f2 b
cause f1 f2
)";

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/wtc_test_" + name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"wtc"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return wtc::cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("the pes format parses the worked example") {
  PrimeEventStructure pes = parse_pes(kFig1Left);
  CHECK(pes.name() == "fig1-left");
  CHECK(pes == test::a_tau_b());
  CHECK(pes.event_name(0) == "e1");

  CHECK(parse_pes("pes empty\n").event_count() == 0);

  try {
    parse_pes("pes p\nevent e1 a\ncause e1 e9\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dangling_event);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_pes("pes p\nevent e a\nevent e b\n"), Error);
  CHECK_THROWS_AS(parse_pes("bogus directive\n"), Error);
}

TEST_CASE("pes printing round-trips") {
  std::mt19937 rng(71);
  PesGenOptions gen;
  for (int i = 0; i < 60; ++i) {
    PrimeEventStructure pes = random_pes(rng, gen);
    CHECK(parse_pes(print_pes(pes)) == pes);
  }
  CHECK(parse_pes(print_pes(test::a_tau_b())) == test::a_tau_b());
}

TEST_CASE("formula parsing matches the spec examples") {
  Formula f1 = parse_formula("<<|{} {}~ << a x|>> T");
  CHECK(f1.op() == Formula::Op::bind_exec);
  CHECK(f1.spec().label == Label::visible("a"));
  CHECK(f1.spec().target == "x");

  Formula f2 = parse_formula("T & !T");
  CHECK(f2 == Formula::conj(Formula::truth(), Formula::neg(Formula::truth())));

  Formula f3 = parse_formula("mu X(). <<|{} {}~ << a z|>> X()");
  CHECK(f3.op() == Formula::Op::mu);
  CHECK(f3.prop() == "X");
  CHECK(f3.params().empty());

  // comma between the vlists is accepted too
  CHECK(parse_formula("<<|{}, {}~ << a x|>> T") == f1);

  // dual operators and products
  Formula f4 = parse_formula("[[z]] T");
  CHECK(f4.op() == Formula::Op::dual_exec);
  Formula f5 = parse_formula("{{x}, {}~ << b z} T");
  CHECK(f5.op() == Formula::Op::dual_bind);
  Formula f6 = parse_formula("(<<|{},{}~ << a x|>> (x) <<|{},{}~ << b y|>>) T");
  CHECK(f6.op() == Formula::Op::step_product);
  CHECK(f6.factors().size() == 2);
  Formula f7 = parse_formula("(({},{}~ << a x) (x) ({},{}~ << b y)) T");
  CHECK(f7.op() == Formula::Op::step_product);
  CHECK_FALSE(f7.product_execs());

  // parenthesized bind-prefixed formula vs single-factor product
  Formula f8 = parse_formula("(({},{}~ << a x) <<x>> T) & T");
  CHECK(f8.op() == Formula::Op::conj);
  Formula f9 = parse_formula("(({},{}~ << a x)) T");
  CHECK(f9.op() == Formula::Op::step_product);
  CHECK(f9.factors().size() == 1);

  CHECK_THROWS_AS(parse_formula("<<|{} {}~ << tau x|>> T"), Error);
  CHECK_THROWS_AS(parse_formula("T &"), Error);
  CHECK_THROWS_AS(parse_formula(""), Error);
}

TEST_CASE("formula printing round-trips modulo desugaring") {
  std::mt19937 rng(73);
  FormulaGenOptions gen;
  gen.free_pool = {"u"};
  for (int i = 0; i < 200; ++i) {
    Formula phi = random_formula(rng, gen);
    Formula reparsed = parse_formula(phi.to_string());
    CHECK(desugar(reparsed) == desugar(phi));
  }
  // surface forms parse back to identical nodes
  Formula surface = parse_formula("{{x}, {}~ << b z} [[w]] T | !T & T");
  CHECK(parse_formula(surface.to_string()) == surface);

  // fixpoint formulas round-trip, including greedy bodies and nesting
  for (const char* text : {
           "mu X(). <<|{} {}~ << a z|>> X()",
           "nu X(). [[u]] T & <<|{} {}~ << b z|>> X()",
           "mu X(). T | <<|{} {}~ << a z|>> (X() & nu Y(). <<|{} {}~ << b w|>> Y())",
       }) {
    Formula phi = parse_formula(text);
    CHECK(parse_formula(phi.to_string()) == phi);
  }
}

TEST_CASE("process terms compile to the expected structures") {
  CHECK(compile_term(parse_term("a.tau.b")) == test::a_tau_b());
  CHECK(compile_term(parse_term("0")).event_count() == 0);

  PrimeEventStructure par = compile_term(parse_term("a|b"));
  CHECK(par.event_count() == 2);
  CHECK(par.concurrent(0, 1));

  PrimeEventStructure dia = compile_term(parse_term("a.b + b.a"));
  CHECK(dia.event_count() == 4);
  CHECK(dia.conflict_pairs().size() == 4);  // saturated cross-branch conflicts

  PrimeEventStructure nested = compile_term(parse_term("(a + b) | tau"));
  CHECK(nested.event_count() == 3);

  CHECK(print_term(parse_term("a.b + b.a")) == "a.b + b.a");
  CHECK_THROWS_AS(parse_term("a..b"), Error);
}

TEST_CASE("sweep counts on the tiny families") {
  SweepSpec one;
  one.max_events = 1;
  one.max_tau = 0;
  one.alphabet = {"a"};
  CHECK(sweep_small_pes(one).size() == 2);  // empty and a single a

  SweepSpec zero;
  zero.max_events = 0;
  CHECK(sweep_small_pes(zero).size() == 1);

  SweepSpec two;
  two.max_events = 2;
  two.max_tau = 0;
  two.alphabet = {"a"};
  // empty, single, chain aa, antichain aa, conflict aa
  CHECK(sweep_small_pes(two).size() == 5);

  SweepSpec too_big;
  too_big.max_events = 6;
  CHECK_THROWS_AS(sweep_small_pes(too_big), Error);
}

TEST_CASE("sweeps are deterministic and isomorphism-reduced") {
  SweepSpec spec;
  spec.max_events = 2;
  spec.max_tau = 1;
  auto a = sweep_small_pes(spec);
  auto b = sweep_small_pes(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) CHECK_FALSE(isomorphic_pes(a[i], a[j]));
}

TEST_CASE("canonical keys identify relabelled copies") {
  // the same chain declared in two different event orders
  PrimeEventStructure p1 = parse_pes("pes p\nevent x a\nevent y b\ncause x y\n");
  PrimeEventStructure p2 = parse_pes("pes q\nevent y b\nevent x a\ncause x y\n");
  CHECK(isomorphic_pes(p1, p2));
  CHECK(canonical_key(p1) == canonical_key(p2));
  PrimeEventStructure p3 = parse_pes("pes r\nevent x a\nevent y b\ncause y x\n");
  CHECK_FALSE(isomorphic_pes(p1, p3));
}

TEST_CASE("cli verdicts agree with the library") {
  TempFile left("fig1_left.pes", kFig1Left);
  TempFile right("fig1_right.pes", kFig1Right);

  CHECK(run_cli({"check", "--relation", "weak-hhp", left.path, right.path}) == 0);
  CHECK(run_cli({"check", "--relation", "strong-hm", left.path, right.path, "--certificate"}) == 1);
  CHECK(run_cli({"validate", left.path}) == 0);
  CHECK(run_cli({"configs", left.path}) == 0);
  CHECK(run_cli({"graph", left.path, "--out", "/tmp/wtc_test_graph.json"}) == 0);
  CHECK(run_cli({"mc", left.path, "--formula", "<<|{} {}~ << a x|>> T"}) == 0);
  CHECK(run_cli({"mc", left.path, "--formula", "<<|{} {}~ << b x|>> T"}) == 1);
  CHECK(run_cli({"distinguish", "--relation", "weak-step", left.path, right.path}) == 0);
  CHECK(run_cli({"term", "a.tau.b", "--out", "/tmp/wtc_test_term.pes"}) == 0);
  CHECK(run_cli({"check", "--relation", "weak-hm", "/tmp/wtc_test_term.pes", left.path}) == 0);
  std::remove("/tmp/wtc_test_term.pes");
  std::remove("/tmp/wtc_test_graph.json");

  // parity across every relation on the worked pair
  for (Strength s : {Strength::weak, Strength::strong}) {
    for (Kind k : {Kind::interleaving, Kind::step, Kind::pomset, Kind::hp, Kind::hhp}) {
      EquivalenceKind rel{k, s};
      Verdict v = check_bisimulation(rel, test::a_tau_b(), test::a_b());
      int rc = run_cli({"check", "--relation", relation_name(rel), left.path, right.path});
      CHECK(rc == (v.equivalent ? 0 : 1));
    }
  }

  // usage and input errors exit with 2
  CHECK(run_cli({"check", "--relation", "weak-banana", left.path, right.path}) == 2);
  CHECK(run_cli({"validate", "/tmp/definitely_missing.pes"}) == 2);
  TempFile broken("broken.pes", "pes p\nevent e a\ncause e zzz\n");
  CHECK(run_cli({"validate", broken.path}) == 2);
}
