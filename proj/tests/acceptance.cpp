// Acceptance suite: one pass/fail line per criterion. Exit 0 iff all pass.
// Run a subset with --criterion N (repeatable).

#include <chrono>
#include <cstring>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "wtc/equivalence.hpp"
#include "wtc/fixpoint.hpp"
#include "wtc/logic.hpp"
#include "wtc/suites.hpp"
#include "wtc/term.hpp"
#include "wtc/transitions.hpp"

using namespace wtc;

namespace {

struct Criterion {
  int number;
  std::string title;
  double time_limit_s;  // 0 = no limit
  bool (*run)(std::string& detail);
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool suite_ok(const SuiteReport& rep, std::string& detail) {
  detail = std::to_string(rep.cases) + " cases over " + std::to_string(rep.structures) +
           " structures, " + std::to_string(rep.failures) + " failures";
  for (const std::string& msg : rep.messages) detail += "\n      " + msg;
  return rep.ok();
}

SuiteOptions default_options() {
  SuiteOptions opts;
  opts.sweep.max_events = 3;
  opts.sweep.max_tau = 1;
  opts.sweep.alphabet = {"a", "b"};
  opts.depth = 3;
  return opts;
}

// 1. a.tau.b vs a.b: equivalent under every weak relation, inequivalent under
// strong interleaving.
bool criterion1(std::string& detail) {
  PrimeEventStructure left = compile_term(parse_term("a.tau.b"), "fig1-left");
  PrimeEventStructure right = compile_term(parse_term("a.b"), "fig1-right");
  bool ok = true;
  detail.clear();
  for (Kind kind : {Kind::interleaving, Kind::step, Kind::pomset, Kind::hp, Kind::hhp}) {
    Verdict v = check_bisimulation({kind, Strength::weak}, left, right);
    if (!v.equivalent) {
      ok = false;
      detail += std::string("\n      weak-") + kind_name(kind) + " reported inequivalent";
    }
  }
  Verdict strong = check_flat_bisim(Kind::interleaving, Strength::strong, left, right);
  if (strong.equivalent) {
    ok = false;
    detail += "\n      strong-hm reported equivalent";
  }
  if (strong.trace.empty()) {
    ok = false;
    detail += "\n      strong-hm produced no refutation trace";
  }
  if (detail.empty()) detail = "5 weak relations equivalent, strong-hm refuted with a trace";
  return ok;
}

bool criterion2(std::string& detail) {
  return suite_ok(run_suite("strong-implies-weak", default_options()), detail);
}

bool criterion3(std::string& detail) {
  return suite_ok(run_suite("hierarchy", default_options()), detail);
}

bool criterion4(std::string& detail) {
  return suite_ok(run_suite("certificates", default_options()), detail);
}

bool criterion5(std::string& detail) {
  SuiteOptions opts = default_options();
  opts.sweep.max_visible = 2;
  return suite_ok(run_suite("coincidence", opts), detail);
}

bool criterion6(std::string& detail) {
  SuiteOptions opts = default_options();
  opts.lemma_cases = 1000;
  return suite_ok(run_suite("lemmas", opts), detail);
}

bool criterion7(std::string& detail) {
  return suite_ok(run_suite("quotient", default_options()), detail);
}

bool criterion8(std::string& detail) {
  SuiteReport rep = run_suite("fixpoint", default_options());
  bool ok = suite_ok(rep, detail);

  // the worked liveness example: mu X(). (<<|b z|>>T | <<|a z|>>X()) on a.tau.b
  PrimeEventStructure fig1 = compile_term(parse_term("a.tau.b"), "fig1-left");
  BindSpec b_spec{{}, {}, Label::visible("b"), "z"};
  BindSpec a_spec{{}, {}, Label::visible("a"), "z"};
  Formula mu = Formula::mu(
      "X", {},
      Formula::disj(Formula::bind_exec(b_spec, Formula::truth()),
                    Formula::bind_exec(a_spec, Formula::prop_apply("X", {}))));
  Denotation den = mu_denotation(fig1, mu);
  std::set<Configuration> got;
  for (const LegalPair& lp : den.pairs) got.insert(lp.config);
  Configuration c1 = EventSet::single(0);
  Configuration c2 = EventSet::single(0) | EventSet::single(1);
  std::set<Configuration> expect{Configuration{}, c1, c2};
  if (got != expect) {
    ok = false;
    detail += "\n      liveness example denotation differs from the derived value";
  }
  auto trace = mu_iteration_trace(fig1, mu);
  if (trace.size() != 4) {  // stabilization index 3
    ok = false;
    detail += "\n      liveness example stabilization index is not 3";
  }
  return ok;
}

bool criterion9(std::string& detail) {
  return suite_ok(run_suite("successors", default_options()), detail);
}

const Criterion kCriteria[] = {
    {1, "Fig. 1 reproduction: weakly equivalent, strongly distinguished", 1.0, criterion1},
    {2, "strong equivalence implies weak equivalence on the exhaustive sweep", 300.0, criterion2},
    {3, "weak equivalence hierarchy hhp => hp => pomset => step => hm", 0.0, criterion3},
    {4, "every inequivalent pair yields a verified fragment certificate", 0.0, criterion4},
    {5, "bounded fragment enumeration agrees with the checkers at depth 3", 600.0, criterion5},
    {6, "negation, legality, environment and bind-prefix lemmas on 1000+ cases each", 0.0,
     criterion6},
    {7, "quotient construction validates and its projections re-check", 0.0, criterion7},
    {8, "fixpoint stabilization, gfp/lfp duality and the liveness example", 0.0, criterion8},
    {9, "weak pomset successor routes agree on every structure up to 6 events", 0.0, criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) selected.insert(std::atoi(argv[++i]));
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed = seconds_since(start);
    if (c.time_limit_s > 0 && elapsed > c.time_limit_s) {
      ok = false;
      detail += "\n      exceeded the " + std::to_string(c.time_limit_s) + "s budget";
    }
    std::printf("[%s] criterion %d: %s (%.2fs): %s\n", ok ? "PASS" : "FAIL", c.number,
                c.title.c_str(), elapsed, detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
