#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wtc/equivalence.hpp"
#include "wtc/fixpoint.hpp"
#include "wtc/logic.hpp"
#include "wtc/parser.hpp"
#include "wtc/suites.hpp"
#include "wtc/term.hpp"
#include "wtc/transitions.hpp"

namespace wtc::cli {

namespace {

using nlohmann::json;

PrimeEventStructure load_pes(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::syntax_error, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pes(buf.str());
}

void write_report(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json witness_json(const PrimeEventStructure& l, const PrimeEventStructure& r, const Verdict& v) {
  json out;
  if (v.flat_witness) {
    json pairs = json::array();
    for (const auto& [a, b] : v.flat_witness->pairs)
      pairs.push_back({{"left", set_to_string(l, a)}, {"right", set_to_string(r, b)}});
    out["pairs"] = std::move(pairs);
  }
  if (v.posetal_witness) {
    json triples = json::array();
    for (const PosetalTriple& t : v.posetal_witness->triples) {
      json iso = json::array();
      for (const auto& [a, b] : t.iso.pairs())
        iso.push_back({{"left", l.event_name(a)}, {"right", r.event_name(b)}});
      triples.push_back({{"left", set_to_string(l, t.left)},
                         {"iso", std::move(iso)},
                         {"right", set_to_string(r, t.right)}});
    }
    out["triples"] = std::move(triples);
  }
  return out;
}

int cmd_validate(const std::string& path, const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  PrimeEventStructure pes = load_pes(path);
  std::cout << "valid PES '" << pes.name() << "': " << pes.event_count() << " events, "
            << pes.visible_events().size() << " visible, " << pes.reduced_causality().size()
            << " causal pairs (reduced), " << pes.minimal_conflicts().size()
            << " minimal conflicts\n";
  write_report(report, json{{"command", "validate"},
                            {"pes", pes.name()},
                            {"verdict", "valid"},
                            {"events", pes.event_count()},
                            {"timing_ms", ms_since(start)}});
  return 0;
}

int cmd_configs(const std::string& path, const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  PrimeEventStructure pes = load_pes(path);
  auto configs = enumerate_configurations(pes);
  json list = json::array();
  for (Configuration c : configs) {
    std::cout << set_to_string(pes, c) << "\n";
    list.push_back(set_to_string(pes, c));
  }
  std::cout << configs.size() << " configurations\n";
  write_report(report, json{{"command", "configs"},
                            {"pes", pes.name()},
                            {"count", configs.size()},
                            {"configurations", std::move(list)},
                            {"timing_ms", ms_since(start)}});
  return 0;
}

json graph_json(const PrimeEventStructure& pes, const ConfigurationGraph& g) {
  json nodes = json::array();
  for (Configuration c : g.nodes) {
    json members = json::array();
    for (EventId e : c) members.push_back(pes.event_name(e));
    nodes.push_back(std::move(members));
  }
  auto pomset_json = [&](const Pomset& p) {
    json carrier = json::array();
    for (std::size_t i = 0; i < p.size(); ++i)
      carrier.push_back({{"event", pes.event_name(p.carrier[i])}, {"label", p.labels[i].name()}});
    json order = json::array();
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j)
        if (p.less(i, j))
          order.push_back({pes.event_name(p.carrier[i]), pes.event_name(p.carrier[j])});
    return json{{"events", std::move(carrier)}, {"order", std::move(order)}};
  };
  json strong = json::array();
  for (const auto& e : g.strong_edges)
    strong.push_back({{"from", e.from}, {"event", pes.event_name(e.event)}, {"to", e.to}});
  json weak_pomset = json::array();
  for (const auto& e : g.weak_pomset_edges)
    weak_pomset.push_back({{"from", e.from}, {"pomset", pomset_json(e.pomset)}, {"to", e.to}});
  json weak_step = json::array();
  for (const auto& e : g.weak_step_edges)
    weak_step.push_back({{"from", e.from}, {"pomset", pomset_json(e.pomset)}, {"to", e.to}});
  return json{{"pes", pes.name()},
              {"nodes", std::move(nodes)},
              {"strong_edges", std::move(strong)},
              {"weak_pomset_edges", std::move(weak_pomset)},
              {"weak_step_edges", std::move(weak_step)}};
}

int cmd_graph(const std::string& path, const std::string& out_path, const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  PrimeEventStructure pes = load_pes(path);
  ConfigurationGraph g = build_configuration_graph(pes);
  json doc = graph_json(pes, g);
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << doc.dump(2) << "\n";
    std::cout << "graph with " << g.nodes.size() << " nodes, " << g.strong_edges.size()
              << " strong edges written to " << out_path << "\n";
  }
  doc["command"] = "graph";
  doc["timing_ms"] = ms_since(start);
  write_report(report, doc);
  return 0;
}

int cmd_check(const std::string& relation, const std::string& left_path,
              const std::string& right_path, bool show_certificate, const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  auto rel = parse_relation_name(relation);
  if (!rel) raise(Errc::bounds_exceeded, "unknown relation '" + relation + "'");
  PrimeEventStructure l = load_pes(left_path);
  PrimeEventStructure r = load_pes(right_path);
  Verdict v = check_bisimulation(*rel, l, r);

  json doc{{"command", "check"},
           {"relation", relation_name(*rel)},
           {"left", l.name()},
           {"right", r.name()},
           {"verdict", v.equivalent ? "equivalent" : "inequivalent"}};
  if (v.equivalent) {
    std::cout << l.name() << " and " << r.name() << " are equivalent under " << relation_name(*rel)
              << "\n";
    std::size_t size = v.flat_witness ? v.flat_witness->pairs.size() : v.posetal_witness->triples.size();
    std::cout << "witness relation: " << size << (v.flat_witness ? " pairs" : " triples") << "\n";
    doc["witness"] = witness_json(l, r, v);
  } else {
    std::cout << l.name() << " and " << r.name() << " are NOT equivalent under "
              << relation_name(*rel) << "\n";
    if (v.certificate)
      std::cout << "distinguishing formula (holds on " << l.name() << "): "
                << v.certificate->to_string() << "\n";
    else if (rel->strength == Strength::strong)
      std::cout << "(no formula certificate: the logic has no strong modality; see the trace)\n";
    if (show_certificate || !v.certificate)
      for (const std::string& line : v.trace) std::cout << "  " << line << "\n";
    doc["certificate"] =
        v.certificate ? json{{"formula", v.certificate->to_string()}, {"holds_on", "left"}} : json();
    doc["trace"] = v.trace;
  }
  doc["timing_ms"] = ms_since(start);
  write_report(report, doc);
  return v.equivalent ? 0 : 1;
}

int cmd_distinguish(const std::string& relation, const std::string& left_path,
                    const std::string& right_path, const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  auto rel = parse_relation_name(relation);
  if (!rel) raise(Errc::bounds_exceeded, "unknown relation '" + relation + "'");
  PrimeEventStructure l = load_pes(left_path);
  PrimeEventStructure r = load_pes(right_path);
  Verdict v = check_bisimulation(*rel, l, r);
  json doc{{"command", "distinguish"},
           {"relation", relation_name(*rel)},
           {"left", l.name()},
           {"right", r.name()},
           {"verdict", v.equivalent ? "equivalent" : "inequivalent"}};
  int rc;
  if (v.equivalent) {
    std::cout << "structures are equivalent under " << relation_name(*rel)
              << "; nothing to distinguish\n";
    rc = 0;
  } else {
    if (v.certificate) {
      std::cout << "distinguishing formula (holds on " << l.name() << "): "
                << v.certificate->to_string() << "\n";
      doc["certificate"] = json{{"formula", v.certificate->to_string()}, {"holds_on", "left"}};
    } else {
      std::cout << "no formula certificate"
                << (rel->strength == Strength::strong ? " (strong relation)" : " (depth bound)")
                << "; refutation trace:\n";
      doc["certificate"] = json();
    }
    for (const std::string& line : v.trace) std::cout << "  " << line << "\n";
    doc["trace"] = v.trace;
    rc = 1;
  }
  doc["timing_ms"] = ms_since(start);
  write_report(report, doc);
  return rc;
}

int cmd_mc(const std::string& path, std::string formula_text, const std::string& formula_file,
           const std::string& config_csv, const std::string& env_csv, bool strict,
           const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  PrimeEventStructure pes = load_pes(path);
  if (!formula_file.empty()) {
    std::ifstream in(formula_file);
    if (!in) raise(Errc::syntax_error, "cannot open '" + formula_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    formula_text = buf.str();
  }
  Formula phi = parse_formula(formula_text);

  Configuration c;
  if (!config_csv.empty()) {
    std::stringstream ss(config_csv);
    std::string item;
    while (std::getline(ss, item, ',')) c.insert(pes.event_by_name(item));
  }
  Environment eta;
  if (!env_csv.empty()) {
    std::stringstream ss(env_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) raise(Errc::syntax_error, "--env expects var=event pairs");
      eta = eta.bound(item.substr(0, eq), pes.event_by_name(item.substr(eq + 1)));
    }
  }
  EvalOptions opts;
  opts.strict_tau_independence = strict;
  bool sat = satisfies(pes, c, eta, phi, opts);
  std::cout << pes.name() << ", " << set_to_string(pes, c) << " "
            << (sat ? "satisfies" : "does NOT satisfy") << " " << phi.to_string() << "\n";
  write_report(report, json{{"command", "mc"},
                            {"pes", pes.name()},
                            {"formula", phi.to_string()},
                            {"config", set_to_string(pes, c)},
                            {"verdict", sat ? "satisfied" : "unsatisfied"},
                            {"timing_ms", ms_since(start)}});
  return sat ? 0 : 1;
}

int cmd_term(const std::string& text, const std::string& out_path, const std::string& name,
             const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  ProcessTerm t = parse_term(text);
  PrimeEventStructure pes = compile_term(t, name);
  std::string printed = print_pes(pes);
  if (out_path.empty()) {
    std::cout << printed;
  } else {
    std::ofstream out(out_path);
    out << printed;
    std::cout << "wrote " << pes.event_count() << "-event PES for '" << print_term(t) << "' to "
              << out_path << "\n";
  }
  write_report(report, json{{"command", "term"},
                            {"term", print_term(t)},
                            {"events", pes.event_count()},
                            {"timing_ms", ms_since(start)}});
  return 0;
}

int cmd_sweep(std::size_t max_events, std::size_t max_tau, const std::string& alphabet_csv,
              const std::string& suite, int depth, std::size_t lemma_cases, unsigned seed,
              std::size_t max_visible, const std::string& report) {
  auto start = std::chrono::steady_clock::now();
  SuiteOptions opts;
  opts.sweep.max_events = max_events;
  opts.sweep.max_tau = max_tau;
  opts.sweep.max_visible = max_visible;
  opts.sweep.alphabet.clear();
  std::stringstream ss(alphabet_csv);
  std::string item;
  while (std::getline(ss, item, ',')) opts.sweep.alphabet.push_back(item);
  opts.depth = depth;
  opts.lemma_cases = lemma_cases;
  opts.seed = seed;

  if (suite.empty()) {
    auto family = sweep_small_pes(opts.sweep);
    std::cout << family.size() << " non-isomorphic structures\n";
    write_report(report, json{{"command", "sweep"},
                              {"structures", family.size()},
                              {"timing_ms", ms_since(start)}});
    return 0;
  }
  SuiteReport rep = run_suite(suite, opts);
  std::cout << "suite " << rep.name << ": " << rep.structures << " structures, " << rep.cases
            << " cases, " << rep.failures << " failures"
            << (rep.ok() ? " [pass]" : " [FAIL]") << "\n";
  for (const std::string& msg : rep.messages) std::cout << "  " << msg << "\n";
  write_report(report, json{{"command", "sweep"},
                            {"suite", rep.name},
                            {"structures", rep.structures},
                            {"cases", rep.cases},
                            {"failures", rep.failures},
                            {"messages", rep.messages},
                            {"verdict", rep.ok() ? "pass" : "fail"},
                            {"timing_ms", ms_since(start)}});
  return rep.ok() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"weak true-concurrency equivalences and logics for finite prime event structures"};
  app.require_subcommand(1);

  std::string pes_path, left_path, right_path, relation, report, out_path;
  std::string formula_text, formula_file, config_csv, env_csv, term_text, term_name = "term";
  std::string suite, alphabet = "a,b";
  bool show_certificate = false, strict = false;
  std::size_t max_events = 3, max_tau = 1, lemma_cases = 1000, max_visible = 0;
  int depth = 3;
  unsigned seed = 20250808;

  auto* validate = app.add_subcommand("validate", "check the PES axioms of a file");
  validate->add_option("pes", pes_path, "PES file")->required();
  validate->add_option("--report", report, "write a JSON report");

  auto* configs = app.add_subcommand("configs", "list all configurations");
  configs->add_option("pes", pes_path, "PES file")->required();
  configs->add_option("--report", report, "write a JSON report");

  auto* graph = app.add_subcommand("graph", "configuration graph with strong and weak edges");
  graph->add_option("pes", pes_path, "PES file")->required();
  graph->add_option("--out", out_path, "write the JSON graph to a file");
  graph->add_option("--report", report, "write a JSON report");

  auto* check = app.add_subcommand("check", "decide a behavioral equivalence");
  check->add_option("--relation", relation, "{weak|strong}-{hm|step|pomset|hp|hhp}")->required();
  check->add_option("left", left_path, "left PES file")->required();
  check->add_option("right", right_path, "right PES file")->required();
  check->add_flag("--certificate", show_certificate, "print the refutation trace as well");
  check->add_option("--report", report, "write a JSON report");

  auto* distinguish = app.add_subcommand("distinguish", "extract a distinguishing formula");
  distinguish->add_option("--relation", relation, "{weak|strong}-{hm|step|pomset|hp|hhp}")->required();
  distinguish->add_option("left", left_path, "left PES file")->required();
  distinguish->add_option("right", right_path, "right PES file")->required();
  distinguish->add_option("--report", report, "write a JSON report");

  auto* mc = app.add_subcommand("mc", "model-check a formula");
  mc->add_option("pes", pes_path, "PES file")->required();
  mc->add_option("--formula", formula_text, "formula text");
  mc->add_option("--formula-file", formula_file, "read the formula from a file");
  mc->add_option("--config", config_csv, "starting configuration: comma-separated event names");
  mc->add_option("--env", env_csv, "environment bindings var=event,...");
  mc->add_flag("--strict-independence", strict, "strict reading of independence over tau chains");
  mc->add_option("--report", report, "write a JSON report");

  auto* term = app.add_subcommand("term", "compile a process term to a PES");
  term->add_option("term", term_text, "term, e.g. \"a.tau.b\" or \"a|b\"")->required();
  term->add_option("--out", out_path, "write the PES file");
  term->add_option("--name", term_name, "PES name");
  term->add_option("--report", report, "write a JSON report");

  auto* sweep = app.add_subcommand("sweep", "enumerate small structures and run a property suite");
  sweep->add_option("--max-events", max_events, "event bound (<= 5)");
  sweep->add_option("--max-tau", max_tau, "tau bound (<= 2)");
  sweep->add_option("--max-visible", max_visible, "visible-event bound (0 = unlimited)");
  sweep->add_option("--alphabet", alphabet, "comma-separated visible labels");
  sweep->add_option("--suite", suite, "property suite to run (omit to just count)");
  sweep->add_option("--depth", depth, "bounded enumeration depth");
  sweep->add_option("--cases", lemma_cases, "cases per lemma for the lemmas suite");
  sweep->add_option("--seed", seed, "rng seed for generated cases");
  sweep->add_option("--report", report, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(pes_path, report);
    if (configs->parsed()) return cmd_configs(pes_path, report);
    if (graph->parsed()) return cmd_graph(pes_path, out_path, report);
    if (check->parsed()) return cmd_check(relation, left_path, right_path, show_certificate, report);
    if (distinguish->parsed()) return cmd_distinguish(relation, left_path, right_path, report);
    if (mc->parsed()) {
      if (formula_text.empty() && formula_file.empty()) {
        std::cerr << "mc needs --formula or --formula-file\n";
        return 2;
      }
      return cmd_mc(pes_path, formula_text, formula_file, config_csv, env_csv, strict, report);
    }
    if (term->parsed()) return cmd_term(term_text, out_path, term_name, report);
    if (sweep->parsed())
      return cmd_sweep(max_events, max_tau, alphabet, suite, depth, lemma_cases, seed, max_visible,
                       report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace wtc::cli
