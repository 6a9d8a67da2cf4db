#include "wtc/fixpoint.hpp"

#include <algorithm>

#include "eval_detail.hpp"

namespace wtc {

std::size_t PropositionEnvironment::arity(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) raise(Errc::unbound_proposition, "proposition '" + name + "' is not bound");
  return it->second.first;
}

const PropositionEnvironment::ElementSet& PropositionEnvironment::elements(
    const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) raise(Errc::unbound_proposition, "proposition '" + name + "' is not bound");
  return it->second.second;
}

void PropositionEnvironment::bind(const std::string& name, std::size_t arity, ElementSet elements) {
  entries_[name] = {arity, std::move(elements)};
}

namespace {

struct BoundProp {
  std::string name;
  std::size_t arity;
  int binder_polarity;  // polarity of the binder position; occurrences are
                        // positive w.r.t. their binder when they match it
};

void walk_positivity(const Formula& phi, int polarity, std::vector<BoundProp> bound,
                     std::vector<std::string>& out) {
  switch (phi.op()) {
    case Formula::Op::prop_apply: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        if (it->name != phi.prop()) continue;
        if (polarity != it->binder_polarity)
          out.push_back("proposition " + phi.prop() + " occurs under an odd number of negations");
        if (it->arity != phi.params().size())
          out.push_back("proposition " + phi.prop() + " applied with " +
                        std::to_string(phi.params().size()) + " variables, arity is " +
                        std::to_string(it->arity));
        return;
      }
      return;
    }
    case Formula::Op::mu:
    case Formula::Op::nu: {
      std::set<Var> fv = free_vars(phi.child(0));
      std::set<Var> ps(phi.params().begin(), phi.params().end());
      if (fv != ps)
        out.push_back("fixpoint " + phi.prop() +
                      " body must have exactly the binder parameters free");
      bound.push_back({phi.prop(), phi.params().size(), polarity});
      walk_positivity(phi.child(0), polarity, std::move(bound), out);
      return;
    }
    case Formula::Op::neg:
      walk_positivity(phi.child(0), -polarity, std::move(bound), out);
      return;
    case Formula::Op::dual_bind:
    case Formula::Op::dual_exec:
      // double negation in the desugaring: polarity preserved
      walk_positivity(phi.child(0), polarity, std::move(bound), out);
      return;
    case Formula::Op::disj:
      walk_positivity(phi.child(0), polarity, bound, out);
      walk_positivity(phi.child(1), polarity, std::move(bound), out);
      return;
    default:
      for (std::size_t i = 0; i < phi.child_count(); ++i)
        walk_positivity(phi.child(i), polarity, bound, out);
      return;
  }
}

}  // namespace

std::vector<std::string> positivity_violations(const Formula& phi) {
  std::vector<std::string> out;
  walk_positivity(phi, +1, {}, out);
  return out;
}

bool positivity_check(const Formula& phi) { return positivity_violations(phi).empty(); }

Denotation mu_denotation(const PrimeEventStructure& pes, const Formula& phi,
                         const PropositionEnvironment& pi, EvalOptions opts) {
  Formula core = desugar(phi);
  if (!positivity_check(core)) {
    auto v = positivity_violations(core);
    raise(Errc::positivity_violation, v.empty() ? "positivity violated" : v.front());
  }
  detail::EvalCtx ctx(pes, opts, &pi);
  return detail::eval(ctx, core);
}

Denotation approximant(const PrimeEventStructure& pes, const Formula& mu_node, std::size_t k,
                       const PropositionEnvironment& pi, EvalOptions opts) {
  Formula core = desugar(mu_node);
  if (core.op() != Formula::Op::mu) raise(Errc::invalid_formula, "approximants unfold a mu node");
  if (!positivity_check(core)) raise(Errc::positivity_violation, positivity_violations(core).front());
  detail::EvalCtx ctx(pes, opts, &pi);
  auto trace = detail::mu_iterates(ctx, core);
  const auto& stage = k < trace.size() ? trace[k] : trace.back();
  return detail::elements_to_denotation(core.params(), stage);
}

std::vector<Denotation> mu_iteration_trace(const PrimeEventStructure& pes, const Formula& mu_node,
                                           const PropositionEnvironment& pi, EvalOptions opts) {
  Formula core = desugar(mu_node);
  if (core.op() != Formula::Op::mu) raise(Errc::invalid_formula, "iteration traces unfold a mu node");
  if (!positivity_check(core)) raise(Errc::positivity_violation, positivity_violations(core).front());
  detail::EvalCtx ctx(pes, opts, &pi);
  auto trace = detail::mu_iterates(ctx, core);
  std::vector<Denotation> out;
  out.reserve(trace.size());
  for (const auto& stage : trace) out.push_back(detail::elements_to_denotation(core.params(), stage));
  return out;
}

}  // namespace wtc
