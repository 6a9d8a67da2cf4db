#pragma once

#include <vector>

#include "wtc/fixpoint.hpp"
#include "wtc/logic.hpp"

namespace wtc::detail {

struct EvalCtx {
  const PrimeEventStructure& pes;
  EvalOptions opts;
  const PropositionEnvironment* props;     // may be null
  std::vector<Configuration> configs;      // all configurations, sorted

  explicit EvalCtx(const PrimeEventStructure& p, EvalOptions o = {},
                   const PropositionEnvironment* pr = nullptr)
      : pes(p), opts(o), props(pr), configs(enumerate_configurations(p)) {}

  EvalCtx(const PrimeEventStructure& p, EvalOptions o, const PropositionEnvironment* pr,
          std::vector<Configuration> cfgs)
      : pes(p), opts(o), props(pr), configs(std::move(cfgs)) {}
};

/// Evaluates a core formula (truth/conj/neg/bind/exec plus prop_apply/mu).
Denotation eval(const EvalCtx& ctx, const Formula& phi);

/// Legal pairs with environments over exactly the given variables.
std::vector<LegalPair> legal_pairs_for(const EvalCtx& ctx, const std::set<Var>& vars);

/// Weak single-event successors computed against the cached configuration
/// list.
std::vector<Configuration> weak_succs(const EvalCtx& ctx, Configuration c, EventId e);

/// One lfp iteration trace for a mu node: S_0 .. S_m with S_m = S_{m-1}.
std::vector<PropositionEnvironment::ElementSet> mu_iterates(const EvalCtx& ctx,
                                                            const Formula& mu_node);

Denotation elements_to_denotation(const std::vector<Var>& params,
                                  const PropositionEnvironment::ElementSet& elems);

}  // namespace wtc::detail
