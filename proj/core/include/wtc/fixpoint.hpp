#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wtc/logic.hpp"

namespace wtc {

/// An abstract proposition: a name with an arity.
struct Proposition {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Proposition& a, const Proposition& b) {
    return a.name == b.name && a.arity == b.arity;
  }
  friend bool operator<(const Proposition& a, const Proposition& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.arity < b.arity;
  }
};

/// Maps propositions to sets of (configuration, positional event vector)
/// elements; the event vector lists the images of the proposition's
/// parameters in order.
class PropositionEnvironment {
public:
  using Element = std::pair<Configuration, std::vector<EventId>>;
  using ElementSet = std::set<Element>;

  bool binds(const std::string& name) const { return entries_.count(name) > 0; }
  std::size_t arity(const std::string& name) const;
  const ElementSet& elements(const std::string& name) const;

  void bind(const std::string& name, std::size_t arity, ElementSet elements);

private:
  std::map<std::string, std::pair<std::size_t, ElementSet>> entries_;
};

/// Every bound proposition occurs under an even number of negations within
/// its binder's body, applications match the binder arity, and fixpoint
/// bodies have exactly the binder parameters free.
bool positivity_check(const Formula& phi);

/// The violations behind a failed positivity_check; empty when it passes.
std::vector<std::string> positivity_violations(const Formula& phi);

/// Denotation of a fixpoint formula: the core evaluation extended with
/// proposition lookup and least-fixpoint iteration over the finite lattice of
/// legal-pair sets. Requires positivity; pi must bind the free propositions.
Denotation mu_denotation(const PrimeEventStructure& pes, const Formula& phi,
                         const PropositionEnvironment& pi = {}, EvalOptions opts = {});

/// S_k of the iteration sequence for a mu node; equals mu_denotation for all
/// k at or beyond the stabilization index.
Denotation approximant(const PrimeEventStructure& pes, const Formula& mu_node, std::size_t k,
                       const PropositionEnvironment& pi = {}, EvalOptions opts = {});

/// S_0, S_1, ..., S_m with S_m the first iterate equal to its predecessor;
/// the stabilization index is m (the number of function applications until a
/// repeat is observed).
std::vector<Denotation> mu_iteration_trace(const PrimeEventStructure& pes, const Formula& mu_node,
                                           const PropositionEnvironment& pi = {},
                                           EvalOptions opts = {});

}  // namespace wtc
