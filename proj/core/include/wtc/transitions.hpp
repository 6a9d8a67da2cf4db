#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wtc/pes.hpp"
#include "wtc/pomset.hpp"

namespace wtc {

/// A pomset-labelled transition: the executed pomset and the target
/// configuration.
struct PomsetStep {
  Pomset pomset;
  Configuration target;

  friend bool operator==(const PomsetStep& a, const PomsetStep& b) {
    return a.target == b.target && a.pomset == b.pomset;
  }
  friend bool operator<(const PomsetStep& a, const PomsetStep& b) {
    if (a.target != b.target) return a.target < b.target;
    return a.pomset < b.pomset;
  }
};

/// Single-event firings: all (e, C u {e}) with e enabled at C. Includes
/// tau events.
std::vector<std::pair<EventId, Configuration>> strong_successors(const PrimeEventStructure& pes,
                                                                 Configuration c);

/// Configurations reachable from C by firing tau events only (reflexive,
/// transitive). Sorted.
std::vector<Configuration> tau_closure(const PrimeEventStructure& pes, Configuration c);

/// All C' with C =>e C', i.e. tau* e tau*. e must be visible (TauArgument
/// otherwise).
std::vector<Configuration> weak_event_successors(const PrimeEventStructure& pes, Configuration c,
                                                 EventId e);

/// All weak pomset transitions from C: pairs (X, C') with X the non-empty set
/// of visible events added on the way to C' (tau events absorbed freely),
/// X returned as its induced pomset. Computed by the definition filter over
/// superset configurations.
std::vector<PomsetStep> weak_pomset_successors(const PrimeEventStructure& pes, Configuration c);

/// Weak steps: the subset of weak pomset transitions whose carrier is
/// pairwise concurrent.
std::vector<PomsetStep> weak_step_successors(const PrimeEventStructure& pes, Configuration c);

/// Independent route for cross-checking: weak pomset transitions computed by
/// exhaustive interleaved firing of single events (tau* paths), not by the
/// definition filter.
std::vector<PomsetStep> weak_pomset_successors_by_search(const PrimeEventStructure& pes,
                                                         Configuration c);

/// Strong pomset transitions C ->X C' with X = C' \ C non-empty; tau events
/// participate with their label.
std::vector<PomsetStep> strong_pomset_successors(const PrimeEventStructure& pes, Configuration c);

/// Strong steps: strong pomset transitions with pairwise concurrent carrier.
std::vector<PomsetStep> strong_step_successors(const PrimeEventStructure& pes, Configuration c);

/// The full configuration graph: nodes plus the strong, weak-pomset and
/// weak-step edge families, deterministically ordered.
struct ConfigurationGraph {
  struct StrongEdge {
    std::size_t from;
    EventId event;
    std::size_t to;
  };
  struct WeakEdge {
    std::size_t from;
    Pomset pomset;
    std::size_t to;
  };

  std::vector<Configuration> nodes;  // sorted by (size, mask)
  std::vector<StrongEdge> strong_edges;
  std::vector<WeakEdge> weak_pomset_edges;
  std::vector<WeakEdge> weak_step_edges;

  std::size_t index_of(Configuration c) const;
};

ConfigurationGraph build_configuration_graph(const PrimeEventStructure& pes);

}  // namespace wtc
