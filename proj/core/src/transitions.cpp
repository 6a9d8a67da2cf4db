#include "wtc/transitions.hpp"

#include <algorithm>

namespace wtc {

std::vector<std::pair<EventId, Configuration>> strong_successors(const PrimeEventStructure& pes,
                                                                 Configuration c) {
  std::vector<std::pair<EventId, Configuration>> out;
  for (EventId e : pes.events() - c) {
    if (!pes.causes(e).without(e).subset_of(c)) continue;
    if (pes.conflicts_with(e).intersects(c)) continue;
    out.emplace_back(e, c.with(e));
  }
  return out;
}

std::vector<Configuration> tau_closure(const PrimeEventStructure& pes, Configuration c) {
  std::vector<Configuration> out{c};
  std::vector<Configuration> frontier{c};
  while (!frontier.empty()) {
    std::vector<Configuration> next;
    for (Configuration cur : frontier) {
      for (const auto& [e, cx] : strong_successors(pes, cur)) {
        if (!pes.label(e).is_tau()) continue;
        if (std::find(out.begin(), out.end(), cx) == out.end()) {
          out.push_back(cx);
          next.push_back(cx);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Configuration> weak_event_successors(const PrimeEventStructure& pes, Configuration c,
                                                 EventId e) {
  if (pes.label(e).is_tau()) raise(Errc::tau_argument, "weak transitions are labelled by visible events");
  std::vector<Configuration> out;
  if (c.contains(e)) return out;
  // C =>e C'  iff  C <= C', C' a configuration, and the visible difference is {e}.
  for (Configuration cx : enumerate_configurations(pes)) {
    if (!c.subset_of(cx)) continue;
    if (pes.visible_part(cx - c) != EventSet::single(e)) continue;
    out.push_back(cx);
  }
  return out;
}

namespace {

std::vector<PomsetStep> weak_from_targets(const PrimeEventStructure& pes, Configuration c,
                                          const std::vector<Configuration>& targets) {
  std::vector<PomsetStep> out;
  for (Configuration cx : targets) {
    EventSet x = pes.visible_part(cx - c);
    if (x.empty()) continue;
    out.push_back(PomsetStep{induced_pomset(pes, x), cx});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool pairwise_concurrent(const PrimeEventStructure& pes, const Pomset& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (!pes.concurrent(p.carrier[i], p.carrier[j])) return false;
  return true;
}

}  // namespace

std::vector<PomsetStep> weak_pomset_successors(const PrimeEventStructure& pes, Configuration c) {
  std::vector<Configuration> targets;
  for (Configuration cx : enumerate_configurations(pes))
    if (c.subset_of(cx) && cx != c) targets.push_back(cx);
  return weak_from_targets(pes, c, targets);
}

std::vector<PomsetStep> weak_step_successors(const PrimeEventStructure& pes, Configuration c) {
  std::vector<PomsetStep> out;
  for (PomsetStep& s : weak_pomset_successors(pes, c))
    if (pairwise_concurrent(pes, s.pomset)) out.push_back(std::move(s));
  return out;
}

std::vector<PomsetStep> weak_pomset_successors_by_search(const PrimeEventStructure& pes,
                                                         Configuration c) {
  // Exhaustive interleaved firing: explore every single-event extension
  // reachable from C and keep endpoints whose path fired at least one
  // visible event.
  std::vector<Configuration> reached{c};
  std::vector<Configuration> frontier{c};
  while (!frontier.empty()) {
    std::vector<Configuration> next;
    for (Configuration cur : frontier) {
      for (const auto& [e, cx] : strong_successors(pes, cur)) {
        if (std::find(reached.begin(), reached.end(), cx) == reached.end()) {
          reached.push_back(cx);
          next.push_back(cx);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<Configuration> targets;
  for (Configuration cx : reached)
    if (cx != c) targets.push_back(cx);
  return weak_from_targets(pes, c, targets);
}

std::vector<PomsetStep> strong_pomset_successors(const PrimeEventStructure& pes, Configuration c) {
  std::vector<PomsetStep> out;
  for (Configuration cx : enumerate_configurations(pes)) {
    if (!c.subset_of(cx) || cx == c) continue;
    out.push_back(PomsetStep{labelled_poset(pes, cx - c), cx});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PomsetStep> strong_step_successors(const PrimeEventStructure& pes, Configuration c) {
  std::vector<PomsetStep> out;
  for (PomsetStep& s : strong_pomset_successors(pes, c))
    if (pairwise_concurrent(pes, s.pomset)) out.push_back(std::move(s));
  return out;
}

std::size_t ConfigurationGraph::index_of(Configuration c) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), c);
  if (it == nodes.end() || *it != c) raise(Errc::unknown_event, "configuration is not a graph node");
  return static_cast<std::size_t>(it - nodes.begin());
}

ConfigurationGraph build_configuration_graph(const PrimeEventStructure& pes) {
  ConfigurationGraph g;
  g.nodes = enumerate_configurations(pes);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (const auto& [e, cx] : strong_successors(pes, g.nodes[i]))
      g.strong_edges.push_back({i, e, g.index_of(cx)});
    for (const PomsetStep& s : weak_pomset_successors(pes, g.nodes[i])) {
      ConfigurationGraph::WeakEdge edge{i, s.pomset, g.index_of(s.target)};
      g.weak_pomset_edges.push_back(edge);
      if (pairwise_concurrent(pes, s.pomset)) g.weak_step_edges.push_back(edge);
    }
  }
  return g;
}

}  // namespace wtc
