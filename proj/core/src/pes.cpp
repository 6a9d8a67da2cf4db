#include "wtc/pes.hpp"

#include <algorithm>
#include <queue>

namespace wtc {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::cyclic_causality: return "CyclicCausality";
    case Errc::self_conflict: return "SelfConflict";
    case Errc::causal_conflict_overlap: return "CausalConflictOverlap";
    case Errc::dangling_event: return "DanglingEvent";
    case Errc::unknown_event: return "UnknownEvent";
    case Errc::too_many_events: return "TooManyEvents";
    case Errc::tau_in_carrier: return "TauInCarrier";
    case Errc::inconsistent_set: return "InconsistentSet";
    case Errc::domain_clash: return "DomainClash";
    case Errc::range_clash: return "RangeClash";
    case Errc::tau_argument: return "TauArgument";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::not_applicable: return "NotApplicable";
    case Errc::not_a_bisimulation: return "NotABisimulation";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::unbound_proposition: return "UnboundProposition";
    case Errc::positivity_violation: return "PositivityViolation";
    case Errc::bounds_exceeded: return "BoundsExceeded";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::arity_error: return "ArityError";
    case Errc::invalid_formula: return "InvalidFormula";
  }
  return "Error";
}

EventId PrimeEventStructure::event_by_name(const std::string& name) const {
  for (EventId e = 0; e < names_.size(); ++e)
    if (names_[e] == name) return e;
  raise(Errc::unknown_event, "no event named '" + name + "'");
}

EventSet PrimeEventStructure::causes_of_set(EventSet x) const {
  check_set(x);
  EventSet out;
  for (EventId e : x) out |= cause_sets_[e];
  return out;
}

bool PrimeEventStructure::is_consistent(EventSet x) const {
  check_set(x);
  for (EventId e : x)
    if (conflict_sets_[e].intersects(x)) return false;
  return true;
}

bool PrimeEventStructure::is_downward_closed(EventSet x) const {
  check_set(x);
  for (EventId e : x)
    if (!cause_sets_[e].subset_of(x)) return false;
  return true;
}

EventSet PrimeEventStructure::residual(Configuration c) const {
  check_set(c);
  EventSet out;
  for (EventId e : visible_ - c) {
    if (!conflict_sets_[e].intersects(c)) out.insert(e);
  }
  return out;
}

std::vector<std::pair<EventId, EventId>> PrimeEventStructure::reduced_causality() const {
  std::vector<std::pair<EventId, EventId>> out;
  const EventId n = static_cast<EventId>(labels_.size());
  for (EventId b = 0; b < n; ++b) {
    for (EventId a : cause_sets_[b]) {
      if (a == b) continue;
      bool mediated = false;
      for (EventId c : cause_sets_[b]) {
        if (c != a && c != b && cause_sets_[c].contains(a)) { mediated = true; break; }
      }
      if (!mediated) out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<EventId, EventId>> PrimeEventStructure::causality_pairs() const {
  std::vector<std::pair<EventId, EventId>> out;
  const EventId n = static_cast<EventId>(labels_.size());
  for (EventId b = 0; b < n; ++b)
    for (EventId a : cause_sets_[b])
      if (a != b) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<EventId, EventId>> PrimeEventStructure::minimal_conflicts() const {
  std::vector<std::pair<EventId, EventId>> out;
  const EventId n = static_cast<EventId>(labels_.size());
  for (EventId e = 0; e < n; ++e) {
    for (EventId f : conflict_sets_[e]) {
      if (f < e) continue;
      // minimal iff no other conflicting pair inside the two cause sets
      bool minimal = true;
      for (EventId a : cause_sets_[e]) {
        for (EventId b : cause_sets_[f]) {
          if (a == e && b == f) continue;
          if (conflict_sets_[a].contains(b)) { minimal = false; break; }
        }
        if (!minimal) break;
      }
      if (minimal) out.emplace_back(e, f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<EventId, EventId>> PrimeEventStructure::conflict_pairs() const {
  std::vector<std::pair<EventId, EventId>> out;
  const EventId n = static_cast<EventId>(labels_.size());
  for (EventId e = 0; e < n; ++e)
    for (EventId f : conflict_sets_[e])
      if (e < f) out.emplace_back(e, f);
  return out;
}

PrimeEventStructure validate_pes(const RawPes& raw) {
  const std::size_t n = raw.labels.size();
  if (n > EventSet::capacity)
    raise(Errc::too_many_events, "at most " + std::to_string(EventSet::capacity) + " events supported");

  auto check_pair = [&](const std::pair<EventId, EventId>& p, const char* what) {
    if (p.first >= n || p.second >= n)
      raise(Errc::dangling_event, std::string(what) + " pair (" + std::to_string(p.first) + ", " +
                                      std::to_string(p.second) + ") names an undeclared event");
  };
  for (const auto& p : raw.causes) check_pair(p, "cause");
  for (const auto& p : raw.conflicts) check_pair(p, "conflict");

  // Transitive closure of causality; cause_sets[e] collects {e' | e' <= e}.
  std::vector<EventSet> below(n);  // below[e] = strict predecessors seeded from input pairs
  for (const auto& [a, b] : raw.causes) {
    if (a == b) raise(Errc::cyclic_causality, "self-cause on event " + std::to_string(a));
    below[b].insert(a);
  }
  std::vector<EventSet> cause_sets(n);
  for (EventId e = 0; e < n; ++e) cause_sets[e] = below[e].with(e);
  bool changed = true;
  while (changed) {
    changed = false;
    for (EventId e = 0; e < n; ++e) {
      EventSet acc = cause_sets[e];
      for (EventId p : cause_sets[e]) acc |= cause_sets[p];
      if (acc != cause_sets[e]) { cause_sets[e] = acc; changed = true; }
    }
  }
  for (EventId e = 0; e < n; ++e) {
    for (EventId p : cause_sets[e]) {
      if (p != e && cause_sets[p].contains(e))
        raise(Errc::cyclic_causality,
              "events " + std::to_string(p) + " and " + std::to_string(e) + " cause each other");
    }
  }

  // Hereditary + symmetric saturation: (e', f') in # iff some seed (e, f)
  // has e <= e' and f <= f'.
  std::vector<EventSet> succ(n);  // succ[e] = {f | e <= f}
  for (EventId f = 0; f < n; ++f)
    for (EventId e : cause_sets[f]) succ[e].insert(f);

  std::vector<EventSet> conflict(n);
  bool self_seed = false;
  for (const auto& [a, b] : raw.conflicts) {
    if (a == b) { self_seed = true; continue; }
    for (EventId e : succ[a]) conflict[e] |= succ[b];
    for (EventId e : succ[b]) conflict[e] |= succ[a];
  }
  for (EventId e = 0; e < n; ++e) {
    for (EventId f : conflict[e]) {
      if (e == f) continue;
      if (cause_sets[f].contains(e) || cause_sets[e].contains(f))
        raise(Errc::causal_conflict_overlap, "events " + std::to_string(e) + " and " + std::to_string(f) +
                                                 " are both causally ordered and in conflict");
    }
  }
  if (self_seed) raise(Errc::self_conflict, "conflict pair with identical endpoints");
  for (EventId e = 0; e < n; ++e) {
    if (conflict[e].contains(e)) raise(Errc::self_conflict, "saturation yields a self-conflict on event " + std::to_string(e));
    conflict[e].erase(e);
  }

  PrimeEventStructure pes;
  pes.name_ = raw.name;
  pes.labels_ = raw.labels;
  pes.cause_sets_ = std::move(cause_sets);
  pes.conflict_sets_ = std::move(conflict);
  if (raw.event_names.size() == n) {
    pes.names_ = raw.event_names;
  } else {
    pes.names_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pes.names_.push_back("e" + std::to_string(i));
  }
  for (EventId e = 0; e < n; ++e)
    if (pes.labels_[e].is_visible()) pes.visible_.insert(e);
  return pes;
}

std::vector<Configuration> enumerate_configurations(const PrimeEventStructure& pes) {
  std::vector<Configuration> out;
  std::vector<Configuration> frontier{Configuration{}};
  // BFS over single-event extensions; a sorted list of masks marks visited configs.
  std::vector<std::uint64_t> visited{0};
  auto is_visited = [&](std::uint64_t bits) {
    return std::binary_search(visited.begin(), visited.end(), bits);
  };
  out.push_back(Configuration{});
  while (!frontier.empty()) {
    std::vector<Configuration> next;
    for (Configuration c : frontier) {
      for (EventId e : pes.events() - c) {
        if (!pes.causes(e).without(e).subset_of(c)) continue;
        if (pes.conflicts_with(e).intersects(c)) continue;
        Configuration cx = c.with(e);
        if (!is_visited(cx.bits())) {
          visited.insert(std::lower_bound(visited.begin(), visited.end(), cx.bits()), cx.bits());
          next.push_back(cx);
          out.push_back(cx);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string set_to_string(const PrimeEventStructure& pes, EventSet x) {
  std::string out = "{";
  bool first = true;
  for (EventId e : x) {
    if (!first) out += ",";
    out += pes.event_name(e);
    first = false;
  }
  return out + "}";
}

}  // namespace wtc
