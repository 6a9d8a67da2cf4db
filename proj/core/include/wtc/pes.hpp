#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wtc/error.hpp"
#include "wtc/event_set.hpp"
#include "wtc/label.hpp"

namespace wtc {

/// A configuration is a downward-closed, conflict-free set of events of one
/// PES. Validity against a given structure is checked by is_configuration().
using Configuration = EventSet;

/// Unvalidated PES description: labelled events plus generating cause and
/// conflict pairs. Causality is transitively closed and conflict is
/// hereditarily saturated by validate_pes.
struct RawPes {
  std::string name;
  std::vector<Label> labels;                           // one entry per event, ids 0..n-1
  std::vector<std::pair<EventId, EventId>> causes;     // generating pairs (e, e') meaning e < e'
  std::vector<std::pair<EventId, EventId>> conflicts;  // generating pairs, unordered
  std::vector<std::string> event_names;                // optional; defaults to e0..e{n-1}
};

/// Finite prime event structure with silent events: labelled events, a causal
/// partial order and a hereditary, irreflexive, symmetric conflict relation,
/// with no pair both ordered and in conflict. Immutable after validation.
class PrimeEventStructure {
public:
  /// Default-constructed structures are the empty PES.
  PrimeEventStructure() = default;

  std::size_t event_count() const { return labels_.size(); }
  EventSet events() const { return EventSet::first_n(labels_.size()); }
  EventSet visible_events() const { return visible_; }
  bool has_tau() const { return visible_ != events(); }

  const std::string& name() const { return name_; }
  const Label& label(EventId e) const { check_event(e); return labels_[e]; }
  const std::string& event_name(EventId e) const { check_event(e); return names_[e]; }
  /// Index of the named event, or throws UnknownEvent.
  EventId event_by_name(const std::string& name) const;

  /// e <= e' in the full causal order (reflexive).
  bool leq(EventId e, EventId f) const { check_event(e); check_event(f); return cause_sets_[f].contains(e); }
  bool strictly_below(EventId e, EventId f) const { return e != f && leq(e, f); }
  /// e # e' in the saturated conflict relation.
  bool in_conflict(EventId e, EventId f) const { check_event(e); check_event(f); return conflict_sets_[e].contains(f); }
  bool consistent(EventId e, EventId f) const { return !in_conflict(e, f); }
  /// e || e': unordered both ways and not in conflict.
  bool concurrent(EventId e, EventId f) const {
    return !leq(e, f) && !leq(f, e) && !in_conflict(e, f);
  }

  /// Cause set of e, including e itself.
  EventSet causes(EventId e) const { check_event(e); return cause_sets_[e]; }
  /// Downward closure of an event set.
  EventSet causes_of_set(EventSet x) const;
  /// Events in conflict with e.
  EventSet conflicts_with(EventId e) const { check_event(e); return conflict_sets_[e]; }

  /// No two members in conflict.
  bool is_consistent(EventSet x) const;
  bool is_downward_closed(EventSet x) const;
  bool is_configuration(EventSet x) const { return check_set(x), is_downward_closed(x) && is_consistent(x); }

  /// X minus its tau-labelled events.
  EventSet visible_part(EventSet x) const { check_set(x); return x & visible_; }
  /// Residual E[C]: visible events outside C consistent with every member of C.
  EventSet residual(Configuration c) const;

  /// Transitive reduction of the strict causal order.
  std::vector<std::pair<EventId, EventId>> reduced_causality() const;
  /// Full strict causal order as pairs (e, f) with e < f.
  std::vector<std::pair<EventId, EventId>> causality_pairs() const;
  /// Minimal generating conflicts: pairs whose saturation yields the full relation.
  std::vector<std::pair<EventId, EventId>> minimal_conflicts() const;
  /// Full saturated conflict relation as pairs (e, f) with e < f numerically.
  std::vector<std::pair<EventId, EventId>> conflict_pairs() const;

  /// Structural equality: same event count, labels, causal order and conflict.
  friend bool operator==(const PrimeEventStructure& a, const PrimeEventStructure& b) {
    return a.labels_ == b.labels_ && a.cause_sets_ == b.cause_sets_ && a.conflict_sets_ == b.conflict_sets_;
  }

  friend PrimeEventStructure validate_pes(const RawPes& raw);

private:
  void check_event(EventId e) const {
    if (e >= labels_.size()) raise(Errc::unknown_event, "event id " + std::to_string(e) + " not declared");
  }
  void check_set(EventSet x) const {
    if (!x.subset_of(events())) raise(Errc::unknown_event, "set mentions undeclared events");
  }

  std::string name_;
  std::vector<Label> labels_;
  std::vector<std::string> names_;
  std::vector<EventSet> cause_sets_;    // cause_sets_[e] = causes of e, including e
  std::vector<EventSet> conflict_sets_; // saturated, symmetric, irreflexive
  EventSet visible_;
};

/// Checks the PES axioms, transitively closing causality and hereditarily
/// saturating conflict. Throws CyclicCausality, SelfConflict,
/// CausalConflictOverlap, DanglingEvent or TooManyEvents.
PrimeEventStructure validate_pes(const RawPes& raw);

/// All configurations, sorted by (size, mask).
std::vector<Configuration> enumerate_configurations(const PrimeEventStructure& pes);

/// "{e1,e2}" using event names; "{}" for the empty set.
std::string set_to_string(const PrimeEventStructure& pes, EventSet x);

}  // namespace wtc
