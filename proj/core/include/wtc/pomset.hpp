#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wtc/pes.hpp"

namespace wtc {

/// A labelled partial order induced by an event set: carrier ids (ascending),
/// their labels, and the strict order among carrier positions. Pomsets built
/// by induced_pomset carry visible labels only.
struct Pomset {
  std::vector<EventId> carrier;
  std::vector<Label> labels;
  std::vector<std::uint64_t> strict;  // strict[i] bit j <=> carrier[i] < carrier[j]

  std::size_t size() const { return carrier.size(); }
  bool less(std::size_t i, std::size_t j) const { return (strict[i] >> j) & 1u; }
  std::size_t order_pair_count() const;

  friend bool operator==(const Pomset& a, const Pomset& b) {
    return a.carrier == b.carrier && a.labels == b.labels && a.strict == b.strict;
  }
  friend bool operator<(const Pomset& a, const Pomset& b);
};

/// Labelled restriction of the causal order to an arbitrary consistent set
/// (tau labels permitted; used by the strong checkers).
Pomset labelled_poset(const PrimeEventStructure& pes, EventSet x);

/// Pomset induced by a visible consistent set. Throws TauInCarrier if x has a
/// tau event and InconsistentSet if two members conflict.
Pomset induced_pomset(const PrimeEventStructure& pes, EventSet x);

/// A finite bijection between event sets of two structures, kept sorted by
/// domain id.
class Bijection {
public:
  Bijection() = default;

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<std::pair<EventId, EventId>>& pairs() const { return pairs_; }

  std::optional<EventId> image(EventId e) const;
  std::optional<EventId> preimage(EventId g) const;
  EventSet domain() const;
  EventSet range() const;

  /// Adds a pair; throws DomainClash/RangeClash if either side is taken.
  void insert(EventId e, EventId g);

  /// True if every pair of f is a pair of this bijection.
  bool extends(const Bijection& f) const;
  /// Restriction to the given domain subset.
  Bijection restricted_to(EventSet dom) const;

  friend bool operator==(const Bijection& a, const Bijection& b) { return a.pairs_ == b.pairs_; }
  friend bool operator<(const Bijection& a, const Bijection& b) { return a.pairs_ < b.pairs_; }

private:
  std::vector<std::pair<EventId, EventId>> pairs_;
};

/// f[e1 |-> e2]: the bijection mapping e1 to e2 and agreeing with f elsewhere.
/// Both events must be visible in their structures; throws DomainClash,
/// RangeClash or TauArgument.
Bijection extend_iso(const PrimeEventStructure& left, const PrimeEventStructure& right,
                     const Bijection& f, EventId e1, EventId e2);

/// Label- and order-preserving bijection between two pomsets, if one exists.
/// Deterministic: returns the lexicographically least witness under carrier
/// ordering.
std::optional<Bijection> pomset_isomorphic(const Pomset& p, const Pomset& q);

/// Every isomorphism between the two pomsets, in lexicographic order.
std::vector<Bijection> all_pomset_isomorphisms(const Pomset& p, const Pomset& q);

/// A triple (C1, f, C2) with f an isomorphism between the visible parts.
struct PosetalTriple {
  Configuration left;
  Bijection iso;
  Configuration right;

  friend bool operator==(const PosetalTriple& a, const PosetalTriple& b) {
    return a.left == b.left && a.right == b.right && a.iso == b.iso;
  }
  friend bool operator<(const PosetalTriple& a, const PosetalTriple& b) {
    if (a.left != b.left) return a.left < b.left;
    if (a.right != b.right) return a.right < b.right;
    return a.iso < b.iso;
  }
};

/// True iff f is a pomset isomorphism between the visible parts of C1 and C2.
bool is_posetal_triple(const PrimeEventStructure& left, const PrimeEventStructure& right,
                       Configuration c1, const Bijection& f, Configuration c2);

/// All pointwise-<= predecessors of t: triples (C1', f', C2') with C1' and C2'
/// sub-configurations and f' = f restricted to the visible part of C1' with
/// range exactly the visible part of C2'. Includes t itself.
std::vector<PosetalTriple> pointwise_prefixes(const PrimeEventStructure& left,
                                              const PrimeEventStructure& right,
                                              const PosetalTriple& t);

}  // namespace wtc
