#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wtc/pes.hpp"

namespace wtc {

/// Bounds for exhaustive small-structure enumeration. The caps keep the
/// non-isomorphic family at desk scale.
struct SweepSpec {
  std::size_t max_events = 3;  // <= 5
  std::size_t max_tau = 1;     // <= 2
  std::vector<std::string> alphabet = {"a", "b"};
  bool conflict_free_only = false;  // structural filter
  bool tau_guarded_only = false;    // structural filter: no tau event is maximal
  std::size_t max_visible = 0;      // structural filter: cap on visible events (0 = unlimited)
};

/// All non-isomorphic PESs within the bounds, deterministically ordered.
/// Deduplicated by canonical form. Throws BoundsExceeded when the caps are
/// violated.
std::vector<PrimeEventStructure> sweep_small_pes(const SweepSpec& spec);

/// Canonical key: the lexicographically least (labels, order, conflict)
/// encoding over label-compatible event permutations, with an iterative
/// refinement coloring pruning the search.
std::string canonical_key(const PrimeEventStructure& pes);

bool isomorphic_pes(const PrimeEventStructure& a, const PrimeEventStructure& b);

}  // namespace wtc
