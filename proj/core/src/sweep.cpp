#include "wtc/sweep.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace wtc {

namespace {

std::size_t triangle(std::size_t n) { return n * (n - 1) / 2; }

// Raw candidate count before validation/dedup; guards the exhaustive loop.
double estimate_raw(const SweepSpec& spec) {
  double total = 0;
  for (std::size_t n = 0; n <= spec.max_events; ++n) {
    double labelings = 1;
    for (std::size_t i = 0; i < n; ++i) labelings *= static_cast<double>(spec.alphabet.size() + 1);
    double rels = 1;
    for (std::size_t i = 0; i < triangle(n); ++i) rels *= 2;
    total += labelings * rels * rels;
  }
  return total;
}

std::vector<std::pair<EventId, EventId>> mask_to_pairs(std::uint32_t mask,
                                                       const std::vector<std::pair<EventId, EventId>>& all) {
  std::vector<std::pair<EventId, EventId>> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if ((mask >> i) & 1u) out.push_back(all[i]);
  return out;
}

}  // namespace

std::string canonical_key(const PrimeEventStructure& pes) {
  const std::size_t n = pes.event_count();
  // refinement coloring: label plus degree information, refined by the
  // multiset of neighbor colors until stable
  std::vector<std::string> color(n);
  for (EventId e = 0; e < n; ++e)
    color[e] = pes.label(e).name() + "/" + std::to_string(pes.causes(e).size()) + "/" +
               std::to_string(pes.conflicts_with(e).size());
  for (std::size_t round = 0; round < n; ++round) {
    std::vector<std::string> next(n);
    for (EventId e = 0; e < n; ++e) {
      std::vector<std::string> below, above, confl;
      for (EventId f = 0; f < n; ++f) {
        if (f == e) continue;
        if (pes.leq(f, e)) below.push_back(color[f]);
        if (pes.leq(e, f)) above.push_back(color[f]);
        if (pes.in_conflict(e, f)) confl.push_back(color[f]);
      }
      std::sort(below.begin(), below.end());
      std::sort(above.begin(), above.end());
      std::sort(confl.begin(), confl.end());
      next[e] = color[e] + "<";
      for (const auto& s : below) next[e] += s + ";";
      next[e] += ">";
      for (const auto& s : above) next[e] += s + ";";
      next[e] += "#";
      for (const auto& s : confl) next[e] += s + ";";
    }
    if (next == color) break;
    color = std::move(next);
  }

  // lexicographically least encoding over color-respecting permutations
  std::vector<EventId> perm(n), best;
  for (EventId e = 0; e < n; ++e) perm[e] = e;
  std::string best_key;
  auto encode = [&](const std::vector<EventId>& p) {
    std::string key;
    for (EventId i = 0; i < n; ++i) key += pes.label(p[i]).name() + ",";
    key += "|";
    for (EventId i = 0; i < n; ++i)
      for (EventId j = 0; j < n; ++j) key += pes.leq(p[i], p[j]) ? '1' : '0';
    key += "|";
    for (EventId i = 0; i < n; ++i)
      for (EventId j = 0; j < n; ++j) key += pes.in_conflict(p[i], p[j]) ? '1' : '0';
    return key;
  };
  std::sort(perm.begin(), perm.end(),
            [&](EventId a, EventId b) { return color[a] < color[b] || (color[a] == color[b] && a < b); });
  do {
    bool compatible = true;
    for (EventId i = 0; i + 1 < n; ++i)
      if (color[perm[i]] > color[perm[i + 1]]) { compatible = false; break; }
    if (!compatible) continue;
    std::string key = encode(perm);
    if (best_key.empty() || key < best_key) best_key = std::move(key);
  } while (std::next_permutation(perm.begin(), perm.end(),
                                 [&](EventId a, EventId b) {
                                   return color[a] < color[b] || (color[a] == color[b] && a < b);
                                 }));
  return std::to_string(n) + ":" + best_key;
}

bool isomorphic_pes(const PrimeEventStructure& a, const PrimeEventStructure& b) {
  if (a.event_count() != b.event_count()) return false;
  return canonical_key(a) == canonical_key(b);
}

std::vector<PrimeEventStructure> sweep_small_pes(const SweepSpec& spec) {
  if (spec.max_events > 5) raise(Errc::bounds_exceeded, "sweep supports at most 5 events");
  if (spec.max_tau > 2) raise(Errc::bounds_exceeded, "sweep supports at most 2 tau events");
  if (estimate_raw(spec) > 6e6)
    raise(Errc::bounds_exceeded, "sweep bounds would enumerate too many raw candidates");

  std::vector<PrimeEventStructure> out;
  std::set<std::string> seen;

  for (std::size_t n = 0; n <= spec.max_events; ++n) {
    // all labelings with at most max_tau tau events; index 0 encodes tau
    std::vector<std::vector<Label>> labelings;
    std::vector<Label> cur(n);
    auto gen_labels = [&](auto&& self, std::size_t i, std::size_t taus) -> void {
      if (i == n) {
        labelings.push_back(cur);
        return;
      }
      if (taus < spec.max_tau) {
        cur[i] = Label::tau();
        self(self, i + 1, taus + 1);
      }
      for (const std::string& a : spec.alphabet) {
        cur[i] = Label::visible(a);
        self(self, i + 1, taus);
      }
    };
    gen_labels(gen_labels, 0, 0);

    std::vector<std::pair<EventId, EventId>> tri;
    for (EventId i = 0; i < n; ++i)
      for (EventId j = i + 1; j < n; ++j) tri.emplace_back(i, j);

    for (const auto& labels : labelings) {
      for (std::uint32_t cmask = 0; cmask < (1u << tri.size()); ++cmask) {
        for (std::uint32_t kmask = 0; kmask < (1u << tri.size()); ++kmask) {
          if (cmask & kmask) continue;  // same pair both ordered and conflicting
          RawPes raw;
          raw.name = "sweep";
          raw.labels = labels;
          raw.causes = mask_to_pairs(cmask, tri);
          raw.conflicts = mask_to_pairs(kmask, tri);
          std::optional<PrimeEventStructure> maybe;
          try {
            maybe = validate_pes(raw);
          } catch (const Error&) {
            continue;  // overlap after saturation
          }
          PrimeEventStructure& pes = *maybe;
          if (spec.conflict_free_only && !pes.conflict_pairs().empty()) continue;
          if (spec.max_visible > 0 && pes.visible_events().size() > spec.max_visible) continue;
          if (spec.tau_guarded_only) {
            bool bad = false;
            for (EventId e : pes.events() - pes.visible_events()) {
              bool has_visible_successor = false;
              for (EventId f : pes.visible_events())
                if (pes.strictly_below(e, f)) has_visible_successor = true;
              if (!has_visible_successor) bad = true;
            }
            if (bad) continue;
          }
          std::string key = canonical_key(pes);
          if (seen.insert(std::move(key)).second) out.push_back(std::move(pes));
        }
      }
    }
  }
  return out;
}

}  // namespace wtc
