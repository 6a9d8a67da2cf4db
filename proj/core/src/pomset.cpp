#include "wtc/pomset.hpp"

#include <algorithm>
#include <bit>

namespace wtc {

std::size_t Pomset::order_pair_count() const {
  std::size_t n = 0;
  for (auto row : strict) n += static_cast<std::size_t>(std::popcount(row));
  return n;
}

bool operator<(const Pomset& a, const Pomset& b) {
  if (a.carrier != b.carrier) return a.carrier < b.carrier;
  if (a.labels != b.labels) return a.labels < b.labels;
  return a.strict < b.strict;
}

Pomset labelled_poset(const PrimeEventStructure& pes, EventSet x) {
  if (!pes.is_consistent(x)) raise(Errc::inconsistent_set, "pomset carrier has conflicting events");
  Pomset p;
  for (EventId e : x) {
    p.carrier.push_back(e);
    p.labels.push_back(pes.label(e));
  }
  p.strict.assign(p.carrier.size(), 0);
  for (std::size_t i = 0; i < p.carrier.size(); ++i)
    for (std::size_t j = 0; j < p.carrier.size(); ++j)
      if (i != j && pes.leq(p.carrier[i], p.carrier[j]))
        p.strict[i] |= std::uint64_t{1} << j;
  return p;
}

Pomset induced_pomset(const PrimeEventStructure& pes, EventSet x) {
  if (x != pes.visible_part(x)) raise(Errc::tau_in_carrier, "pomset carrier contains a tau event");
  return labelled_poset(pes, x);
}

std::optional<EventId> Bijection::image(EventId e) const {
  for (const auto& [a, b] : pairs_)
    if (a == e) return b;
  return std::nullopt;
}

std::optional<EventId> Bijection::preimage(EventId g) const {
  for (const auto& [a, b] : pairs_)
    if (b == g) return a;
  return std::nullopt;
}

EventSet Bijection::domain() const {
  EventSet s;
  for (const auto& [a, b] : pairs_) s.insert(a);
  return s;
}

EventSet Bijection::range() const {
  EventSet s;
  for (const auto& [a, b] : pairs_) s.insert(b);
  return s;
}

void Bijection::insert(EventId e, EventId g) {
  if (image(e)) raise(Errc::domain_clash, "event already in the domain");
  if (preimage(g)) raise(Errc::range_clash, "event already in the range");
  pairs_.emplace_back(e, g);
  std::sort(pairs_.begin(), pairs_.end());
}

bool Bijection::extends(const Bijection& f) const {
  for (const auto& p : f.pairs_)
    if (!std::binary_search(pairs_.begin(), pairs_.end(), p)) return false;
  return true;
}

Bijection Bijection::restricted_to(EventSet dom) const {
  Bijection out;
  for (const auto& [a, b] : pairs_)
    if (dom.contains(a)) out.pairs_.emplace_back(a, b);
  return out;
}

Bijection extend_iso(const PrimeEventStructure& left, const PrimeEventStructure& right,
                     const Bijection& f, EventId e1, EventId e2) {
  if (left.label(e1).is_tau() || right.label(e2).is_tau())
    raise(Errc::tau_argument, "isomorphisms are over visible events");
  Bijection out = f;
  out.insert(e1, e2);
  return out;
}

namespace {

// Backtracking search over images of p's carrier positions in ascending
// order; label and order constraints checked incrementally. With first_only
// the first (lexicographically least) witness is returned.
void iso_search(const Pomset& p, const Pomset& q, bool first_only, std::vector<Bijection>& out) {
  const std::size_t n = p.size();
  if (n != q.size()) return;
  {
    std::vector<Label> pl = p.labels, ql = q.labels;
    std::sort(pl.begin(), pl.end());
    std::sort(ql.begin(), ql.end());
    if (pl != ql) return;
  }
  if (p.order_pair_count() != q.order_pair_count()) return;

  std::vector<std::size_t> img(n);
  std::uint64_t used = 0;

  auto emit = [&] {
    Bijection b;
    for (std::size_t i = 0; i < n; ++i) b.insert(p.carrier[i], q.carrier[img[i]]);
    out.push_back(std::move(b));
  };

  // explicit stack recursion
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) {
      emit();
      return first_only;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if ((used >> j) & 1u) continue;
      if (!(p.labels[i] == q.labels[j])) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i; ++k) {
        if (p.less(i, k) != q.less(j, img[k]) || p.less(k, i) != q.less(img[k], j)) { ok = false; break; }
      }
      if (!ok) continue;
      img[i] = j;
      used |= std::uint64_t{1} << j;
      if (self(self, i + 1)) return true;
      used &= ~(std::uint64_t{1} << j);
    }
    return false;
  };
  rec(rec, 0);
}

}  // namespace

std::optional<Bijection> pomset_isomorphic(const Pomset& p, const Pomset& q) {
  std::vector<Bijection> found;
  iso_search(p, q, true, found);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<Bijection> all_pomset_isomorphisms(const Pomset& p, const Pomset& q) {
  std::vector<Bijection> found;
  iso_search(p, q, false, found);
  return found;
}

bool is_posetal_triple(const PrimeEventStructure& left, const PrimeEventStructure& right,
                       Configuration c1, const Bijection& f, Configuration c2) {
  EventSet v1 = left.visible_part(c1);
  EventSet v2 = right.visible_part(c2);
  if (f.domain() != v1 || f.range() != v2) return false;
  for (const auto& [a, b] : f.pairs()) {
    if (!(left.label(a) == right.label(b))) return false;
    for (const auto& [a2, b2] : f.pairs()) {
      if (left.leq(a, a2) != right.leq(b, b2)) return false;
    }
  }
  return true;
}

std::vector<PosetalTriple> pointwise_prefixes(const PrimeEventStructure& left,
                                              const PrimeEventStructure& right,
                                              const PosetalTriple& t) {
  std::vector<PosetalTriple> out;
  // Enumerate sub-configurations of the left component; the iso restriction
  // fixes the visible image, and every right sub-configuration with exactly
  // that visible part completes a prefix.
  std::vector<Configuration> left_subs, right_subs;
  auto collect_subs = [](const PrimeEventStructure& pes, Configuration c, std::vector<Configuration>& subs) {
    std::vector<EventId> members;
    for (EventId e : c) members.push_back(e);
    const std::size_t n = members.size();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      Configuration sub;
      for (std::size_t i = 0; i < n; ++i)
        if ((m >> i) & 1u) sub.insert(members[i]);
      if (pes.is_downward_closed(sub)) subs.push_back(sub);
    }
  };
  collect_subs(left, t.left, left_subs);
  collect_subs(right, t.right, right_subs);

  for (Configuration c1 : left_subs) {
    Bijection f = t.iso.restricted_to(left.visible_part(c1));
    EventSet image = f.range();
    for (Configuration c2 : right_subs) {
      if (right.visible_part(c2) != image) continue;
      if (!is_posetal_triple(left, right, c1, f, c2)) continue;
      out.push_back(PosetalTriple{c1, f, c2});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace wtc
