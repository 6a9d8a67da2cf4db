#include <algorithm>
#include <map>

#include "wtc/equivalence.hpp"
#include "wtc/transitions.hpp"

namespace wtc {

namespace {

// A triple is principal when both visible parts are the visible cause sets of
// their top events; such a triple names one quotient event (e1, f, e2).
struct PrincipalShape {
  EventId left_top;
  EventId right_top;
  Bijection iso;
};

std::optional<PrincipalShape> principal_shape(const PrimeEventStructure& l,
                                              const PrimeEventStructure& r,
                                              const PosetalTriple& t) {
  EventSet v1 = t.iso.domain();
  EventSet v2 = t.iso.range();
  if (v1.empty()) return std::nullopt;
  std::optional<EventId> top1, top2;
  for (EventId e : v1) {
    bool is_top = true;
    for (EventId x : v1)
      if (!l.leq(x, e)) { is_top = false; break; }
    if (is_top) { top1 = e; break; }
  }
  if (!top1) return std::nullopt;
  if (v1 != l.visible_part(l.causes(*top1))) return std::nullopt;
  for (EventId g : v2) {
    bool is_top = true;
    for (EventId x : v2)
      if (!r.leq(x, g)) { is_top = false; break; }
    if (is_top) { top2 = g; break; }
  }
  if (!top2) return std::nullopt;
  if (v2 != r.visible_part(r.causes(*top2))) return std::nullopt;
  if (t.iso.image(*top1) != *top2) return std::nullopt;
  return PrincipalShape{*top1, *top2, t.iso};
}

}  // namespace

QuotientPes build_quotient_pes(const PrimeEventStructure& left, const PrimeEventStructure& right,
                               const PosetalWitness& witness) {
  if (!witness.contains(PosetalTriple{Configuration{}, Bijection{}, Configuration{}}))
    raise(Errc::not_a_bisimulation, "the relation does not contain the empty triple");
  // the construction needs the literal downward-closed relation class: every
  // pointwise prefix of a related triple related
  if (!verify_posetal_witness(Kind::hhp, Strength::weak, left, right, witness, HhpClosure::strict))
    raise(Errc::not_a_bisimulation, "the relation fails the weak hhp transfer/closure re-check");

  // Quotient events: one per distinct principal isomorphism.
  std::map<std::vector<std::pair<EventId, EventId>>, PrincipalShape> shapes;
  for (const PosetalTriple& t : witness.triples) {
    if (auto s = principal_shape(left, right, t)) shapes.emplace(t.iso.pairs(), *s);
  }

  std::vector<PrincipalShape> events;
  events.reserve(shapes.size());
  for (auto& [key, s] : shapes) events.push_back(s);
  std::sort(events.begin(), events.end(), [](const PrincipalShape& a, const PrincipalShape& b) {
    if (a.left_top != b.left_top) return a.left_top < b.left_top;
    if (a.right_top != b.right_top) return a.right_top < b.right_top;
    return a.iso < b.iso;
  });

  RawPes raw;
  raw.name = left.name().empty() || right.name().empty() ? "quotient"
                                                         : left.name() + "~" + right.name();
  std::map<std::string, int> name_uses;
  for (const PrincipalShape& s : events) {
    raw.labels.push_back(left.label(s.left_top));
    std::string nm = left.event_name(s.left_top) + "~" + right.event_name(s.right_top);
    int& uses = name_uses[nm];
    if (uses++ > 0) nm += "." + std::to_string(uses);
    raw.event_names.push_back(nm);
  }
  auto extends_both = [&](const Bijection& a, const Bijection& b) {
    for (const PosetalTriple& t : witness.triples)
      if (t.iso.extends(a) && t.iso.extends(b)) return true;
    return false;
  };
  for (EventId i = 0; i < events.size(); ++i) {
    for (EventId j = 0; j < events.size(); ++j) {
      if (i != j && events[j].iso.extends(events[i].iso)) raw.causes.emplace_back(i, j);
    }
    for (EventId j = i + 1; j < events.size(); ++j) {
      if (!extends_both(events[i].iso, events[j].iso)) raw.conflicts.emplace_back(i, j);
    }
  }

  QuotientPes out;
  try {
    out.pes = validate_pes(raw);
  } catch (const Error& e) {
    raise(Errc::not_a_bisimulation, std::string("quotient construction is not a PES: ") + e.what());
  }
  for (const PrincipalShape& s : events) {
    out.project_left.push_back(s.left_top);
    out.project_right.push_back(s.right_top);
    out.event_triples.push_back(
        PosetalTriple{left.causes(s.left_top), s.iso, right.causes(s.right_top)});
  }
  return out;
}

PosetalWitness quotient_projection_relation(const QuotientPes& q,
                                            const PrimeEventStructure& side_pes, bool left_side) {
  const std::vector<EventId>& proj = left_side ? q.project_left : q.project_right;
  PosetalWitness out;
  for (Configuration c : enumerate_configurations(q.pes)) {
    Bijection f;
    EventSet image;
    bool injective = true;
    for (EventId e : c) {
      EventId target = proj[e];
      if (image.contains(target)) { injective = false; break; }
      image.insert(target);
      f.insert(e, target);
    }
    if (!injective) continue;
    for (Configuration d : enumerate_configurations(side_pes)) {
      if (side_pes.visible_part(d) != image) continue;
      out.triples.push_back(PosetalTriple{c, f, d});
    }
  }
  std::sort(out.triples.begin(), out.triples.end());
  return out;
}

}  // namespace wtc
