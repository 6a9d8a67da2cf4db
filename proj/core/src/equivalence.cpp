#include "wtc/equivalence.hpp"

#include <algorithm>
#include <map>

#include "wtc/logic.hpp"
#include "wtc/transitions.hpp"

namespace wtc {

const char* kind_name(Kind k) noexcept {
  switch (k) {
    case Kind::interleaving: return "hm";
    case Kind::step: return "step";
    case Kind::pomset: return "pomset";
    case Kind::hp: return "hp";
    case Kind::hhp: return "hhp";
  }
  return "hm";
}

const char* strength_name(Strength s) noexcept { return s == Strength::strong ? "strong" : "weak"; }

std::string relation_name(EquivalenceKind rel) {
  return std::string(strength_name(rel.strength)) + "-" + kind_name(rel.kind);
}

std::optional<EquivalenceKind> parse_relation_name(const std::string& text) {
  auto dash = text.find('-');
  if (dash == std::string::npos) return std::nullopt;
  std::string s = text.substr(0, dash);
  std::string k = text.substr(dash + 1);
  EquivalenceKind rel{Kind::interleaving, Strength::weak};
  if (s == "weak")
    rel.strength = Strength::weak;
  else if (s == "strong")
    rel.strength = Strength::strong;
  else
    return std::nullopt;
  if (k == "hm" || k == "interleaving")
    rel.kind = Kind::interleaving;
  else if (k == "step")
    rel.kind = Kind::step;
  else if (k == "pomset")
    rel.kind = Kind::pomset;
  else if (k == "hp")
    rel.kind = Kind::hp;
  else if (k == "hhp")
    rel.kind = Kind::hhp;
  else
    return std::nullopt;
  return rel;
}

bool FlatWitness::contains(Configuration a, Configuration b) const {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

bool PosetalWitness::contains(const PosetalTriple& t) const {
  return std::binary_search(triples.begin(), triples.end(), t);
}

namespace {

// ---------------------------------------------------------------------------
// Per-structure transition data shared by the refinement engines.

struct Move {
  Pomset pomset;
  std::size_t target;  // config index
};

struct SingleMove {
  EventId event;
  std::size_t target;
};

struct Side {
  const PrimeEventStructure* pes = nullptr;
  std::vector<Configuration> configs;
  std::vector<std::vector<Move>> moves;          // flat kinds
  std::vector<std::vector<SingleMove>> singles;  // hp/hhp

  std::size_t index(Configuration c) const {
    auto it = std::lower_bound(configs.begin(), configs.end(), c);
    return static_cast<std::size_t>(it - configs.begin());
  }
};

bool pairwise_concurrent(const PrimeEventStructure& pes, const Pomset& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (!pes.concurrent(p.carrier[i], p.carrier[j])) return false;
  return true;
}

Side make_side(const PrimeEventStructure& pes, Strength strength, Kind kind) {
  Side side;
  side.pes = &pes;
  side.configs = enumerate_configurations(pes);
  const std::size_t n = side.configs.size();
  const bool flat = kind == Kind::interleaving || kind == Kind::step || kind == Kind::pomset;
  side.moves.resize(flat ? n : 0);
  side.singles.resize(flat ? 0 : n);

  for (std::size_t i = 0; i < n; ++i) {
    Configuration c = side.configs[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Configuration cx = side.configs[j];
      if (!c.subset_of(cx)) continue;
      EventSet diff = cx - c;
      if (strength == Strength::weak) {
        EventSet x = pes.visible_part(diff);
        if (x.empty()) continue;
        if (flat) {
          Pomset p = induced_pomset(pes, x);
          bool keep = kind == Kind::pomset || (kind == Kind::interleaving && p.size() == 1) ||
                      (kind == Kind::step && pairwise_concurrent(pes, p));
          if (keep) side.moves[i].push_back({std::move(p), j});
        } else if (x.size() == 1) {
          side.singles[i].push_back({x.front(), j});
        }
      } else {
        if (flat) {
          Pomset p = labelled_poset(pes, diff);
          bool keep = kind == Kind::pomset || (kind == Kind::interleaving && p.size() == 1) ||
                      (kind == Kind::step && pairwise_concurrent(pes, p));
          if (keep) side.moves[i].push_back({std::move(p), j});
        } else if (diff.size() == 1) {
          side.singles[i].push_back({diff.front(), j});
        }
      }
    }
  }
  return side;
}

// ---------------------------------------------------------------------------
// Flat refinement (interleaving / step / pomset).

struct FlatReason {
  int side = 0;          // 0: left move unmatched, 1: right move unmatched
  std::size_t move = 0;  // index into the mover's move list
};

struct FlatRefinement {
  Side left, right;
  // round[i][j]: 0 alive, k > 0 deleted in round k
  std::vector<std::vector<int>> round;
  std::vector<std::vector<FlatReason>> reason;

  bool alive(std::size_t i, std::size_t j) const { return round[i][j] == 0; }
};

bool flat_responses_contain_alive(const FlatRefinement& ref, const Move& m, int mover_side,
                                  std::size_t from_other, std::size_t mover_target) {
  const Side& other = mover_side == 0 ? ref.right : ref.left;
  for (const Move& r : other.moves[from_other]) {
    if (r.pomset.size() != m.pomset.size()) continue;
    if (!pomset_isomorphic(m.pomset, r.pomset)) continue;
    bool ok = mover_side == 0 ? ref.alive(mover_target, r.target) : ref.alive(r.target, mover_target);
    if (ok) return true;
  }
  return false;
}

FlatRefinement run_flat_refinement(Kind kind, Strength strength, const PrimeEventStructure& l,
                                   const PrimeEventStructure& r) {
  FlatRefinement ref;
  ref.left = make_side(l, strength, kind);
  ref.right = make_side(r, strength, kind);
  const std::size_t nl = ref.left.configs.size();
  const std::size_t nr = ref.right.configs.size();
  ref.round.assign(nl, std::vector<int>(nr, 0));
  ref.reason.assign(nl, std::vector<FlatReason>(nr));

  for (int k = 1;; ++k) {
    std::vector<std::pair<std::size_t, std::size_t>> deaths;
    for (std::size_t i = 0; i < nl; ++i) {
      for (std::size_t j = 0; j < nr; ++j) {
        if (!ref.alive(i, j)) continue;
        bool dead = false;
        for (std::size_t mi = 0; mi < ref.left.moves[i].size() && !dead; ++mi) {
          if (!flat_responses_contain_alive(ref, ref.left.moves[i][mi], 0, j,
                                            ref.left.moves[i][mi].target)) {
            ref.reason[i][j] = {0, mi};
            dead = true;
          }
        }
        for (std::size_t mj = 0; mj < ref.right.moves[j].size() && !dead; ++mj) {
          if (!flat_responses_contain_alive(ref, ref.right.moves[j][mj], 1, i,
                                            ref.right.moves[j][mj].target)) {
            ref.reason[i][j] = {1, mj};
            dead = true;
          }
        }
        if (dead) deaths.emplace_back(i, j);
      }
    }
    if (deaths.empty()) return ref;
    for (auto [i, j] : deaths) ref.round[i][j] = k;
  }
}

// ---------------------------------------------------------------------------
// Posetal refinement (hp / hhp).

struct PosetalReason {
  enum class What { transfer, prefix } what = What::transfer;
  int side = 0;            // transfer: which side moved
  SingleMove move{};       // transfer: the unmatched move
  std::size_t prefix = 0;  // prefix: a representative dead prefix triple
};

struct PosetalRefinement {
  Side left, right;  // with .singles populated
  Strength strength = Strength::weak;
  std::vector<PosetalTriple> triples;  // sorted
  std::vector<std::size_t> tleft, tright;  // config indices per triple
  std::vector<std::vector<std::size_t>> prefix_groups_flat;  // concatenated groups per triple
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> prefix_group_spans;
  std::vector<int> round;
  std::vector<PosetalReason> reason;

  bool alive(std::size_t t) const { return round[t] == 0; }

  std::size_t index_of(const PosetalTriple& t) const {
    auto it = std::lower_bound(triples.begin(), triples.end(), t);
    if (it == triples.end() || !(*it == t)) raise(Errc::not_a_bisimulation, "triple outside the posetal product");
    return static_cast<std::size_t>(it - triples.begin());
  }
};

EventSet project(const PrimeEventStructure& pes, Strength strength, Configuration c) {
  return strength == Strength::weak ? pes.visible_part(c) : c;
}

Pomset project_poset(const PrimeEventStructure& pes, Strength strength, Configuration c) {
  return strength == Strength::weak ? induced_pomset(pes, pes.visible_part(c))
                                    : labelled_poset(pes, c);
}

// Valid extension of the triple iso by the moved pair: labels equal and order
// agreement against every existing pair.
bool iso_extension_ok(const PrimeEventStructure& l, const PrimeEventStructure& r,
                      const Bijection& f, EventId e, EventId g) {
  if (!(l.label(e) == r.label(g))) return false;
  for (const auto& [a, b] : f.pairs()) {
    if (l.leq(a, e) != r.leq(b, g)) return false;
    if (l.leq(e, a) != r.leq(g, b)) return false;
  }
  return true;
}

std::vector<Configuration> sub_configurations(const PrimeEventStructure& pes, Configuration c) {
  std::vector<EventId> members;
  for (EventId e : c) members.push_back(e);
  std::vector<Configuration> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << members.size()); ++m) {
    Configuration sub;
    for (std::size_t i = 0; i < members.size(); ++i)
      if ((m >> i) & 1u) sub.insert(members[i]);
    if (pes.is_downward_closed(sub)) out.push_back(sub);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PosetalRefinement run_posetal_refinement(Strength strength, const PrimeEventStructure& l,
                                         const PrimeEventStructure& r, bool hereditary,
                                         HhpClosure closure) {
  PosetalRefinement ref;
  ref.strength = strength;
  ref.left = make_side(l, strength, Kind::hp);
  ref.right = make_side(r, strength, Kind::hp);

  // Posetal product: every config pair with every projection isomorphism.
  for (std::size_t i = 0; i < ref.left.configs.size(); ++i) {
    Pomset pl = project_poset(l, strength, ref.left.configs[i]);
    for (std::size_t j = 0; j < ref.right.configs.size(); ++j) {
      Pomset pr = project_poset(r, strength, ref.right.configs[j]);
      for (Bijection& f : all_pomset_isomorphisms(pl, pr))
        ref.triples.push_back(PosetalTriple{ref.left.configs[i], std::move(f), ref.right.configs[j]});
    }
  }
  std::sort(ref.triples.begin(), ref.triples.end());
  const std::size_t n = ref.triples.size();
  ref.tleft.resize(n);
  ref.tright.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    ref.tleft[t] = ref.left.index(ref.triples[t].left);
    ref.tright[t] = ref.right.index(ref.triples[t].right);
  }
  ref.round.assign(n, 0);
  ref.reason.assign(n, PosetalReason{});

  // Hereditary closure groups: per triple, each group lists the candidate
  // prefix triples that can witness one restriction shape; strict closure
  // puts every literal prefix in a group of its own.
  ref.prefix_groups_flat.resize(n);
  ref.prefix_group_spans.resize(n);
  if (hereditary) {
    for (std::size_t t = 0; t < n; ++t) {
      const PosetalTriple& tr = ref.triples[t];
      std::map<std::vector<std::pair<EventId, EventId>>, std::vector<std::size_t>> groups;
      for (Configuration c1 : sub_configurations(l, tr.left)) {
        Bijection f = tr.iso.restricted_to(project(l, strength, c1));
        EventSet image = f.range();
        for (Configuration c2 : sub_configurations(r, tr.right)) {
          if (project(r, strength, c2) != image) continue;
          // the triple itself witnesses its own shape; kept in its group
          groups[f.pairs()].push_back(ref.index_of(PosetalTriple{c1, f, c2}));
        }
      }
      auto& flat = ref.prefix_groups_flat[t];
      auto& spans = ref.prefix_group_spans[t];
      for (auto& [key, members] : groups) {
        if (closure == HhpClosure::strict) {
          for (std::size_t p : members) {
            spans.emplace_back(flat.size(), flat.size() + 1);
            flat.push_back(p);
          }
        } else {
          spans.emplace_back(flat.size(), flat.size() + members.size());
          for (std::size_t p : members) flat.push_back(p);
        }
      }
    }
  }

  const PrimeEventStructure& lp = l;
  const PrimeEventStructure& rp = r;
  for (int k = 1;; ++k) {
    std::vector<std::size_t> deaths;
    for (std::size_t t = 0; t < n; ++t) {
      if (!ref.alive(t)) continue;
      const PosetalTriple& tr = ref.triples[t];
      bool dead = false;
      // transfer, both directions
      for (int side = 0; side < 2 && !dead; ++side) {
        const Side& mover = side == 0 ? ref.left : ref.right;
        const Side& other = side == 0 ? ref.right : ref.left;
        const std::size_t from = side == 0 ? ref.tleft[t] : ref.tright[t];
        const std::size_t other_from = side == 0 ? ref.tright[t] : ref.tleft[t];
        for (const SingleMove& m : mover.singles[from]) {
          bool matched = false;
          for (const SingleMove& resp : other.singles[other_from]) {
            EventId e = side == 0 ? m.event : resp.event;
            EventId g = side == 0 ? resp.event : m.event;
            if (!iso_extension_ok(lp, rp, tr.iso, e, g)) continue;
            Bijection f2 = tr.iso;
            f2.insert(e, g);
            Configuration c1 = side == 0 ? mover.configs[m.target] : other.configs[resp.target];
            Configuration c2 = side == 0 ? other.configs[resp.target] : mover.configs[m.target];
            std::size_t t2 = ref.index_of(PosetalTriple{c1, f2, c2});
            if (ref.alive(t2)) { matched = true; break; }
          }
          if (!matched) {
            ref.reason[t] = {PosetalReason::What::transfer, side, m, 0};
            dead = true;
            break;
          }
        }
      }
      // hereditary closure
      if (!dead && hereditary) {
        for (const auto& [b, e] : ref.prefix_group_spans[t]) {
          bool any = false;
          std::size_t witness_dead = 0;
          for (std::size_t idx = b; idx < e; ++idx) {
            std::size_t p = ref.prefix_groups_flat[t][idx];
            if (ref.alive(p)) { any = true; break; }
            witness_dead = p;
          }
          if (!any) {
            ref.reason[t] = {PosetalReason::What::prefix, 0, SingleMove{}, witness_dead};
            dead = true;
            break;
          }
        }
      }
      if (dead) deaths.push_back(t);
    }
    if (deaths.empty()) return ref;
    for (std::size_t t : deaths) ref.round[t] = k;
  }
}

// ---------------------------------------------------------------------------
// Traces.

std::string pomset_text(const PrimeEventStructure& pes, const Pomset& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += pes.event_name(p.carrier[i]);
    out += ":" + p.labels[i].name();
  }
  return out + "}";
}

std::vector<std::string> flat_trace(const FlatRefinement& ref, const PrimeEventStructure& l,
                                    const PrimeEventStructure& r) {
  std::vector<std::string> out;
  std::size_t i = ref.left.index(Configuration{});
  std::size_t j = ref.right.index(Configuration{});
  while (ref.round[i][j] != 0) {
    const FlatReason& why = ref.reason[i][j];
    const Side& mover = why.side == 0 ? ref.left : ref.right;
    const PrimeEventStructure& mpes = why.side == 0 ? l : r;
    const Move& m = mover.moves[why.side == 0 ? i : j][why.move];
    out.push_back(std::string(why.side == 0 ? "left " : "right ") +
                  set_to_string(mpes, mover.configs[why.side == 0 ? i : j]) + " => " +
                  pomset_text(mpes, m.pomset) + " -> " + set_to_string(mpes, mover.configs[m.target]) +
                  " cannot be matched");
    // follow the first matching response, if any
    const Side& other = why.side == 0 ? ref.right : ref.left;
    std::size_t other_from = why.side == 0 ? j : i;
    bool followed = false;
    for (const Move& resp : other.moves[other_from]) {
      if (resp.pomset.size() != m.pomset.size()) continue;
      if (!pomset_isomorphic(m.pomset, resp.pomset)) continue;
      std::size_t ni = why.side == 0 ? m.target : resp.target;
      std::size_t nj = why.side == 0 ? resp.target : m.target;
      out.push_back("  best reply reaches (" + set_to_string(l, ref.left.configs[ni]) + ", " +
                    set_to_string(r, ref.right.configs[nj]) + ")");
      i = ni;
      j = nj;
      followed = true;
      break;
    }
    if (!followed) {
      out.push_back("  no reply with an isomorphic pomset exists");
      break;
    }
  }
  return out;
}

std::string iso_text(const PrimeEventStructure& l, const PrimeEventStructure& r, const Bijection& f) {
  std::string out = "[";
  bool first = true;
  for (const auto& [a, b] : f.pairs()) {
    if (!first) out += ",";
    out += l.event_name(a) + "->" + r.event_name(b);
    first = false;
  }
  return out + "]";
}

std::vector<std::string> posetal_trace(const PosetalRefinement& ref, const PrimeEventStructure& l,
                                       const PrimeEventStructure& r) {
  std::vector<std::string> out;
  std::size_t t = ref.index_of(PosetalTriple{Configuration{}, Bijection{}, Configuration{}});
  while (ref.round[t] != 0) {
    const PosetalReason& why = ref.reason[t];
    const PosetalTriple& tr = ref.triples[t];
    if (why.what == PosetalReason::What::prefix) {
      const PosetalTriple& p = ref.triples[why.prefix];
      out.push_back("triple (" + set_to_string(l, tr.left) + ", " + iso_text(l, r, tr.iso) + ", " +
                    set_to_string(r, tr.right) + ") loses its prefix (" + set_to_string(l, p.left) +
                    ", " + iso_text(l, r, p.iso) + ", " + set_to_string(r, p.right) + ")");
      t = why.prefix;
      continue;
    }
    const Side& mover = why.side == 0 ? ref.left : ref.right;
    const PrimeEventStructure& mpes = why.side == 0 ? l : r;
    std::size_t from = why.side == 0 ? ref.tleft[t] : ref.tright[t];
    out.push_back(std::string(why.side == 0 ? "left " : "right ") +
                  set_to_string(mpes, mover.configs[from]) + " =>" +
                  mpes.event_name(why.move.event) + " (" + mpes.label(why.move.event).name() +
                  ") -> " + set_to_string(mpes, mover.configs[why.move.target]) +
                  " cannot be matched extending " + iso_text(l, r, tr.iso));
    // follow the first valid response, if any
    const Side& other = why.side == 0 ? ref.right : ref.left;
    std::size_t other_from = why.side == 0 ? ref.tright[t] : ref.tleft[t];
    bool followed = false;
    for (const SingleMove& resp : other.singles[other_from]) {
      EventId e = why.side == 0 ? why.move.event : resp.event;
      EventId g = why.side == 0 ? resp.event : why.move.event;
      if (!iso_extension_ok(l, r, tr.iso, e, g)) continue;
      Bijection f2 = tr.iso;
      f2.insert(e, g);
      Configuration c1 = why.side == 0 ? mover.configs[why.move.target] : other.configs[resp.target];
      Configuration c2 = why.side == 0 ? other.configs[resp.target] : mover.configs[why.move.target];
      std::size_t t2 = ref.index_of(PosetalTriple{c1, f2, c2});
      out.push_back("  best reply reaches (" + set_to_string(l, c1) + ", " + iso_text(l, r, f2) +
                    ", " + set_to_string(r, c2) + ")");
      t = t2;
      followed = true;
      break;
    }
    if (!followed) {
      out.push_back("  no reply extends the isomorphism");
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distinguishing formulas.

// Flat kinds: at a pair deleted for an unmatched move, the move's diamond over
// the conjunction of the formulas distinguishing each reply; replies on the
// right flip the orientation with a negation.
struct FlatDistinguisher {
  const FlatRefinement& ref;
  Kind kind;

  Formula diamond(const PrimeEventStructure& pes, const Pomset& p, Formula body) const {
    if (kind == Kind::interleaving) {
      BindSpec s;
      s.label = p.labels[0];
      s.target = "z1";
      return Formula::bind_exec(std::move(s), std::move(body));
    }
    if (kind == Kind::step) {
      std::vector<BindSpec> factors;
      for (std::size_t i = 0; i < p.size(); ++i) {
        BindSpec s;
        s.label = p.labels[i];
        s.target = "z" + std::to_string(i + 1);
        factors.push_back(std::move(s));
      }
      return Formula::step_product(std::move(factors), true, std::move(body));
    }
    (void)pes;
    return pomset_formula(p, std::move(body));
  }

  // formula true at the `dir` side of the pair, false at the other
  Formula dist(std::size_t i, std::size_t j, int dir) const {
    const FlatReason& why = ref.reason[i][j];
    if (why.side != dir) return Formula::neg(dist(i, j, 1 - dir));
    const Side& mover = dir == 0 ? ref.left : ref.right;
    const Side& other = dir == 0 ? ref.right : ref.left;
    const PrimeEventStructure& mpes = *mover.pes;
    const Move& m = mover.moves[dir == 0 ? i : j][why.move];
    std::size_t other_from = dir == 0 ? j : i;

    std::optional<Formula> body;
    std::vector<std::size_t> reply_targets;
    for (const Move& resp : other.moves[other_from]) {
      if (resp.pomset.size() != m.pomset.size()) continue;
      if (!pomset_isomorphic(m.pomset, resp.pomset)) continue;
      if (std::find(reply_targets.begin(), reply_targets.end(), resp.target) != reply_targets.end())
        continue;
      reply_targets.push_back(resp.target);
      std::size_t ni = dir == 0 ? m.target : resp.target;
      std::size_t nj = dir == 0 ? resp.target : m.target;
      Formula psi = dist(ni, nj, dir);
      body = body ? Formula::conj(std::move(*body), std::move(psi)) : std::move(psi);
    }
    return diamond(mpes, m.pomset, body ? std::move(*body) : Formula::truth());
  }
};

// hp: binds carry the causal/concurrent split of the new event against the
// events bound so far; variables are shared between the two sides through the
// isomorphism.
struct PosetalDistinguisher {
  const PosetalRefinement& ref;
  const PrimeEventStructure& l;
  const PrimeEventStructure& r;

  Formula dist(std::size_t t, int dir, const std::vector<std::pair<EventId, EventId>>& bound) const {
    const PosetalReason& why = ref.reason[t];
    if (why.what == PosetalReason::What::prefix) {
      // the prefix formula distinguishes this triple verbatim: satisfaction
      // only depends on the variables of the prefix (hp runs never get here)
      raise(Errc::not_applicable, "prefix deletion has no hp-game formula");
    }
    if (why.side != dir) return Formula::neg(dist(t, 1 - dir, bound));

    const PosetalTriple& tr = ref.triples[t];
    const Side& mover = dir == 0 ? ref.left : ref.right;
    const Side& other = dir == 0 ? ref.right : ref.left;
    const PrimeEventStructure& mpes = dir == 0 ? l : r;
    EventId moved = why.move.event;

    BindSpec spec;
    spec.label = mpes.label(moved);
    spec.target = "z" + std::to_string(bound.size() + 1);
    for (std::size_t bi = 0; bi < bound.size(); ++bi) {
      EventId prior = dir == 0 ? bound[bi].first : bound[bi].second;
      if (mpes.strictly_below(prior, moved))
        spec.causes.push_back("z" + std::to_string(bi + 1));
      else
        spec.independent.push_back("z" + std::to_string(bi + 1));
    }

    std::size_t other_from = dir == 0 ? ref.tright[t] : ref.tleft[t];
    std::optional<Formula> body;
    for (const SingleMove& resp : other.singles[other_from]) {
      EventId e = dir == 0 ? moved : resp.event;
      EventId g = dir == 0 ? resp.event : moved;
      if (!iso_extension_ok(l, r, tr.iso, e, g)) continue;
      Bijection f2 = tr.iso;
      f2.insert(e, g);
      Configuration c1 = dir == 0 ? mover.configs[why.move.target] : other.configs[resp.target];
      Configuration c2 = dir == 0 ? other.configs[resp.target] : mover.configs[why.move.target];
      std::size_t t2 = ref.index_of(PosetalTriple{c1, f2, c2});
      std::vector<std::pair<EventId, EventId>> bound2 = bound;
      bound2.emplace_back(e, g);
      Formula psi = dist(t2, dir, bound2);
      body = body ? Formula::conj(std::move(*body), std::move(psi)) : std::move(psi);
    }
    return Formula::bind_exec(std::move(spec), body ? std::move(*body) : Formula::truth());
  }
};

Verdict make_flat_verdict(Kind kind, Strength strength, const PrimeEventStructure& l,
                          const PrimeEventStructure& r) {
  FlatRefinement ref = run_flat_refinement(kind, strength, l, r);
  Verdict v;
  v.relation = {kind, strength};
  std::size_t i0 = ref.left.index(Configuration{});
  std::size_t j0 = ref.right.index(Configuration{});
  v.equivalent = ref.alive(i0, j0);
  if (v.equivalent) {
    FlatWitness w;
    for (std::size_t i = 0; i < ref.left.configs.size(); ++i)
      for (std::size_t j = 0; j < ref.right.configs.size(); ++j)
        if (ref.alive(i, j)) w.pairs.emplace_back(ref.left.configs[i], ref.right.configs[j]);
    v.flat_witness = std::move(w);
  } else {
    v.trace = flat_trace(ref, l, r);
    if (strength == Strength::weak) {
      FlatDistinguisher d{ref, kind};
      v.certificate = d.dist(i0, j0, 0);
    }
  }
  return v;
}

Verdict make_posetal_verdict(Kind kind, Strength strength, const PrimeEventStructure& l,
                             const PrimeEventStructure& r, HhpClosure closure) {
  PosetalRefinement ref =
      run_posetal_refinement(strength, l, r, /*hereditary=*/kind == Kind::hhp, closure);
  Verdict v;
  v.relation = {kind, strength};
  std::size_t t0 = ref.index_of(PosetalTriple{Configuration{}, Bijection{}, Configuration{}});
  v.equivalent = ref.alive(t0);
  if (v.equivalent) {
    PosetalWitness w;
    for (std::size_t t = 0; t < ref.triples.size(); ++t)
      if (ref.alive(t)) w.triples.push_back(ref.triples[t]);
    v.posetal_witness = std::move(w);
  } else {
    v.trace = posetal_trace(ref, l, r);
    if (strength == Strength::weak) {
      if (kind == Kind::hp) {
        PosetalDistinguisher d{ref, l, r};
        v.certificate = d.dist(t0, 0, {});
      } else {
        // hhp: use the hp game when it also refutes, else bounded enumeration
        PosetalRefinement hp_ref = run_posetal_refinement(strength, l, r, false, closure);
        std::size_t h0 = hp_ref.index_of(PosetalTriple{Configuration{}, Bijection{}, Configuration{}});
        if (!hp_ref.alive(h0)) {
          PosetalDistinguisher d{hp_ref, l, r};
          v.certificate = d.dist(h0, 0, {});
        } else {
          SeparationResult sep = bounded_logical_equiv(l, r, FragmentTag::full, 3);
          if (sep.separated) {
            v.certificate = sep.holds_on_left ? *sep.separator : Formula::neg(*sep.separator);
          }
        }
      }
    }
  }
  return v;
}

}  // namespace

Verdict check_flat_bisim(Kind kind, Strength strength, const PrimeEventStructure& left,
                         const PrimeEventStructure& right) {
  if (kind != Kind::interleaving && kind != Kind::step && kind != Kind::pomset)
    raise(Errc::not_applicable, "flat checking covers interleaving, step and pomset kinds");
  return make_flat_verdict(kind, strength, left, right);
}

Verdict check_hp_bisim(Strength strength, const PrimeEventStructure& left,
                       const PrimeEventStructure& right) {
  return make_posetal_verdict(Kind::hp, strength, left, right, HhpClosure::visible);
}

Verdict check_hhp_bisim(Strength strength, const PrimeEventStructure& left,
                        const PrimeEventStructure& right, HhpClosure closure) {
  return make_posetal_verdict(Kind::hhp, strength, left, right, closure);
}

Verdict check_bisimulation(EquivalenceKind rel, const PrimeEventStructure& left,
                           const PrimeEventStructure& right) {
  switch (rel.kind) {
    case Kind::hp:
      return check_hp_bisim(rel.strength, left, right);
    case Kind::hhp:
      return check_hhp_bisim(rel.strength, left, right);
    default:
      return check_flat_bisim(rel.kind, rel.strength, left, right);
  }
}

std::optional<Formula> distinguishing_formula(EquivalenceKind rel, const PrimeEventStructure& left,
                                              const PrimeEventStructure& right,
                                              const Verdict& failed) {
  if (failed.equivalent) raise(Errc::not_applicable, "the verdict was equivalent");
  if (rel.strength == Strength::strong)
    raise(Errc::not_applicable,
          "strong inequivalence has no formula in this logic; the game trace certifies");
  Verdict v = check_bisimulation(rel, left, right);
  if (v.equivalent) raise(Errc::not_applicable, "the relation holds for these structures");
  return v.certificate;
}

// ---------------------------------------------------------------------------
// Witness re-checks.

bool verify_flat_witness(Kind kind, Strength strength, const PrimeEventStructure& left,
                         const PrimeEventStructure& right, const FlatWitness& witness) {
  if (!witness.contains(Configuration{}, Configuration{})) return false;
  Side L = make_side(left, strength, kind);
  Side R = make_side(right, strength, kind);
  for (const auto& [c1, c2] : witness.pairs) {
    if (!left.is_configuration(c1) || !right.is_configuration(c2)) return false;
    for (int side = 0; side < 2; ++side) {
      const Side& mover = side == 0 ? L : R;
      const Side& other = side == 0 ? R : L;
      Configuration from = side == 0 ? c1 : c2;
      Configuration other_from = side == 0 ? c2 : c1;
      for (const Move& m : mover.moves[mover.index(from)]) {
        bool matched = false;
        for (const Move& resp : other.moves[other.index(other_from)]) {
          if (resp.pomset.size() != m.pomset.size()) continue;
          if (!pomset_isomorphic(m.pomset, resp.pomset)) continue;
          Configuration t1 = side == 0 ? mover.configs[m.target] : other.configs[resp.target];
          Configuration t2 = side == 0 ? other.configs[resp.target] : mover.configs[m.target];
          if (witness.contains(t1, t2)) { matched = true; break; }
        }
        if (!matched) return false;
      }
    }
  }
  return true;
}

PosetalWitness prune_to_posetal_bisimulation(Kind kind, Strength strength,
                                             const PrimeEventStructure& left,
                                             const PrimeEventStructure& right,
                                             const PosetalWitness& candidates, HhpClosure closure) {
  Side L = make_side(left, strength, Kind::hp);
  Side R = make_side(right, strength, Kind::hp);
  std::vector<PosetalTriple> triples = candidates.triples;
  std::sort(triples.begin(), triples.end());
  std::vector<bool> alive(triples.size(), true);
  auto find_alive = [&](const PosetalTriple& t) {
    auto it = std::lower_bound(triples.begin(), triples.end(), t);
    if (it == triples.end() || !(*it == t)) return false;
    return static_cast<bool>(alive[static_cast<std::size_t>(it - triples.begin())]);
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ti = 0; ti < triples.size(); ++ti) {
      if (!alive[ti]) continue;
      const PosetalTriple& t = triples[ti];
      bool ok = true;
      for (int side = 0; side < 2 && ok; ++side) {
        const Side& mover = side == 0 ? L : R;
        const Side& other = side == 0 ? R : L;
        Configuration from = side == 0 ? t.left : t.right;
        Configuration other_from = side == 0 ? t.right : t.left;
        for (const SingleMove& m : mover.singles[mover.index(from)]) {
          bool matched = false;
          for (const SingleMove& resp : other.singles[other.index(other_from)]) {
            EventId e = side == 0 ? m.event : resp.event;
            EventId g = side == 0 ? resp.event : m.event;
            if (!iso_extension_ok(left, right, t.iso, e, g)) continue;
            Bijection f2 = t.iso;
            f2.insert(e, g);
            Configuration c1 = side == 0 ? mover.configs[m.target] : other.configs[resp.target];
            Configuration c2 = side == 0 ? other.configs[resp.target] : mover.configs[m.target];
            if (find_alive(PosetalTriple{c1, f2, c2})) { matched = true; break; }
          }
          if (!matched) { ok = false; break; }
        }
      }
      if (ok && kind == Kind::hhp) {
        std::map<std::vector<std::pair<EventId, EventId>>, bool> shape_ok;
        bool strict_ok = true;
        for (Configuration c1 : sub_configurations(left, t.left)) {
          Bijection f = t.iso.restricted_to(project(left, strength, c1));
          EventSet image = f.range();
          for (Configuration c2 : sub_configurations(right, t.right)) {
            if (project(right, strength, c2) != image) continue;
            bool member = find_alive(PosetalTriple{c1, f, c2});
            if (closure == HhpClosure::strict && !member) strict_ok = false;
            auto [it, inserted] = shape_ok.try_emplace(f.pairs(), member);
            if (!inserted) it->second = it->second || member;
          }
        }
        if (closure == HhpClosure::strict) {
          ok = strict_ok;
        } else {
          for (const auto& [shape, member] : shape_ok)
            if (!member) { ok = false; break; }
        }
      }
      if (!ok) {
        alive[ti] = false;
        changed = true;
      }
    }
  }
  PosetalWitness out;
  for (std::size_t ti = 0; ti < triples.size(); ++ti)
    if (alive[ti]) out.triples.push_back(triples[ti]);
  return out;
}

bool verify_posetal_witness(Kind kind, Strength strength, const PrimeEventStructure& left,
                            const PrimeEventStructure& right, const PosetalWitness& witness,
                            HhpClosure closure) {
  PosetalTriple init{Configuration{}, Bijection{}, Configuration{}};
  if (!witness.contains(init)) return false;
  Side L = make_side(left, strength, Kind::hp);
  Side R = make_side(right, strength, Kind::hp);
  for (const PosetalTriple& t : witness.triples) {
    // membership in the posetal product
    if (!left.is_configuration(t.left) || !right.is_configuration(t.right)) return false;
    if (t.iso.domain() != project(left, strength, t.left)) return false;
    if (t.iso.range() != project(right, strength, t.right)) return false;
    for (const auto& [a, b] : t.iso.pairs()) {
      if (!(left.label(a) == right.label(b))) return false;
      for (const auto& [a2, b2] : t.iso.pairs())
        if (left.leq(a, a2) != right.leq(b, b2)) return false;
    }
    // transfer
    for (int side = 0; side < 2; ++side) {
      const Side& mover = side == 0 ? L : R;
      const Side& other = side == 0 ? R : L;
      Configuration from = side == 0 ? t.left : t.right;
      Configuration other_from = side == 0 ? t.right : t.left;
      for (const SingleMove& m : mover.singles[mover.index(from)]) {
        bool matched = false;
        for (const SingleMove& resp : other.singles[other.index(other_from)]) {
          EventId e = side == 0 ? m.event : resp.event;
          EventId g = side == 0 ? resp.event : m.event;
          if (!iso_extension_ok(left, right, t.iso, e, g)) continue;
          Bijection f2 = t.iso;
          f2.insert(e, g);
          Configuration c1 = side == 0 ? mover.configs[m.target] : other.configs[resp.target];
          Configuration c2 = side == 0 ? other.configs[resp.target] : mover.configs[m.target];
          if (witness.contains(PosetalTriple{c1, f2, c2})) { matched = true; break; }
        }
        if (!matched) return false;
      }
    }
    // downward closure
    if (kind == Kind::hhp) {
      std::map<std::vector<std::pair<EventId, EventId>>, bool> shape_ok;
      for (Configuration c1 : sub_configurations(left, t.left)) {
        Bijection f = t.iso.restricted_to(project(left, strength, c1));
        EventSet image = f.range();
        for (Configuration c2 : sub_configurations(right, t.right)) {
          if (project(right, strength, c2) != image) continue;
          bool member = witness.contains(PosetalTriple{c1, f, c2});
          if (closure == HhpClosure::strict) {
            if (!member) return false;
          } else {
            auto [it, inserted] = shape_ok.try_emplace(f.pairs(), member);
            if (!inserted) it->second = it->second || member;
          }
        }
      }
      if (closure == HhpClosure::visible)
        for (const auto& [shape, ok] : shape_ok)
          if (!ok) return false;
    }
  }
  return true;
}

}  // namespace wtc
