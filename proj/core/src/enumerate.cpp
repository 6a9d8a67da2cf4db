#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "wtc/fixpoint.hpp"
#include "wtc/logic.hpp"

namespace wtc {

namespace {

// ---------------------------------------------------------------------------
// Signature engine for the closed fragments (hm / step / pomset): a closed
// formula denotes a set of configurations per structure, so its two-sided
// signature is a pair of bitmasks. Each modal level applies the fragment's
// diamond relations and closes the pool under negation and conjunction, which
// makes "no separator up to depth d" exact for the fragment.

using Mask = std::uint64_t;
using Sig = std::pair<Mask, Mask>;

struct StructureData {
  const PrimeEventStructure* pes;
  std::vector<Configuration> configs;
  Mask full = 0;

  explicit StructureData(const PrimeEventStructure& p) : pes(&p), configs(enumerate_configurations(p)) {
    if (configs.size() > 64) raise(Errc::bounds_exceeded, "bounded enumeration supports at most 64 configurations");
    full = configs.size() == 64 ? ~Mask{0} : (Mask{1} << configs.size()) - 1;
  }

  std::size_t index(Configuration c) const {
    auto it = std::lower_bound(configs.begin(), configs.end(), c);
    return static_cast<std::size_t>(it - configs.begin());
  }
};

std::vector<std::string> union_alphabet(const PrimeEventStructure& l, const PrimeEventStructure& r) {
  std::set<std::string> names;
  for (EventId e : l.visible_events()) names.insert(l.label(e).name());
  for (EventId e : r.visible_events()) names.insert(r.label(e).name());
  return {names.begin(), names.end()};
}

// One chain step of a pomset-fragment prefix: label plus cause/independence
// constraints against the previously bound positions.
struct ChainStep {
  Label label;
  std::uint32_t causes = 0;
  std::uint32_t indep = 0;
};

struct DiamondOp {
  int cost = 1;
  std::function<Formula(Formula)> build;
  std::vector<Mask> rel_left;   // per start config: reachable end configs
  std::vector<Mask> rel_right;
};

std::vector<Configuration> weak_event_targets(const StructureData& sd, Configuration c, EventId e) {
  std::vector<Configuration> out;
  for (Configuration cx : sd.configs) {
    if (!c.subset_of(cx)) continue;
    if (sd.pes->visible_part(cx - c) != EventSet::single(e)) continue;
    out.push_back(cx);
  }
  return out;
}

std::vector<Mask> label_diamond_relation(const StructureData& sd, const std::string& label) {
  std::vector<Mask> rel(sd.configs.size(), 0);
  for (std::size_t i = 0; i < sd.configs.size(); ++i) {
    for (std::size_t j = 0; j < sd.configs.size(); ++j) {
      if (!sd.configs[i].subset_of(sd.configs[j]) || i == j) continue;
      EventSet x = sd.pes->visible_part(sd.configs[j] - sd.configs[i]);
      if (x.size() != 1) continue;
      if (sd.pes->label(x.front()).name() == label) rel[i] |= Mask{1} << j;
    }
  }
  return rel;
}

std::vector<Mask> step_diamond_relation(const StructureData& sd, const std::vector<std::string>& multiset) {
  std::vector<Mask> rel(sd.configs.size(), 0);
  for (std::size_t i = 0; i < sd.configs.size(); ++i) {
    for (std::size_t j = 0; j < sd.configs.size(); ++j) {
      if (!sd.configs[i].subset_of(sd.configs[j]) || i == j) continue;
      EventSet x = sd.pes->visible_part(sd.configs[j] - sd.configs[i]);
      if (x.size() != multiset.size() || x.empty()) continue;
      bool conc = true;
      for (EventId a : x)
        for (EventId b : x)
          if (a < b && !sd.pes->concurrent(a, b)) conc = false;
      if (!conc) continue;
      std::vector<std::string> labels;
      for (EventId e : x) labels.push_back(sd.pes->label(e).name());
      std::sort(labels.begin(), labels.end());
      if (labels == multiset) rel[i] |= Mask{1} << j;
    }
  }
  return rel;
}

// Executes a chain pattern from one configuration: at each step bind a
// residual event with the step's label satisfying the cause/independence
// constraints against the previously bound events, then take a weak
// transition on it.
void chain_ends(const StructureData& sd, const std::vector<ChainStep>& steps, std::size_t k,
                Configuration c, std::vector<EventId>& bound, Mask& out) {
  if (k == steps.size()) {
    out |= Mask{1} << sd.index(c);
    return;
  }
  const ChainStep& st = steps[k];
  for (EventId e : sd.pes->residual(c)) {
    if (!(sd.pes->label(e) == st.label)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < bound.size() && ok; ++i) {
      if ((st.causes >> i) & 1u) {
        if (!(bound[i] != e && sd.pes->leq(bound[i], e))) ok = false;
      } else if ((st.indep >> i) & 1u) {
        if (!sd.pes->concurrent(bound[i], e)) ok = false;
      }
    }
    if (!ok) continue;
    bound.push_back(e);
    for (Configuration cx : weak_event_targets(sd, c, e)) chain_ends(sd, steps, k + 1, cx, bound, out);
    bound.pop_back();
  }
}

std::vector<Mask> chain_relation(const StructureData& sd, const std::vector<ChainStep>& steps) {
  std::vector<Mask> rel(sd.configs.size(), 0);
  for (std::size_t i = 0; i < sd.configs.size(); ++i) {
    std::vector<EventId> bound;
    chain_ends(sd, steps, 0, sd.configs[i], bound, rel[i]);
  }
  return rel;
}

Formula chain_formula(const std::vector<ChainStep>& steps, Formula body) {
  Formula out = std::move(body);
  for (std::size_t k = steps.size(); k-- > 0;) {
    BindSpec spec;
    spec.label = steps[k].label;
    spec.target = "z" + std::to_string(k + 1);
    for (std::size_t i = 0; i < k; ++i) {
      if ((steps[k].causes >> i) & 1u) spec.causes.push_back("z" + std::to_string(i + 1));
      if ((steps[k].indep >> i) & 1u) spec.independent.push_back("z" + std::to_string(i + 1));
    }
    out = Formula::bind_exec(std::move(spec), std::move(out));
  }
  return out;
}

std::vector<DiamondOp> fragment_ops(FragmentTag fragment, const StructureData& l,
                                    const StructureData& r, int depth) {
  std::vector<DiamondOp> ops;
  std::vector<std::string> alphabet = union_alphabet(*l.pes, *r.pes);
  const int max_len = std::min(depth, 3);

  auto add_label_ops = [&] {
    for (const std::string& a : alphabet) {
      DiamondOp op;
      op.cost = 1;
      op.build = [a](Formula body) {
        BindSpec s;
        s.label = Label::visible(a);
        s.target = "z1";
        return Formula::bind_exec(std::move(s), std::move(body));
      };
      op.rel_left = label_diamond_relation(l, a);
      op.rel_right = label_diamond_relation(r, a);
      ops.push_back(std::move(op));
    }
  };

  if (fragment == FragmentTag::hm) {
    add_label_ops();
    return ops;
  }

  if (fragment == FragmentTag::step) {
    // all label multisets of size 1..max_len, in lexicographic order
    std::vector<std::vector<std::string>> multisets;
    std::function<void(std::vector<std::string>&, std::size_t)> gen =
        [&](std::vector<std::string>& cur, std::size_t from) {
          if (!cur.empty()) multisets.push_back(cur);
          if (static_cast<int>(cur.size()) == max_len) return;
          for (std::size_t i = from; i < alphabet.size(); ++i) {
            cur.push_back(alphabet[i]);
            gen(cur, i);
            cur.pop_back();
          }
        };
    std::vector<std::string> cur;
    gen(cur, 0);
    for (const auto& m : multisets) {
      DiamondOp op;
      op.cost = static_cast<int>(m.size());
      op.build = [m](Formula body) {
        std::vector<BindSpec> factors;
        for (std::size_t i = 0; i < m.size(); ++i) {
          BindSpec s;
          s.label = Label::visible(m[i]);
          s.target = "z" + std::to_string(i + 1);
          factors.push_back(std::move(s));
        }
        return Formula::step_product(std::move(factors), true, std::move(body));
      };
      op.rel_left = step_diamond_relation(l, m);
      op.rel_right = step_diamond_relation(r, m);
      ops.push_back(std::move(op));
    }
    return ops;
  }

  // pomset and hp: chain patterns (the hp enumeration explores the same
  // chain-shaped family; open-operand conjunctions are not enumerated)
  std::vector<std::vector<ChainStep>> patterns;
  std::function<void(std::vector<ChainStep>&)> gen = [&](std::vector<ChainStep>& cur) {
    if (!cur.empty()) patterns.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    const std::size_t k = cur.size();
    // every (causes, indep) disjoint pair of subsets of the k prior positions
    for (std::uint32_t causes = 0; causes < (1u << k); ++causes) {
      for (std::uint32_t indep = 0; indep < (1u << k); ++indep) {
        if (causes & indep) continue;
        for (const std::string& a : alphabet) {
          cur.push_back(ChainStep{Label::visible(a), causes, indep});
          gen(cur);
          cur.pop_back();
        }
      }
    }
  };
  std::vector<ChainStep> cur;
  gen(cur);
  for (const auto& p : patterns) {
    DiamondOp op;
    op.cost = static_cast<int>(p.size());
    op.build = [p](Formula body) { return chain_formula(p, std::move(body)); };
    op.rel_left = chain_relation(l, p);
    op.rel_right = chain_relation(r, p);
    ops.push_back(std::move(op));
  }
  return ops;
}

Mask apply_rel(const std::vector<Mask>& rel, Mask body) {
  Mask out = 0;
  for (std::size_t i = 0; i < rel.size(); ++i)
    if (rel[i] & body) out |= Mask{1} << i;
  return out;
}

struct Pool {
  std::vector<std::pair<Sig, Formula>> entries;  // insertion order
  std::set<Sig> seen;
  std::size_t considered = 0;

  bool insert(Sig sig, const Formula& f) {
    ++considered;
    if (seen.count(sig)) return false;
    if (entries.size() >= 20000) raise(Errc::bounds_exceeded, "formula pool exceeded its cap");
    seen.insert(sig);
    entries.emplace_back(sig, f);
    return true;
  }
};

SeparationResult closed_fragment_search(const PrimeEventStructure& left,
                                        const PrimeEventStructure& right, FragmentTag fragment,
                                        int depth) {
  StructureData L(left), R(right);
  std::vector<DiamondOp> ops = fragment_ops(fragment, L, R, depth);

  SeparationResult res;
  auto separator = [&](const Sig& sig) { return ((sig.first ^ sig.second) & 1) != 0; };

  Pool pool;
  std::vector<std::size_t> level_end;  // pool size after each closed level

  auto finish = [&](const Sig& sig, const Formula& f) {
    res.separated = true;
    res.separator = f;
    res.holds_on_left = (sig.first & 1) != 0;
    res.formulas_considered = pool.considered;
    return res;
  };

  // depth 0: boolean closure of {T}
  Sig top{L.full, R.full};
  pool.insert(top, Formula::truth());
  if (separator(top)) return finish(top, Formula::truth());

  auto bool_close = [&](std::size_t start) -> std::optional<SeparationResult> {
    for (std::size_t i = start; i < pool.entries.size(); ++i) {
      auto [sig_i, f_i] = pool.entries[i];
      Sig nsig{L.full & ~sig_i.first, R.full & ~sig_i.second};
      if (pool.insert(nsig, Formula::neg(f_i)) && separator(nsig))
        return finish(nsig, Formula::neg(f_i));
      for (std::size_t j = 0; j < i; ++j) {
        auto [sig_j, f_j] = pool.entries[j];
        Sig csig{sig_i.first & sig_j.first, sig_i.second & sig_j.second};
        if (pool.insert(csig, Formula::conj(f_j, f_i)) && separator(csig))
          return finish(csig, Formula::conj(f_j, f_i));
      }
    }
    return std::nullopt;
  };
  if (auto r = bool_close(0)) return *r;
  level_end.push_back(pool.entries.size());

  for (int d = 1; d <= depth; ++d) {
    std::size_t before = pool.entries.size();
    for (const DiamondOp& op : ops) {
      if (op.cost > d) continue;
      // bodies available at depth d - cost
      std::size_t limit = level_end[static_cast<std::size_t>(d - op.cost)];
      for (std::size_t b = 0; b < limit; ++b) {
        auto [bsig, bf] = pool.entries[b];
        Sig nsig{apply_rel(op.rel_left, bsig.first), apply_rel(op.rel_right, bsig.second)};
        Formula nf = op.build(bf);
        if (pool.insert(nsig, nf) && separator(nsig)) return finish(nsig, nf);
      }
    }
    // close the enlarged pool under negation/conjunction to a fixpoint
    std::size_t close_from = before;
    while (true) {
      std::size_t sz = pool.entries.size();
      if (auto r = bool_close(close_from)) return *r;
      if (pool.entries.size() == sz) break;
      close_from = sz;
    }
    level_end.push_back(pool.entries.size());
  }

  res.formulas_considered = pool.considered;
  return res;
}

// ---------------------------------------------------------------------------
// Full-logic bounded family: operator sequences that may bind without
// executing and execute any bound variable later, closed by T, plus top-level
// conjunctions with one negated sequence. A best-effort family, used by the
// hhp fallback.

struct FullOp {
  bool is_bind = true;
  Label label;
  std::uint32_t causes = 0;
  std::uint32_t indep = 0;
  std::size_t exec_var = 0;  // for exec ops: index of the bound variable
};

Formula full_sequence_formula(const std::vector<FullOp>& ops) {
  Formula out = Formula::truth();
  std::size_t binds_total = 0;
  for (const FullOp& op : ops)
    if (op.is_bind) ++binds_total;
  std::size_t seen = 0;
  std::vector<std::size_t> bind_index_at;  // running bind count before each op
  for (const FullOp& op : ops) {
    bind_index_at.push_back(seen);
    if (op.is_bind) ++seen;
  }
  (void)binds_total;
  for (std::size_t k = ops.size(); k-- > 0;) {
    const FullOp& op = ops[k];
    if (op.is_bind) {
      BindSpec spec;
      spec.label = op.label;
      spec.target = "z" + std::to_string(bind_index_at[k] + 1);
      for (std::size_t i = 0; i < bind_index_at[k]; ++i) {
        if ((op.causes >> i) & 1u) spec.causes.push_back("z" + std::to_string(i + 1));
        if ((op.indep >> i) & 1u) spec.independent.push_back("z" + std::to_string(i + 1));
      }
      out = Formula::bind(std::move(spec), std::move(out));
    } else {
      out = Formula::exec("z" + std::to_string(op.exec_var + 1), std::move(out));
    }
  }
  return out;
}

void gen_full_sequences(const std::vector<std::string>& alphabet, int depth,
                        std::vector<FullOp>& cur, std::size_t bound, std::uint64_t executed,
                        std::vector<std::vector<FullOp>>& out) {
  if (!cur.empty()) out.push_back(cur);
  if (static_cast<int>(cur.size()) == depth) return;
  for (const std::string& a : alphabet) {
    for (std::uint32_t causes = 0; causes < (1u << bound); ++causes) {
      for (std::uint32_t indep = 0; indep < (1u << bound); ++indep) {
        if (causes & indep) continue;
        FullOp op;
        op.is_bind = true;
        op.label = Label::visible(a);
        op.causes = causes;
        op.indep = indep;
        cur.push_back(op);
        gen_full_sequences(alphabet, depth, cur, bound + 1, executed, out);
        cur.pop_back();
      }
    }
  }
  for (std::size_t v = 0; v < bound; ++v) {
    if ((executed >> v) & 1u) continue;
    FullOp op;
    op.is_bind = false;
    op.exec_var = v;
    cur.push_back(op);
    gen_full_sequences(alphabet, depth, cur, bound, executed | (std::uint64_t{1} << v), out);
    cur.pop_back();
  }
}

SeparationResult full_search(const PrimeEventStructure& left, const PrimeEventStructure& right,
                             int depth) {
  SeparationResult res;
  StructureData L(left), R(right);
  std::vector<std::string> alphabet = union_alphabet(left, right);
  std::vector<std::vector<FullOp>> seqs;
  std::vector<FullOp> cur;
  gen_full_sequences(alphabet, std::min(depth, alphabet.size() <= 1 ? 4 : 3), cur, 0, 0, seqs);

  // closed formulas denote configuration sets: dedup sequence literals by
  // their two-sided signature and combine signatures with mask arithmetic
  auto config_mask = [](const StructureData& sd, const Denotation& den) {
    Mask m = 0;
    for (const LegalPair& lp : den.pairs) m |= Mask{1} << sd.index(lp.config);
    return m;
  };
  auto separator_sig = [](const Sig& sig) { return ((sig.first ^ sig.second) & 1) != 0; };

  std::vector<std::pair<Sig, Formula>> literals;
  std::set<Sig> seen;
  for (const auto& s : seqs) {
    Formula f = full_sequence_formula(s);
    Formula core = desugar(f);
    Sig sig{config_mask(L, denotation(left, core)), config_mask(R, denotation(right, core))};
    ++res.formulas_considered;
    if (separator_sig(sig)) {
      res.separated = true;
      res.separator = f;
      res.holds_on_left = (sig.first & 1) != 0;
      return res;
    }
    if (seen.insert(sig).second) literals.emplace_back(sig, std::move(f));
    if (literals.size() > 2000) break;
  }
  // conjunctions with one negated literal, evaluated on the signatures
  for (std::size_t i = 0; i < literals.size(); ++i) {
    for (std::size_t j = 0; j < literals.size(); ++j) {
      if (i == j) continue;
      ++res.formulas_considered;
      Sig sig{literals[i].first.first & L.full & ~literals[j].first.first,
              literals[i].first.second & R.full & ~literals[j].first.second};
      if (separator_sig(sig)) {
        res.separated = true;
        res.separator = Formula::conj(literals[i].second, Formula::neg(literals[j].second));
        res.holds_on_left = (sig.first & 1) != 0;
        return res;
      }
    }
  }
  return res;
}

}  // namespace

SeparationResult bounded_logical_equiv(const PrimeEventStructure& left,
                                       const PrimeEventStructure& right, FragmentTag fragment,
                                       int depth) {
  if (depth < 0) raise(Errc::bounds_exceeded, "depth must be non-negative");
  if (fragment == FragmentTag::full) return full_search(left, right, depth);
  return closed_fragment_search(left, right, fragment, depth);
}

SeparationResult bounded_mu_equiv(const PrimeEventStructure& left, const PrimeEventStructure& right,
                                  FragmentTag fragment, int depth) {
  SeparationResult res;
  StructureData L(left), R(right);
  FragmentTag diamonds = fragment == FragmentTag::full ? FragmentTag::pomset : fragment;
  std::vector<DiamondOp> ops = fragment_ops(diamonds, L, R, std::min(depth, 2));

  // closed side conditions: representatives from the fragment pools
  std::vector<Formula> sides{Formula::truth()};
  {
    StructureData L2(left), R2(right);
    std::vector<DiamondOp> side_ops = fragment_ops(diamonds, L2, R2, 1);
    for (const DiamondOp& op : side_ops) {
      if (sides.size() >= 24) break;
      sides.push_back(op.build(Formula::truth()));
    }
  }

  auto check = [&](const Formula& f) -> bool {
    ++res.formulas_considered;
    bool a = satisfies(left, Configuration{}, Environment{}, f);
    bool b = satisfies(right, Configuration{}, Environment{}, f);
    if (a != b) {
      res.separated = true;
      res.separator = f;
      res.holds_on_left = a;
      return true;
    }
    return false;
  };

  for (const DiamondOp& op : ops) {
    if (op.cost > std::max(1, depth - 1)) continue;
    Formula dx = op.build(Formula::prop_apply("X", {}));
    if (check(Formula::mu("X", {}, dx))) return res;
    if (check(Formula::nu("X", {}, dx))) return res;
    for (const Formula& psi : sides) {
      if (check(Formula::mu("X", {}, Formula::disj(psi, dx)))) return res;
      if (check(Formula::mu("X", {}, Formula::conj(psi, dx)))) return res;
      if (check(Formula::nu("X", {}, Formula::disj(psi, dx)))) return res;
      if (check(Formula::nu("X", {}, Formula::conj(psi, dx)))) return res;
    }
  }
  return res;
}

}  // namespace wtc
