#include "wtc/logic.hpp"

#include <algorithm>

#include "eval_detail.hpp"
#include "wtc/fixpoint.hpp"

namespace wtc {

std::optional<EventId> Environment::lookup(const Var& v) const {
  for (const auto& [var, e] : pairs_)
    if (var == v) return e;
  return std::nullopt;
}

EventId Environment::at(const Var& v) const {
  if (auto e = lookup(v)) return *e;
  raise(Errc::unbound_variable, "variable '" + v + "' is not bound");
}

Environment Environment::bound(const Var& z, EventId e) const {
  Environment out = *this;
  for (auto& [var, ev] : out.pairs_) {
    if (var == z) {
      ev = e;
      return out;
    }
  }
  out.pairs_.emplace_back(z, e);
  std::sort(out.pairs_.begin(), out.pairs_.end());
  return out;
}

Environment Environment::restricted_to(const std::set<Var>& vars) const {
  Environment out;
  for (const auto& p : pairs_)
    if (vars.count(p.first)) out.pairs_.push_back(p);
  return out;
}

EventSet Environment::image() const {
  EventSet s;
  for (const auto& [var, e] : pairs_) s.insert(e);
  return s;
}

EventSet Environment::image_of(const std::set<Var>& vars) const {
  EventSet s;
  for (const auto& [var, e] : pairs_)
    if (vars.count(var)) s.insert(e);
  return s;
}

bool is_legal_pair(const PrimeEventStructure& pes, Configuration c, const Environment& eta,
                   const Formula& phi) {
  if (!pes.is_configuration(c)) raise(Errc::inconsistent_set, "not a configuration");
  EventSet image;
  for (const Var& v : free_vars(phi)) {
    EventId e = eta.at(v);
    if (pes.label(e).is_tau()) raise(Errc::tau_argument, "environments range over visible events");
    image.insert(e);
  }
  return pes.is_consistent(c | image);
}

namespace detail {

std::vector<LegalPair> legal_pairs_for(const EvalCtx& ctx, const std::set<Var>& vars) {
  std::vector<Var> vs(vars.begin(), vars.end());
  std::vector<EventId> visibles;
  for (EventId e : ctx.pes.visible_events()) visibles.push_back(e);

  std::vector<LegalPair> out;
  std::vector<EventId> chosen(vs.size());
  for (Configuration c : ctx.configs) {
    auto rec = [&](auto&& self, std::size_t i, EventSet used) -> void {
      if (i == vs.size()) {
        Environment env;
        for (std::size_t k = 0; k < vs.size(); ++k) env = env.bound(vs[k], chosen[k]);
        out.push_back(LegalPair{c, env});
        return;
      }
      for (EventId e : visibles) {
        if (ctx.pes.conflicts_with(e).intersects(c | used)) continue;
        chosen[i] = e;
        self(self, i + 1, used.with(e));
      }
    };
    rec(rec, 0, EventSet{});
  }
  return out;
}

std::vector<Configuration> weak_succs(const EvalCtx& ctx, Configuration c, EventId e) {
  std::vector<Configuration> out;
  if (c.contains(e)) return out;
  for (Configuration cx : ctx.configs) {
    if (!c.subset_of(cx)) continue;
    if (ctx.pes.visible_part(cx - c) != EventSet::single(e)) continue;
    out.push_back(cx);
  }
  return out;
}

namespace {

bool bind_candidate_ok(const EvalCtx& ctx, EventId e, const BindSpec& spec, const Environment& eta,
                       const std::set<Var>& body_rest) {
  const PrimeEventStructure& pes = ctx.pes;
  if (!(pes.label(e) == spec.label)) return false;
  for (const Var& v : body_rest) {
    if (!pes.consistent(eta.at(v), e)) return false;
  }
  for (const Var& x : spec.causes) {
    EventId ex = eta.at(x);
    if (ex == e || !pes.leq(ex, e)) return false;
  }
  for (const Var& y : spec.independent) {
    EventId ey = eta.at(y);
    if (!pes.concurrent(ey, e)) return false;
    if (ctx.opts.strict_tau_independence) {
      for (EventId t : pes.causes(e) - pes.visible_events()) {
        if (pes.causes(ey).contains(t)) continue;
        if (!pes.concurrent(ey, t)) return false;
      }
    }
  }
  return true;
}

PropositionEnvironment::ElementSet denotation_to_elements(const std::vector<Var>& params,
                                                          const Denotation& den) {
  PropositionEnvironment::ElementSet out;
  for (const LegalPair& lp : den.pairs) {
    std::vector<EventId> vec;
    vec.reserve(params.size());
    for (const Var& v : params) vec.push_back(lp.env.at(v));
    out.insert({lp.config, std::move(vec)});
  }
  return out;
}

}  // namespace

Denotation elements_to_denotation(const std::vector<Var>& params,
                                  const PropositionEnvironment::ElementSet& elems) {
  Denotation out;
  for (const auto& [c, vec] : elems) {
    Environment env;
    for (std::size_t i = 0; i < params.size(); ++i) env = env.bound(params[i], vec[i]);
    out.pairs.insert(LegalPair{c, env});
  }
  return out;
}

std::vector<PropositionEnvironment::ElementSet> mu_iterates(const EvalCtx& ctx,
                                                            const Formula& mu_node) {
  if (mu_node.op() != Formula::Op::mu) raise(Errc::invalid_formula, "expected a mu node");
  const std::vector<Var>& params = mu_node.params();
  const Formula& body = mu_node.child(0);
  {
    std::set<Var> fv = free_vars(body);
    std::set<Var> ps(params.begin(), params.end());
    if (fv != ps)
      raise(Errc::positivity_violation,
            "fixpoint body must have exactly the binder parameters free");
  }
  std::set<Var> ps(params.begin(), params.end());
  const std::size_t lattice_bound = legal_pairs_for(ctx, ps).size();

  std::vector<PropositionEnvironment::ElementSet> trace;
  trace.emplace_back();  // S_0 = empty
  for (std::size_t k = 0;; ++k) {
    PropositionEnvironment pi2;
    if (ctx.props) pi2 = *ctx.props;
    pi2.bind(mu_node.prop(), params.size(), trace.back());
    EvalCtx sub(ctx.pes, ctx.opts, &pi2, ctx.configs);
    Denotation den = eval(sub, body);
    PropositionEnvironment::ElementSet next = denotation_to_elements(params, den);
    const PropositionEnvironment::ElementSet& prev = trace.back();
    if (!std::includes(next.begin(), next.end(), prev.begin(), prev.end()))
      raise(Errc::positivity_violation, "fixpoint iteration is not monotone");
    bool stable = next == prev;
    trace.push_back(std::move(next));
    if (stable) return trace;
    if (k > lattice_bound + 1)
      raise(Errc::positivity_violation, "fixpoint iteration exceeded the lattice height bound");
  }
}

Denotation eval(const EvalCtx& ctx, const Formula& phi) {
  switch (phi.op()) {
    case Formula::Op::truth: {
      Denotation out;
      for (Configuration c : ctx.configs) out.pairs.insert(LegalPair{c, Environment()});
      return out;
    }
    case Formula::Op::conj: {
      const std::set<Var> fvl = free_vars(phi.child(0));
      const std::set<Var> fvr = free_vars(phi.child(1));
      std::set<Var> fv = fvl;
      fv.insert(fvr.begin(), fvr.end());
      Denotation l = eval(ctx, phi.child(0));
      Denotation r = eval(ctx, phi.child(1));
      Denotation out;
      for (const LegalPair& lp : legal_pairs_for(ctx, fv)) {
        if (l.contains(lp.config, lp.env.restricted_to(fvl)) &&
            r.contains(lp.config, lp.env.restricted_to(fvr)))
          out.pairs.insert(lp);
      }
      return out;
    }
    case Formula::Op::neg: {
      Denotation b = eval(ctx, phi.child(0));
      Denotation out;
      for (const LegalPair& lp : legal_pairs_for(ctx, free_vars(phi.child(0))))
        if (!b.pairs.count(lp)) out.pairs.insert(lp);
      return out;
    }
    case Formula::Op::bind: {
      const BindSpec& spec = phi.spec();
      const Formula& body = phi.child(0);
      const std::set<Var> fv_body = free_vars(body);
      std::set<Var> body_rest = fv_body;
      body_rest.erase(spec.target);
      Denotation b = eval(ctx, body);
      Denotation out;
      for (const LegalPair& lp : legal_pairs_for(ctx, free_vars(phi))) {
        for (EventId e : ctx.pes.residual(lp.config)) {
          if (!bind_candidate_ok(ctx, e, spec, lp.env, body_rest)) continue;
          Environment inner = lp.env.bound(spec.target, e).restricted_to(fv_body);
          if (b.contains(lp.config, inner)) {
            out.pairs.insert(lp);
            break;
          }
        }
      }
      return out;
    }
    case Formula::Op::exec: {
      const Formula& body = phi.child(0);
      const std::set<Var> fv_body = free_vars(body);
      Denotation b = eval(ctx, body);
      Denotation out;
      for (const LegalPair& lp : legal_pairs_for(ctx, free_vars(phi))) {
        EventId e = lp.env.at(phi.var());
        Environment inner = lp.env.restricted_to(fv_body);
        for (Configuration cx : weak_succs(ctx, lp.config, e)) {
          if (b.contains(cx, inner)) {
            out.pairs.insert(lp);
            break;
          }
        }
      }
      return out;
    }
    case Formula::Op::prop_apply: {
      if (!ctx.props || !ctx.props->binds(phi.prop()))
        raise(Errc::unbound_proposition, "proposition '" + phi.prop() + "' is not bound");
      if (ctx.props->arity(phi.prop()) != phi.params().size())
        raise(Errc::arity_error, "proposition '" + phi.prop() + "' applied to " +
                                     std::to_string(phi.params().size()) + " variables, arity is " +
                                     std::to_string(ctx.props->arity(phi.prop())));
      const auto& elems = ctx.props->elements(phi.prop());
      Denotation out;
      for (const LegalPair& lp : legal_pairs_for(ctx, free_vars(phi))) {
        std::vector<EventId> vec;
        vec.reserve(phi.params().size());
        for (const Var& v : phi.params()) vec.push_back(lp.env.at(v));
        if (elems.count({lp.config, vec})) out.pairs.insert(lp);
      }
      return out;
    }
    case Formula::Op::mu: {
      auto trace = mu_iterates(ctx, phi);
      return elements_to_denotation(phi.params(), trace.back());
    }
    default:
      raise(Errc::invalid_formula, "evaluation requires a core formula; desugar first");
  }
}

}  // namespace detail

std::vector<LegalPair> legal_pairs(const PrimeEventStructure& pes, const Formula& phi) {
  detail::EvalCtx ctx(pes);
  return detail::legal_pairs_for(ctx, free_vars(phi));
}

Denotation denotation(const PrimeEventStructure& pes, const Formula& phi, EvalOptions opts) {
  if (!is_core(phi)) raise(Errc::invalid_formula, "denotation requires a core formula; desugar first");
  if (!is_mu_free(phi))
    raise(Errc::invalid_formula, "fixpoint formulas are evaluated by mu_denotation");
  detail::EvalCtx ctx(pes, opts);
  return detail::eval(ctx, phi);
}

bool satisfies(const PrimeEventStructure& pes, Configuration c, const Environment& eta,
               const Formula& phi, EvalOptions opts) {
  if (!pes.is_configuration(c)) raise(Errc::inconsistent_set, "not a configuration");
  Formula core = desugar(phi);
  std::set<Var> fv = free_vars(core);
  Environment env = eta.restricted_to(fv);
  for (const Var& v : fv) env.at(v);  // raises UnboundVariable if missing
  Denotation den;
  if (is_mu_free(core)) {
    den = denotation(pes, core, opts);
  } else {
    den = mu_denotation(pes, core, {}, opts);
  }
  return den.contains(c, env);
}

const char* fragment_name(FragmentTag tag) noexcept {
  switch (tag) {
    case FragmentTag::hm: return "hm";
    case FragmentTag::step: return "step";
    case FragmentTag::pomset: return "pomset";
    case FragmentTag::hp: return "hp";
    case FragmentTag::full: return "full";
  }
  return "full";
}

namespace {

bool empty_lists(const BindSpec& s) { return s.causes.empty() && s.independent.empty(); }

// bind(s, exec(s.target, b)) is the core form of <<|s|>> b
bool core_bind_exec(const Formula& phi, BindSpec& spec, Formula& body) {
  if (phi.op() != Formula::Op::bind) return false;
  const Formula& inner = phi.child(0);
  if (inner.op() != Formula::Op::exec || inner.var() != phi.spec().target) return false;
  spec = phi.spec();
  body = inner.child(0);
  return true;
}

// binds s1..sn followed by execs of exactly the bound targets in order, with
// empty cause lists and independence lists equal to the earlier targets: the
// core form of a step product of <<|a_i x_i|>> diamonds.
bool core_step_product(const Formula& phi, std::size_t& width, Formula& body) {
  std::vector<BindSpec> specs;
  Formula cur = phi;
  while (cur.op() == Formula::Op::bind) {
    specs.push_back(cur.spec());
    cur = cur.child(0);
  }
  if (specs.empty()) return false;
  for (const BindSpec& s : specs)
    if (!s.causes.empty()) return false;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::set<Var> want;
    for (std::size_t j = 0; j < i; ++j) want.insert(specs[j].target);
    std::set<Var> have(specs[i].independent.begin(), specs[i].independent.end());
    if (want != have) return false;
  }
  for (const BindSpec& s : specs) {
    if (cur.op() != Formula::Op::exec || cur.var() != s.target) return false;
    cur = cur.child(0);
  }
  width = specs.size();
  body = cur;
  return true;
}

struct FragmentClassifier {
  bool hm(const Formula& phi) const {
    switch (phi.op()) {
      case Formula::Op::truth:
        return true;
      case Formula::Op::conj:
      case Formula::Op::disj:
        return hm(phi.child(0)) && hm(phi.child(1));
      case Formula::Op::neg:
        return hm(phi.child(0));
      case Formula::Op::bind_exec:
        return empty_lists(phi.spec()) && hm(phi.child(0));
      case Formula::Op::step_product:
        return phi.product_execs() && phi.factors().size() == 1 && empty_lists(phi.factors()[0]) &&
               hm(phi.child(0));
      case Formula::Op::pomset_diamond:
        return phi.var_pomset().size() == 0 && hm(phi.child(0));
      case Formula::Op::bind: {
        BindSpec s;
        Formula b;
        if (core_bind_exec(phi, s, b)) return empty_lists(s) && hm(b);
        return false;
      }
      default:
        return false;
    }
  }

  bool step(const Formula& phi) const {
    switch (phi.op()) {
      case Formula::Op::truth:
        return true;
      case Formula::Op::conj:
      case Formula::Op::disj:
        return step(phi.child(0)) && step(phi.child(1));
      case Formula::Op::neg:
        return step(phi.child(0));
      case Formula::Op::bind_exec:
        return empty_lists(phi.spec()) && step(phi.child(0));
      case Formula::Op::step_product: {
        if (!phi.product_execs()) return false;
        for (const BindSpec& s : phi.factors())
          if (!empty_lists(s)) return false;
        return step(phi.child(0));
      }
      case Formula::Op::pomset_diamond:
        return phi.var_pomset().size() == 0 && step(phi.child(0));
      case Formula::Op::bind: {
        std::size_t width = 0;
        Formula b;
        if (core_step_product(phi, width, b)) return step(b);
        return false;
      }
      default:
        return false;
    }
  }

  bool pomset(const Formula& phi) const {
    switch (phi.op()) {
      case Formula::Op::truth:
        return true;
      case Formula::Op::conj:
      case Formula::Op::disj:
        return is_closed(phi.child(0)) && is_closed(phi.child(1)) && pomset(phi.child(0)) &&
               pomset(phi.child(1));
      case Formula::Op::neg:
        return is_closed(phi.child(0)) && pomset(phi.child(0));
      case Formula::Op::bind_exec:
        return pomset(phi.child(0));
      case Formula::Op::pomset_diamond:
        return pomset(phi.child(0));
      case Formula::Op::bind: {
        BindSpec s;
        Formula b;
        if (core_bind_exec(phi, s, b)) return pomset(b);
        return false;
      }
      default:
        return false;
    }
  }

  bool hp(const Formula& phi) const {
    switch (phi.op()) {
      case Formula::Op::truth:
        return true;
      case Formula::Op::conj:
      case Formula::Op::disj:
        return hp(phi.child(0)) && hp(phi.child(1));
      case Formula::Op::neg:
        return hp(phi.child(0));
      case Formula::Op::bind_exec:
        return hp(phi.child(0));
      case Formula::Op::pomset_diamond:
        return hp(phi.child(0));
      case Formula::Op::bind: {
        BindSpec s;
        Formula b;
        if (core_bind_exec(phi, s, b)) return hp(b);
        return false;
      }
      default:
        return false;
    }
  }
};

}  // namespace

Fragments fragment_of(const Formula& phi) {
  FragmentClassifier cls;
  Fragments out;
  out.hm = cls.hm(phi);
  out.step = cls.step(phi);
  out.pomset = cls.pomset(phi);
  out.hp = cls.hp(phi);
  return out;
}

Formula pomset_formula(const Pomset& p, Formula body) {
  VarPomset vp;
  for (std::size_t i = 0; i < p.size(); ++i) {
    vp.vars.push_back("z" + std::to_string(i + 1));
    vp.labels.push_back(p.labels[i]);
  }
  vp.strict = p.strict;
  return expand_pomset_diamond(vp, std::move(body));
}

bool pomset_class_member(const Pomset& p, const std::vector<BindSpec>& prefix) {
  if (p.size() != prefix.size()) raise(Errc::arity_mismatch, "pomset size does not match the prefix");
  auto index_of = [&](const Var& v) -> std::size_t {
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (prefix[i].target == v) return i;
    raise(Errc::arity_mismatch, "prefix references variable '" + v + "' outside the targets");
  };
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (!(p.labels[i] == prefix[i].label)) return false;
    for (const Var& v : prefix[i].causes) {
      std::size_t j = index_of(v);
      if (!(j == i || p.less(j, i))) return false;  // z <= z_i required
    }
    for (const Var& v : prefix[i].independent) {
      std::size_t j = index_of(v);
      if (j == i || p.less(j, i)) return false;  // z <= z_i forbidden
    }
  }
  return true;
}

}  // namespace wtc
