#include "wtc/formula.hpp"

#include <algorithm>

#include "wtc/error.hpp"

namespace wtc {

struct Formula::Node {
  Op op = Op::truth;
  std::vector<Formula> kids;
  BindSpec bspec;
  std::vector<BindSpec> fspecs;
  bool product_exec = false;
  VarPomset vp;
  Var var;
  std::string prop;
  std::vector<Var> params;
};

namespace {

void check_spec(const BindSpec& s) {
  if (s.label.is_tau()) raise(Errc::invalid_formula, "bind labels range over visible labels only");
  if (s.target.empty()) raise(Errc::invalid_formula, "bind needs a target variable");
  for (const Var& v : s.causes)
    if (v == s.target) raise(Errc::invalid_formula, "target variable occurs in the cause list");
  for (const Var& v : s.independent) {
    if (v == s.target) raise(Errc::invalid_formula, "target variable occurs in the independence list");
    if (std::find(s.causes.begin(), s.causes.end(), v) != s.causes.end())
      raise(Errc::invalid_formula, "variable occurs in both bind lists");
  }
}

void check_distinct(const std::vector<Var>& vars, const char* what) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j]) raise(Errc::invalid_formula, std::string(what) + " must be pairwise distinct");
}

}  // namespace

Formula::Formula() : node_(truth().node_) {}

Formula Formula::truth() {
  static const std::shared_ptr<const Node> t = std::make_shared<Node>();
  return Formula(t);
}

Formula Formula::conj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->op = Op::conj;
  n->kids = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::neg(Formula b) {
  auto n = std::make_shared<Node>();
  n->op = Op::neg;
  n->kids = {std::move(b)};
  return Formula(std::move(n));
}

Formula Formula::disj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->op = Op::disj;
  n->kids = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::bind(BindSpec spec, Formula body) {
  check_spec(spec);
  auto n = std::make_shared<Node>();
  n->op = Op::bind;
  n->bspec = std::move(spec);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::exec(Var z, Formula body) {
  if (z.empty()) raise(Errc::invalid_formula, "execution needs a variable");
  auto n = std::make_shared<Node>();
  n->op = Op::exec;
  n->var = std::move(z);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::dual_bind(BindSpec spec, Formula body) {
  check_spec(spec);
  auto n = std::make_shared<Node>();
  n->op = Op::dual_bind;
  n->bspec = std::move(spec);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::dual_exec(Var z, Formula body) {
  if (z.empty()) raise(Errc::invalid_formula, "execution needs a variable");
  auto n = std::make_shared<Node>();
  n->op = Op::dual_exec;
  n->var = std::move(z);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::bind_exec(BindSpec spec, Formula body) {
  check_spec(spec);
  auto n = std::make_shared<Node>();
  n->op = Op::bind_exec;
  n->bspec = std::move(spec);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::step_product(std::vector<BindSpec> factors, bool exec_diamonds, Formula body) {
  if (factors.empty()) raise(Errc::invalid_formula, "step product needs at least one factor");
  std::vector<Var> targets;
  for (const BindSpec& s : factors) {
    check_spec(s);
    targets.push_back(s.target);
  }
  check_distinct(targets, "product targets");
  auto n = std::make_shared<Node>();
  n->op = Op::step_product;
  n->fspecs = std::move(factors);
  n->product_exec = exec_diamonds;
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::pomset_diamond(VarPomset p, Formula body) {
  check_distinct(p.vars, "pomset variables");
  if (p.vars.size() != p.labels.size() || p.vars.size() != p.strict.size())
    raise(Errc::invalid_formula, "malformed variable pomset");
  for (const Label& l : p.labels)
    if (l.is_tau()) raise(Errc::invalid_formula, "pomset labels are visible");
  auto n = std::make_shared<Node>();
  n->op = Op::pomset_diamond;
  n->vp = std::move(p);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::prop_apply(std::string prop, std::vector<Var> args) {
  if (prop.empty()) raise(Errc::invalid_formula, "proposition needs a name");
  auto n = std::make_shared<Node>();
  n->op = Op::prop_apply;
  n->prop = std::move(prop);
  n->params = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::mu(std::string prop, std::vector<Var> params, Formula body) {
  check_distinct(params, "fixpoint parameters");
  auto n = std::make_shared<Node>();
  n->op = Op::mu;
  n->prop = std::move(prop);
  n->params = std::move(params);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::nu(std::string prop, std::vector<Var> params, Formula body) {
  check_distinct(params, "fixpoint parameters");
  auto n = std::make_shared<Node>();
  n->op = Op::nu;
  n->prop = std::move(prop);
  n->params = std::move(params);
  n->kids = {std::move(body)};
  return Formula(std::move(n));
}

Formula::Op Formula::op() const { return node_->op; }
const Formula& Formula::child(std::size_t i) const { return node_->kids.at(i); }
std::size_t Formula::child_count() const { return node_->kids.size(); }
const BindSpec& Formula::spec() const { return node_->bspec; }
const std::vector<BindSpec>& Formula::factors() const { return node_->fspecs; }
bool Formula::product_execs() const { return node_->product_exec; }
const VarPomset& Formula::var_pomset() const { return node_->vp; }
const Var& Formula::var() const { return node_->var; }
const std::string& Formula::prop() const { return node_->prop; }
const std::vector<Var>& Formula::params() const { return node_->params; }

namespace {

int cmp_vec(const std::vector<Var>& a, const std::vector<Var>& b) {
  if (a != b) return a < b ? -1 : 1;
  return 0;
}

int cmp_spec(const BindSpec& a, const BindSpec& b) {
  if (int c = cmp_vec(a.causes, b.causes)) return c;
  if (int c = cmp_vec(a.independent, b.independent)) return c;
  if (a.label != b.label) return a.label < b.label ? -1 : 1;
  if (a.target != b.target) return a.target < b.target ? -1 : 1;
  return 0;
}

}  // namespace

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.node_->op != b.node_->op) return a.node_->op < b.node_->op ? -1 : 1;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  switch (x.op) {
    case Op::bind:
    case Op::dual_bind:
    case Op::bind_exec:
      if (int c = cmp_spec(x.bspec, y.bspec)) return c;
      break;
    case Op::exec:
    case Op::dual_exec:
      if (x.var != y.var) return x.var < y.var ? -1 : 1;
      break;
    case Op::step_product: {
      if (x.product_exec != y.product_exec) return x.product_exec < y.product_exec ? -1 : 1;
      if (x.fspecs.size() != y.fspecs.size()) return x.fspecs.size() < y.fspecs.size() ? -1 : 1;
      for (std::size_t i = 0; i < x.fspecs.size(); ++i)
        if (int c = cmp_spec(x.fspecs[i], y.fspecs[i])) return c;
      break;
    }
    case Op::pomset_diamond: {
      if (!(x.vp == y.vp)) {
        if (x.vp.vars != y.vp.vars) return x.vp.vars < y.vp.vars ? -1 : 1;
        if (x.vp.labels != y.vp.labels) return x.vp.labels < y.vp.labels ? -1 : 1;
        return x.vp.strict < y.vp.strict ? -1 : 1;
      }
      break;
    }
    case Op::prop_apply:
    case Op::mu:
    case Op::nu:
      if (x.prop != y.prop) return x.prop < y.prop ? -1 : 1;
      if (int c = cmp_vec(x.params, y.params)) return c;
      break;
    default:
      break;
  }
  if (x.kids.size() != y.kids.size()) return x.kids.size() < y.kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (int c = compare(x.kids[i], y.kids[i])) return c;
  return 0;
}

std::set<Var> free_vars(const Formula& phi) {
  switch (phi.op()) {
    case Formula::Op::truth:
      return {};
    case Formula::Op::conj:
    case Formula::Op::disj: {
      std::set<Var> out = free_vars(phi.child(0));
      std::set<Var> r = free_vars(phi.child(1));
      out.insert(r.begin(), r.end());
      return out;
    }
    case Formula::Op::neg:
      return free_vars(phi.child(0));
    case Formula::Op::bind:
    case Formula::Op::dual_bind:
    case Formula::Op::bind_exec: {
      std::set<Var> out = free_vars(phi.child(0));
      out.erase(phi.spec().target);
      out.insert(phi.spec().causes.begin(), phi.spec().causes.end());
      out.insert(phi.spec().independent.begin(), phi.spec().independent.end());
      return out;
    }
    case Formula::Op::exec:
    case Formula::Op::dual_exec: {
      std::set<Var> out = free_vars(phi.child(0));
      out.insert(phi.var());
      return out;
    }
    case Formula::Op::step_product: {
      std::set<Var> out = free_vars(phi.child(0));
      for (const BindSpec& s : phi.factors()) out.erase(s.target);
      for (const BindSpec& s : phi.factors()) {
        out.insert(s.causes.begin(), s.causes.end());
        out.insert(s.independent.begin(), s.independent.end());
      }
      return out;
    }
    case Formula::Op::pomset_diamond: {
      std::set<Var> out = free_vars(phi.child(0));
      for (const Var& v : phi.var_pomset().vars) out.erase(v);
      return out;
    }
    case Formula::Op::prop_apply:
      return {phi.params().begin(), phi.params().end()};
    case Formula::Op::mu:
    case Formula::Op::nu:
      return {phi.params().begin(), phi.params().end()};
  }
  return {};
}

bool is_closed(const Formula& phi) { return free_vars(phi).empty(); }

namespace {

void collect_props(const Formula& phi, std::set<std::string> bound, std::set<std::string>& out) {
  switch (phi.op()) {
    case Formula::Op::prop_apply:
      if (!bound.count(phi.prop())) out.insert(phi.prop());
      return;
    case Formula::Op::mu:
    case Formula::Op::nu:
      bound.insert(phi.prop());
      collect_props(phi.child(0), std::move(bound), out);
      return;
    default:
      for (std::size_t i = 0; i < phi.child_count(); ++i) collect_props(phi.child(i), bound, out);
  }
}

}  // namespace

std::set<std::string> free_propositions(const Formula& phi) {
  std::set<std::string> out;
  collect_props(phi, {}, out);
  return out;
}

bool is_core(const Formula& phi) {
  switch (phi.op()) {
    case Formula::Op::disj:
    case Formula::Op::dual_bind:
    case Formula::Op::dual_exec:
    case Formula::Op::bind_exec:
    case Formula::Op::step_product:
    case Formula::Op::pomset_diamond:
    case Formula::Op::nu:
      return false;
    default:
      for (std::size_t i = 0; i < phi.child_count(); ++i)
        if (!is_core(phi.child(i))) return false;
      return true;
  }
}

bool is_mu_free(const Formula& phi) {
  switch (phi.op()) {
    case Formula::Op::prop_apply:
    case Formula::Op::mu:
    case Formula::Op::nu:
      return false;
    default:
      for (std::size_t i = 0; i < phi.child_count(); ++i)
        if (!is_mu_free(phi.child(i))) return false;
      return true;
  }
}

Formula expand_pomset_diamond(const VarPomset& p, Formula body) {
  const std::size_t n = p.size();
  std::vector<bool> remaining(n, true);
  std::size_t left = n;
  Formula out = std::move(body);
  while (left > 0) {
    // maximal element of highest index among the remaining ones
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!remaining[i]) continue;
      bool maximal = true;
      for (std::size_t j = 0; j < n; ++j)
        if (remaining[j] && p.less(i, j)) { maximal = false; break; }
      if (maximal) pick = i;  // keep scanning: highest index wins
    }
    remaining[pick] = false;
    --left;
    BindSpec spec;
    spec.label = p.labels[pick];
    spec.target = p.vars[pick];
    for (std::size_t j = 0; j < n; ++j) {
      if (!remaining[j]) continue;
      if (p.less(j, pick))
        spec.causes.push_back(p.vars[j]);
      else
        spec.independent.push_back(p.vars[j]);
    }
    out = Formula::bind_exec(std::move(spec), std::move(out));
  }
  return out;
}

namespace {

Formula desugar_product(const std::vector<BindSpec>& factors, bool exec_diamonds, Formula body) {
  // Each later factor's independence list gains the earlier targets.
  std::vector<BindSpec> adjusted = factors;
  for (std::size_t i = 1; i < adjusted.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Var& t = factors[j].target;
      auto& indep = adjusted[i].independent;
      if (std::find(indep.begin(), indep.end(), t) == indep.end()) indep.push_back(t);
    }
  }
  Formula out = std::move(body);
  if (exec_diamonds) {
    for (std::size_t i = factors.size(); i-- > 0;) out = Formula::exec(factors[i].target, std::move(out));
  }
  for (std::size_t i = adjusted.size(); i-- > 0;) out = Formula::bind(adjusted[i], std::move(out));
  return out;
}

}  // namespace

Formula desugar(const Formula& phi) {
  switch (phi.op()) {
    case Formula::Op::truth:
    case Formula::Op::prop_apply:
      return phi;
    case Formula::Op::conj:
      return Formula::conj(desugar(phi.child(0)), desugar(phi.child(1)));
    case Formula::Op::neg:
      return Formula::neg(desugar(phi.child(0)));
    case Formula::Op::bind:
      return Formula::bind(phi.spec(), desugar(phi.child(0)));
    case Formula::Op::exec:
      return Formula::exec(phi.var(), desugar(phi.child(0)));
    case Formula::Op::disj:
      return Formula::neg(Formula::conj(Formula::neg(desugar(phi.child(0))),
                                        Formula::neg(desugar(phi.child(1)))));
    case Formula::Op::dual_bind:
      return Formula::neg(Formula::bind(phi.spec(), Formula::neg(desugar(phi.child(0)))));
    case Formula::Op::dual_exec:
      return Formula::neg(Formula::exec(phi.var(), Formula::neg(desugar(phi.child(0)))));
    case Formula::Op::bind_exec:
      return Formula::bind(phi.spec(), Formula::exec(phi.spec().target, desugar(phi.child(0))));
    case Formula::Op::step_product:
      return desugar_product(phi.factors(), phi.product_execs(), desugar(phi.child(0)));
    case Formula::Op::pomset_diamond:
      return desugar(expand_pomset_diamond(phi.var_pomset(), phi.child(0)));
    case Formula::Op::mu:
      return Formula::mu(phi.prop(), phi.params(), desugar(phi.child(0)));
    case Formula::Op::nu:
      return desugar(gfp_desugar(phi));
  }
  return phi;
}

namespace {

Formula negate_prop(const Formula& phi, const std::string& prop) {
  switch (phi.op()) {
    case Formula::Op::prop_apply:
      if (phi.prop() == prop) return Formula::neg(phi);
      return phi;
    case Formula::Op::mu:
      if (phi.prop() == prop) return phi;  // shadowed
      return Formula::mu(phi.prop(), phi.params(), negate_prop(phi.child(0), prop));
    case Formula::Op::nu:
      if (phi.prop() == prop) return phi;
      return Formula::nu(phi.prop(), phi.params(), negate_prop(phi.child(0), prop));
    case Formula::Op::truth:
      return phi;
    case Formula::Op::conj:
      return Formula::conj(negate_prop(phi.child(0), prop), negate_prop(phi.child(1), prop));
    case Formula::Op::disj:
      return Formula::disj(negate_prop(phi.child(0), prop), negate_prop(phi.child(1), prop));
    case Formula::Op::neg:
      return Formula::neg(negate_prop(phi.child(0), prop));
    case Formula::Op::bind:
      return Formula::bind(phi.spec(), negate_prop(phi.child(0), prop));
    case Formula::Op::dual_bind:
      return Formula::dual_bind(phi.spec(), negate_prop(phi.child(0), prop));
    case Formula::Op::bind_exec:
      return Formula::bind_exec(phi.spec(), negate_prop(phi.child(0), prop));
    case Formula::Op::exec:
      return Formula::exec(phi.var(), negate_prop(phi.child(0), prop));
    case Formula::Op::dual_exec:
      return Formula::dual_exec(phi.var(), negate_prop(phi.child(0), prop));
    case Formula::Op::step_product:
      return Formula::step_product(phi.factors(), phi.product_execs(), negate_prop(phi.child(0), prop));
    case Formula::Op::pomset_diamond:
      return Formula::pomset_diamond(phi.var_pomset(), negate_prop(phi.child(0), prop));
  }
  return phi;
}

}  // namespace

Formula gfp_desugar(const Formula& phi) {
  switch (phi.op()) {
    case Formula::Op::nu: {
      Formula body = gfp_desugar(phi.child(0));
      return Formula::neg(
          Formula::mu(phi.prop(), phi.params(), Formula::neg(negate_prop(body, phi.prop()))));
    }
    case Formula::Op::truth:
    case Formula::Op::prop_apply:
      return phi;
    case Formula::Op::conj:
      return Formula::conj(gfp_desugar(phi.child(0)), gfp_desugar(phi.child(1)));
    case Formula::Op::disj:
      return Formula::disj(gfp_desugar(phi.child(0)), gfp_desugar(phi.child(1)));
    case Formula::Op::neg:
      return Formula::neg(gfp_desugar(phi.child(0)));
    case Formula::Op::bind:
      return Formula::bind(phi.spec(), gfp_desugar(phi.child(0)));
    case Formula::Op::dual_bind:
      return Formula::dual_bind(phi.spec(), gfp_desugar(phi.child(0)));
    case Formula::Op::bind_exec:
      return Formula::bind_exec(phi.spec(), gfp_desugar(phi.child(0)));
    case Formula::Op::exec:
      return Formula::exec(phi.var(), gfp_desugar(phi.child(0)));
    case Formula::Op::dual_exec:
      return Formula::dual_exec(phi.var(), gfp_desugar(phi.child(0)));
    case Formula::Op::step_product:
      return Formula::step_product(phi.factors(), phi.product_execs(), gfp_desugar(phi.child(0)));
    case Formula::Op::pomset_diamond:
      return Formula::pomset_diamond(phi.var_pomset(), gfp_desugar(phi.child(0)));
    case Formula::Op::mu:
      return Formula::mu(phi.prop(), phi.params(), gfp_desugar(phi.child(0)));
  }
  return phi;
}

namespace {

// precedence: mu/nu 0 (greedy body), or 1, and 2, prefix 3, atoms 4
int precedence(Formula::Op op) {
  switch (op) {
    case Formula::Op::mu:
    case Formula::Op::nu:
      return 0;
    case Formula::Op::disj:
      return 1;
    case Formula::Op::conj:
      return 2;
    case Formula::Op::truth:
    case Formula::Op::prop_apply:
      return 4;
    default:
      return 3;
  }
}

std::string vlist_text(const std::vector<Var>& vars) {
  std::string out = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += vars[i];
  }
  return out + "}";
}

std::string spec_guts(const BindSpec& s) {
  return vlist_text(s.causes) + ", " + vlist_text(s.independent) + "~ << " + s.label.name() + " " +
         s.target;
}

std::string render(const Formula& phi, int min_prec) {
  const int prec = precedence(phi.op());
  std::string out;
  switch (phi.op()) {
    case Formula::Op::truth:
      out = "T";
      break;
    case Formula::Op::conj:
      out = render(phi.child(0), 2) + " & " + render(phi.child(1), 3);
      break;
    case Formula::Op::disj:
      out = render(phi.child(0), 1) + " | " + render(phi.child(1), 2);
      break;
    case Formula::Op::neg:
      out = "!" + render(phi.child(0), 3);
      break;
    case Formula::Op::bind:
      out = "(" + spec_guts(phi.spec()) + ") " + render(phi.child(0), 3);
      break;
    case Formula::Op::dual_bind:
      out = "{" + spec_guts(phi.spec()) + "} " + render(phi.child(0), 3);
      break;
    case Formula::Op::bind_exec:
      out = "<<|" + spec_guts(phi.spec()) + "|>> " + render(phi.child(0), 3);
      break;
    case Formula::Op::exec:
      out = "<<" + phi.var() + ">> " + render(phi.child(0), 3);
      break;
    case Formula::Op::dual_exec:
      out = "[[" + phi.var() + "]] " + render(phi.child(0), 3);
      break;
    case Formula::Op::step_product: {
      out = "(";
      const auto& fs = phi.factors();
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) out += " (x) ";
        if (phi.product_execs())
          out += "<<|" + spec_guts(fs[i]) + "|>>";
        else
          out += "(" + spec_guts(fs[i]) + ")";
      }
      out += ") " + render(phi.child(0), 3);
      break;
    }
    case Formula::Op::pomset_diamond:
      return render(expand_pomset_diamond(phi.var_pomset(), phi.child(0)), min_prec);
    case Formula::Op::prop_apply: {
      out = phi.prop() + "(";
      for (std::size_t i = 0; i < phi.params().size(); ++i) {
        if (i) out += ",";
        out += phi.params()[i];
      }
      out += ")";
      break;
    }
    case Formula::Op::mu:
    case Formula::Op::nu: {
      out = (phi.op() == Formula::Op::mu ? "mu " : "nu ") + phi.prop() + "(";
      for (std::size_t i = 0; i < phi.params().size(); ++i) {
        if (i) out += ",";
        out += phi.params()[i];
      }
      out += "). " + render(phi.child(0), 0);
      break;
    }
  }
  if (prec < min_prec) return "(" + out + ")";
  return out;
}

}  // namespace

std::string Formula::to_string() const { return render(*this, 0); }

}  // namespace wtc
