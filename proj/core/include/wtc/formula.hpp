#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "wtc/label.hpp"
#include "wtc/pomset.hpp"

namespace wtc {

using Var = std::string;

/// The (x, y~ << a z) data of a causal bind: the event bound to z must be
/// caused by the events of the x-variables, independent from those of the
/// y-variables, and carry the visible label a.
struct BindSpec {
  std::vector<Var> causes;       // x
  std::vector<Var> independent;  // y
  Label label;                   // a, never tau
  Var target;                    // z

  friend bool operator==(const BindSpec& a, const BindSpec& b) {
    return a.causes == b.causes && a.independent == b.independent && a.label == b.label &&
           a.target == b.target;
  }
};

/// A labelled poset over variables; payload of the pomset diamond <<|p_Z|>>.
struct VarPomset {
  std::vector<Var> vars;
  std::vector<Label> labels;
  std::vector<std::uint64_t> strict;  // strict[i] bit j <=> vars[i] < vars[j]

  std::size_t size() const { return vars.size(); }
  bool less(std::size_t i, std::size_t j) const { return (strict[i] >> j) & 1u; }

  friend bool operator==(const VarPomset& a, const VarPomset& b) {
    return a.vars == b.vars && a.labels == b.labels && a.strict == b.strict;
  }
};

/// Immutable formula AST for the logic and its fixpoint extension. Core nodes
/// are truth, conj, neg, bind, exec (plus prop_apply and mu); the remaining
/// operators are derived and rewritten by desugar()/gfp_desugar().
class Formula {
public:
  enum class Op {
    truth,
    conj,
    neg,
    bind,        // (x, y~ << a z) phi
    exec,        // <<z>> phi
    disj,        // phi | phi            (derived)
    dual_bind,   // {x, y~ << a z} phi   (derived)
    dual_exec,   // [[z]] phi            (derived)
    bind_exec,   // <<|x, y~ << a z|>> phi (derived)
    step_product,  // (D (x) D ... ) phi (derived)
    pomset_diamond,  // <<|p_Z|>> phi    (derived)
    prop_apply,  // X(x1,...,xn)
    mu,          // mu X(x...). phi
    nu,          // nu X(x...). phi      (derived)
  };

  /// Default-constructed formulas are T.
  Formula();

  static Formula truth();
  static Formula conj(Formula l, Formula r);
  static Formula neg(Formula b);
  static Formula disj(Formula l, Formula r);
  static Formula bind(BindSpec spec, Formula body);
  static Formula exec(Var z, Formula body);
  static Formula dual_bind(BindSpec spec, Formula body);
  static Formula dual_exec(Var z, Formula body);
  static Formula bind_exec(BindSpec spec, Formula body);
  /// exec_diamonds: true for products of <<|..|>> factors, false for
  /// products of plain binds. Factor targets must be pairwise distinct.
  static Formula step_product(std::vector<BindSpec> factors, bool exec_diamonds, Formula body);
  static Formula pomset_diamond(VarPomset p, Formula body);
  static Formula prop_apply(std::string prop, std::vector<Var> args);
  static Formula mu(std::string prop, std::vector<Var> params, Formula body);
  static Formula nu(std::string prop, std::vector<Var> params, Formula body);

  Op op() const;
  const Formula& child(std::size_t i = 0) const;  // kids: conj/disj have 2, prefix forms 1
  std::size_t child_count() const;
  const BindSpec& spec() const;                  // bind, dual_bind, bind_exec
  const std::vector<BindSpec>& factors() const;  // step_product
  bool product_execs() const;                    // step_product
  const VarPomset& var_pomset() const;           // pomset_diamond
  const Var& var() const;                        // exec, dual_exec
  const std::string& prop() const;               // prop_apply, mu, nu
  const std::vector<Var>& params() const;        // prop_apply args, mu/nu params

  /// Concrete syntax (parses back via parse_formula).
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Formula& a, const Formula& b) { return compare(a, b) != 0; }
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
  static int compare(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Free event variables, per the inductive clauses (derived operators via
/// their desugaring; X(x) and mu X(x).phi contribute x).
std::set<Var> free_vars(const Formula& phi);

bool is_closed(const Formula& phi);

/// Proposition names not bound by an enclosing mu/nu.
std::set<std::string> free_propositions(const Formula& phi);

/// True if phi uses only core nodes (truth/conj/neg/bind/exec, plus
/// prop_apply/mu).
bool is_core(const Formula& phi);

/// True if phi contains no prop_apply/mu/nu node.
bool is_mu_free(const Formula& phi);

/// Rewrites every derived operator to core form: duals to negations, bind-exec
/// to bind-then-exec, step products to y-extended bind chains, pomset diamonds
/// by maximal-element decomposition, disjunction to negated conjunction.
/// Fixpoint nodes are kept (nu is rewritten via its mu definition).
/// Idempotent on core formulas.
Formula desugar(const Formula& phi);

/// Expands only the pomset diamond recursion: <<|p_Z|>>phi as nested
/// bind-exec diamonds, choosing the maximal element of highest variable index
/// at each step.
Formula expand_pomset_diamond(const VarPomset& p, Formula body);

/// nu X(x).phi  ~>  !(mu X(x). !phi~) with X replaced by !X in the body;
/// applied recursively through the whole formula.
Formula gfp_desugar(const Formula& phi);

}  // namespace wtc
