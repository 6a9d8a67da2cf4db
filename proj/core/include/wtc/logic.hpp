#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wtc/formula.hpp"
#include "wtc/pes.hpp"
#include "wtc/pomset.hpp"

namespace wtc {

/// Finite map from variables to visible events; the relevant restriction of
/// the paper-level total environments.
class Environment {
public:
  Environment() = default;

  static Environment empty() { return Environment(); }

  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<Var, EventId>>& pairs() const { return pairs_; }

  std::optional<EventId> lookup(const Var& v) const;
  /// Throws UnboundVariable.
  EventId at(const Var& v) const;

  /// eta[z |-> e]; overrides an existing binding of z.
  Environment bound(const Var& z, EventId e) const;
  Environment restricted_to(const std::set<Var>& vars) const;
  /// Image of the bound variables.
  EventSet image() const;
  EventSet image_of(const std::set<Var>& vars) const;

  friend bool operator==(const Environment& a, const Environment& b) { return a.pairs_ == b.pairs_; }
  friend bool operator<(const Environment& a, const Environment& b) { return a.pairs_ < b.pairs_; }

private:
  std::vector<std::pair<Var, EventId>> pairs_;  // sorted by variable
};

struct LegalPair {
  Configuration config;
  Environment env;

  friend bool operator==(const LegalPair& a, const LegalPair& b) {
    return a.config == b.config && a.env == b.env;
  }
  friend bool operator<(const LegalPair& a, const LegalPair& b) {
    if (a.config != b.config) return a.config < b.config;
    return a.env < b.env;
  }
};

/// A set of legal pairs with environments normalized to the free variables of
/// the formula it denotes.
struct Denotation {
  std::set<LegalPair> pairs;

  bool contains(Configuration c, const Environment& env) const {
    return pairs.count(LegalPair{c, env}) > 0;
  }
  std::size_t size() const { return pairs.size(); }
};

struct EvalOptions {
  /// Stricter reading of eta(y) || (tau* e tau*): additionally requires every
  /// tau event t <= e outside the causes of eta(y) to be concurrent with
  /// eta(y). Off by default.
  bool strict_tau_independence = false;
};

/// True iff C u eta(fv(phi)) is a consistent set. eta must bind fv(phi).
bool is_legal_pair(const PrimeEventStructure& pes, Configuration c, const Environment& eta,
                   const Formula& phi);

/// All legal pairs for phi, with environments over exactly fv(phi).
std::vector<LegalPair> legal_pairs(const PrimeEventStructure& pes, const Formula& phi);

/// Denotation of a core fixpoint-free formula, computed bottom-up.
Denotation denotation(const PrimeEventStructure& pes, const Formula& phi, EvalOptions opts = {});

/// E, C |=eta phi. Desugars first; fixpoint formulas are evaluated with an
/// empty proposition environment (free propositions raise UnboundProposition).
bool satisfies(const PrimeEventStructure& pes, Configuration c, const Environment& eta,
               const Formula& phi, EvalOptions opts = {});

/// Fragment membership, desugaring-aware. Every formula belongs to the full
/// logic; the flags mark the four restricted grammars.
struct Fragments {
  bool hm = false;
  bool step = false;
  bool pomset = false;
  bool hp = false;
};

Fragments fragment_of(const Formula& phi);

enum class FragmentTag { hm, step, pomset, hp, full };

const char* fragment_name(FragmentTag tag) noexcept;

/// The formula <<|p_Z|>> body over canonical variables z1..zn (carrier
/// order), expanded into nested bind-exec diamonds by peeling maximal
/// elements (highest variable index breaks ties).
Formula pomset_formula(const Pomset& p, Formula body = Formula::truth());

/// Membership of p (carrier positions matched to the spec targets z1..zn in
/// order) in the pomset class of the given bind prefix: labels match, every
/// x-listed variable is <=, every y-listed variable is not <=.
bool pomset_class_member(const Pomset& p, const std::vector<BindSpec>& prefix);

struct SeparationResult {
  bool separated = false;
  std::optional<Formula> separator;  // satisfied by exactly one side
  bool holds_on_left = false;        // which side satisfies it
  std::size_t formulas_considered = 0;
};

/// Enumerates closed formulas of the fragment up to the given modal depth
/// (canonically normalized, labels from the union alphabet) and reports the
/// first separator, if any. For the hm/step/pomset fragments the search is
/// signature-complete per modal depth: "no separator" is exact for the
/// fragment at that depth.
SeparationResult bounded_logical_equiv(const PrimeEventStructure& left,
                                       const PrimeEventStructure& right, FragmentTag fragment,
                                       int depth);

/// Bounded fixpoint-formula family: single arity-0 fixpoints whose bodies
/// chain fragment diamonds over the recursion variable with closed side
/// conditions, up to the given modal depth.
SeparationResult bounded_mu_equiv(const PrimeEventStructure& left, const PrimeEventStructure& right,
                                  FragmentTag fragment, int depth);

}  // namespace wtc
