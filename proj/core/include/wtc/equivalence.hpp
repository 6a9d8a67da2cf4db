#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wtc/formula.hpp"
#include "wtc/pes.hpp"
#include "wtc/pomset.hpp"

namespace wtc {

enum class Kind { interleaving, step, pomset, hp, hhp };
enum class Strength { strong, weak };

struct EquivalenceKind {
  Kind kind;
  Strength strength;
};

const char* kind_name(Kind k) noexcept;
const char* strength_name(Strength s) noexcept;
/// "weak-hhp", "strong-hm", ... ; inverse of the CLI relation names.
std::string relation_name(EquivalenceKind rel);
std::optional<EquivalenceKind> parse_relation_name(const std::string& text);

/// How hereditary closure treats tau-variant prefixes. `visible` (the
/// default) asks, for every restriction of the isomorphism to a
/// cause-closed visible subset, that some pointwise-smaller triple with that
/// visible shape is related; `strict` demands every pointwise-smaller triple
/// literally (pointwise_prefixes). The two differ only on structures where a
/// tau event is entangled with conflict; see the README discussion.
enum class HhpClosure { visible, strict };

struct FlatWitness {
  std::vector<std::pair<Configuration, Configuration>> pairs;
  bool contains(Configuration a, Configuration b) const;
};

struct PosetalWitness {
  std::vector<PosetalTriple> triples;
  bool contains(const PosetalTriple& t) const;
};

/// Result of an equivalence check: a witnessing relation when equivalent, or
/// a refutation trace plus (for weak relations) a distinguishing formula.
struct Verdict {
  EquivalenceKind relation{Kind::interleaving, Strength::weak};
  bool equivalent = false;
  std::optional<FlatWitness> flat_witness;
  std::optional<PosetalWitness> posetal_witness;
  std::optional<Formula> certificate;   // holds on the left side, fails on the right
  std::vector<std::string> trace;       // refutation game trace (inequivalent verdicts)
};

/// Greatest weak/strong bisimulation for the flat kinds (interleaving, step,
/// pomset) by backward refinement over configuration pairs; equivalent iff
/// the empty pair survives.
Verdict check_flat_bisim(Kind kind, Strength strength, const PrimeEventStructure& left,
                         const PrimeEventStructure& right);

/// Greatest (hereditary) history-preserving bisimulation by refinement over
/// the posetal product.
Verdict check_hp_bisim(Strength strength, const PrimeEventStructure& left,
                       const PrimeEventStructure& right);
Verdict check_hhp_bisim(Strength strength, const PrimeEventStructure& left,
                        const PrimeEventStructure& right, HhpClosure closure = HhpClosure::visible);

/// Dispatch over all ten relations.
Verdict check_bisimulation(EquivalenceKind rel, const PrimeEventStructure& left,
                           const PrimeEventStructure& right);

/// Distinguishing formula in the fragment matching the kind (HM logic for
/// interleaving, step/pomset logic, hp logic; full logic for hhp), built from
/// the refutation game. Requires a weak, inequivalent verdict (NotApplicable
/// otherwise; strong relations have no formula in this logic, so their
/// certificate is the game trace). For hhp the construction falls back to the
/// hp game when that also refutes, then to bounded formula enumeration; when
/// both fail the result is empty and the game trace alone certifies.
std::optional<Formula> distinguishing_formula(EquivalenceKind rel, const PrimeEventStructure& left,
                                              const PrimeEventStructure& right,
                                              const Verdict& failed);

/// Independent re-checks of witness relations against the defining transfer
/// clauses (and closure, for hhp).
bool verify_flat_witness(Kind kind, Strength strength, const PrimeEventStructure& left,
                         const PrimeEventStructure& right, const FlatWitness& witness);
bool verify_posetal_witness(Kind kind, Strength strength, const PrimeEventStructure& left,
                            const PrimeEventStructure& right, const PosetalWitness& witness,
                            HhpClosure closure = HhpClosure::visible);

/// The PES of a weak hhp-bisimulation: events are triples (e1, f, e2) whose
/// cause-closure triples are related, ordered by isomorphism containment,
/// conflicting when no related triple extends both; labelled from the left.
struct QuotientPes {
  PrimeEventStructure pes;
  std::vector<EventId> project_left;   // per quotient event
  std::vector<EventId> project_right;
  std::vector<PosetalTriple> event_triples;
};

/// Builds the quotient from a weak hhp witness containing the empty triple;
/// NotABisimulation if the relation fails its re-check.
QuotientPes build_quotient_pes(const PrimeEventStructure& left, const PrimeEventStructure& right,
                               const PosetalWitness& witness);

/// The two projection relations of the quotient: for each quotient
/// configuration, the projection isomorphism paired with every side
/// configuration whose visible part is the image. Candidates for
/// prune_to_posetal_bisimulation.
PosetalWitness quotient_projection_relation(const QuotientPes& q,
                                            const PrimeEventStructure& side_pes, bool left_side);

/// Greatest sub-relation of the candidates closed under hp transfer (and, for
/// hhp, hereditary closure): backward refinement restricted to the given set.
PosetalWitness prune_to_posetal_bisimulation(Kind kind, Strength strength,
                                             const PrimeEventStructure& left,
                                             const PrimeEventStructure& right,
                                             const PosetalWitness& candidates,
                                             HhpClosure closure = HhpClosure::visible);

}  // namespace wtc
