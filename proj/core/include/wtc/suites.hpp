#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wtc/sweep.hpp"

namespace wtc {

/// Parameters for the exhaustive property suites over swept small structures.
struct SuiteOptions {
  SweepSpec sweep;
  int depth = 3;                  // bounded enumeration depth
  std::size_t lemma_cases = 1000; // cases per lemma in the "lemmas" suite
  unsigned seed = 20250808;       // rng seed for generated cases
};

struct SuiteReport {
  std::string name;
  std::size_t structures = 0;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // a line per failure (capped)

  bool ok() const { return failures == 0; }
};

/// Available suite names:
///   strong-implies-weak  strong-K equivalence implies weak-K, all kinds
///   hierarchy            weak hhp => hp => pomset => step => interleaving
///   certificates         every inequivalent weak pair yields a verified
///                        distinguishing formula in the matching fragment
///   coincidence          bounded fragment enumeration agrees with the
///                        hm/step/pomset checkers at the configured depth
///   quotient             hhp-equivalent pairs: quotient validates and both
///                        projections re-check as weak hhp-bisimulations
///   fixpoint             mu iteration stabilizes within |lp|+1, gfp/lfp
///                        duality, and no bounded mu-formula separates an
///                        hhp-equivalent pair
///   successors           weak pomset successors: definition filter equals
///                        path search on every swept structure
///   lemmas               negation, legality, environment irrelevance and
///                        the bind-prefix/weak-transition correspondence on
///                        generated cases
std::vector<std::string> suite_names();

SuiteReport run_suite(const std::string& name, const SuiteOptions& opts);

}  // namespace wtc
