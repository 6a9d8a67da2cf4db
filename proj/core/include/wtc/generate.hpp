#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "wtc/formula.hpp"
#include "wtc/logic.hpp"
#include "wtc/pes.hpp"

namespace wtc {

/// Seeded random structures and formulas for the property suites.

struct PesGenOptions {
  std::size_t max_events = 5;
  double cause_probability = 0.3;
  double conflict_probability = 0.2;
  double tau_probability = 0.25;
  std::vector<std::string> alphabet = {"a", "b"};
};

PrimeEventStructure random_pes(std::mt19937& rng, const PesGenOptions& opts = {});

struct FormulaGenOptions {
  int max_depth = 3;
  std::vector<std::string> alphabet = {"a", "b"};
  /// Variables the generated formula may leave free.
  std::vector<Var> free_pool;
};

Formula random_formula(std::mt19937& rng, const FormulaGenOptions& opts = {});

/// Environment binding each variable to a random visible event (requires one).
Environment random_environment(std::mt19937& rng, const PrimeEventStructure& pes,
                               const std::set<Var>& vars);

}  // namespace wtc
