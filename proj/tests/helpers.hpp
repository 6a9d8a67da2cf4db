#pragma once

#include <string>
#include <vector>

#include "wtc/pes.hpp"
#include "wtc/term.hpp"

namespace wtc::test {

// Fig-style structures used across the suites.
inline PrimeEventStructure a_tau_b() { return compile_term(parse_term("a.tau.b"), "fig1-left"); }
inline PrimeEventStructure a_b() { return compile_term(parse_term("a.b"), "fig1-right"); }
inline PrimeEventStructure a_plus_b() { return compile_term(parse_term("a+b"), "a+b"); }
inline PrimeEventStructure a_par_b() { return compile_term(parse_term("a|b"), "a|b"); }
inline PrimeEventStructure diamond_choice() {
  return compile_term(parse_term("a.b + b.a"), "a.b+b.a");
}

inline Configuration config_of(std::initializer_list<EventId> events) {
  Configuration c;
  for (EventId e : events) c.insert(e);
  return c;
}

}  // namespace wtc::test
