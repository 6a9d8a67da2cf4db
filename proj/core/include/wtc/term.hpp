#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wtc/pes.hpp"

namespace wtc {

/// A finite process term: 0, prefix a.P (a may be tau), choice P+Q and
/// parallel P|Q without synchronization.
struct ProcessTerm {
  enum class Kind { nil, prefix, choice, par };

  Kind kind = Kind::nil;
  Label label;                        // prefix
  std::vector<ProcessTerm> children;  // prefix: 1, choice/par: 2

  static ProcessTerm nil() { return ProcessTerm{}; }
  static ProcessTerm prefix(Label l, ProcessTerm body);
  static ProcessTerm choice(ProcessTerm l, ProcessTerm r);
  static ProcessTerm par(ProcessTerm l, ProcessTerm r);
};

/// Grammar: "0", "a.P", "tau.P", "P+Q", "P|Q", parentheses; a bare label is
/// short for label.0. Prefix binds tighter than "|", which binds tighter
/// than "+".
ProcessTerm parse_term(std::string_view text);

std::string print_term(const ProcessTerm& t);

/// Standard PES semantics of finite terms: prefix events cause the body,
/// choice conflicts the two sides (generated on minimal events, then
/// saturated), parallel is a plain disjoint union.
PrimeEventStructure compile_term(const ProcessTerm& t, const std::string& name = "term");

}  // namespace wtc
