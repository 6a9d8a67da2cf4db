#pragma once

#include <string>
#include <string_view>

#include "wtc/formula.hpp"
#include "wtc/pes.hpp"

namespace wtc {

/// Parses the line-oriented PES format:
///
///   pes <name>
///   event <id> <label|tau>
///   cause <id> <id>          # generating pairs; transitive closure applied
///   conflict <id> <id>       # generating pairs; hereditary saturation applied
///
/// '#' starts a comment. Syntax and validation errors carry line/column
/// positions in their message.
PrimeEventStructure parse_pes(std::string_view text);

/// Canonical text for a PES: transitively reduced causes, minimal conflicts.
/// parse_pes(print_pes(x)) is structurally equal to x.
std::string print_pes(const PrimeEventStructure& pes);

/// Parses the ASCII formula grammar:
///
///   phi := "T" | phi "&" phi | phi "|" phi | "!" phi
///        | "(" vlist "," vlist "~" "<<" label var ")" phi
///        | "{" vlist "," vlist "~" "<<" label var "}" phi
///        | "<<" var ">>" phi | "[[" var "]]" phi
///        | "<<|" vlist "," vlist "~" "<<" label var "|>>" phi
///        | "(" diamond ("(x)" diamond)* ")" phi
///        | ident "(" vars ")" | ("mu"|"nu") ident "(" vars ")" "." phi
///   vlist := "{" (var ("," var)*)? "}"
///
/// Prefix operators bind tighter than "&", which binds tighter than "|";
/// the comma between the two vlists may be omitted.
Formula parse_formula(std::string_view text);

/// Formula::to_string; parse_formula round-trips it.
std::string print_formula(const Formula& phi);

}  // namespace wtc
