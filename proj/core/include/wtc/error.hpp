#pragma once

#include <stdexcept>
#include <string>

namespace wtc {

/// Error codes for all contract violations raised by the library.
enum class Errc {
  cyclic_causality,
  self_conflict,
  causal_conflict_overlap,
  dangling_event,
  unknown_event,
  too_many_events,
  tau_in_carrier,
  inconsistent_set,
  domain_clash,
  range_clash,
  tau_argument,
  unbound_variable,
  not_applicable,
  not_a_bisimulation,
  arity_mismatch,
  unbound_proposition,
  positivity_violation,
  bounds_exceeded,
  syntax_error,
  arity_error,
  invalid_formula,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wtc
