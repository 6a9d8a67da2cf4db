#pragma once

#include <string>
#include <utility>

#include "wtc/error.hpp"

namespace wtc {

/// An event label: either a visible name over the alphabet, or the
/// distinguished silent label tau. tau is distinct from every visible name;
/// "tau" is a reserved token.
class Label {
public:
  /// Default-constructed labels are tau.
  Label() = default;

  static Label tau() { return Label(); }

  static Label visible(std::string name) {
    if (name.empty()) raise(Errc::syntax_error, "visible label must be a non-empty token");
    if (name == "tau") raise(Errc::tau_argument, "'tau' is reserved for the silent label");
    Label l;
    l.name_ = std::move(name);
    return l;
  }

  bool is_tau() const { return name_.empty(); }
  bool is_visible() const { return !name_.empty(); }

  /// Printable token: the visible name, or "tau".
  const std::string& name() const {
    static const std::string tau_token = "tau";
    return name_.empty() ? tau_token : name_;
  }

  friend bool operator==(const Label& a, const Label& b) { return a.name_ == b.name_; }
  friend bool operator!=(const Label& a, const Label& b) { return a.name_ != b.name_; }
  friend bool operator<(const Label& a, const Label& b) { return a.name_ < b.name_; }

private:
  std::string name_;  // empty encodes tau
};

}  // namespace wtc
